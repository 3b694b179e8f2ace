"""qreservoir: noisy qubit-register reservoir computing.

A deterministic, seedable simulator of a shallow single-qubit-gate register
with classical feedback, plus the toolkit built around it: topology-sequence
memory-capacity characterization, NARMA5 benchmarking, and one-step-ahead
volatility-index forecasting from index-return series.
"""

from .config import RunConfig
from .encoding import (
    AsymTransformParams,
    EncodingWeights,
    asym_transform,
    delta,
    encode_angles,
    log_returns,
)
from .errors import ConfigError, DataError, DivergenceError
from .mc import MCResult, collect_states, delay_r_squared, gen_drive, memory_capacity, sweep
from .narma import NarmaParams, gen_narma5, nmse, run_narma_benchmark
from .pipeline import (
    DiagnosticsReport,
    MarketSeries,
    diagnostics,
    load_market_csv,
    run_forecast,
    synthetic_market_series,
)
from .quantum import NOISE_PRESETS, NoiseModel, ideal_spin, noise_preset, run_step
from .readout import ForecastRecord, RlsReadout, batch_ridge, mse, squash_error
from .reservoir import Reservoir, forecast_loop
from .topology import (
    ReservoirTopology,
    build_sequence,
    edge_density,
    resolve_selector,
    sequence_length,
)

__version__ = "0.1.0"

__all__ = [
    "AsymTransformParams",
    "ConfigError",
    "DataError",
    "DiagnosticsReport",
    "DivergenceError",
    "EncodingWeights",
    "ForecastRecord",
    "MCResult",
    "MarketSeries",
    "NOISE_PRESETS",
    "NarmaParams",
    "NoiseModel",
    "Reservoir",
    "ReservoirTopology",
    "RlsReadout",
    "RunConfig",
    "asym_transform",
    "batch_ridge",
    "build_sequence",
    "collect_states",
    "delay_r_squared",
    "delta",
    "diagnostics",
    "edge_density",
    "encode_angles",
    "forecast_loop",
    "gen_drive",
    "gen_narma5",
    "ideal_spin",
    "load_market_csv",
    "log_returns",
    "memory_capacity",
    "mse",
    "nmse",
    "noise_preset",
    "resolve_selector",
    "run_forecast",
    "run_narma_benchmark",
    "run_step",
    "sequence_length",
    "squash_error",
    "sweep",
    "synthetic_market_series",
    "__version__",
]
