"""Fifth-order NARMA sequence generation and benchmarking.

The task couples a quadratic autoregression on the last five outputs with a
delayed product of a smooth, bounded input built from three sine factors.
One-step-ahead forecasting of this sequence is the standard probe for the
memory-plus-nonlinearity capability of a reservoir.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import DataError, DivergenceError
from .reservoir import LoopResult, forecast_loop
from .topology import resolve_selector

if TYPE_CHECKING:
    from .config import RunConfig

DIVERGENCE_LIMIT = 1e6


@dataclass(frozen=True)
class NarmaParams:
    """Coefficients of the NARMA5 recursion and its sine-product input."""

    alpha: float = 0.30
    beta: float = 0.05
    gamma: float = 1.50
    delta: float = 0.10
    mu: float = 0.10
    f0: float = 2.11
    f1: float = 3.73
    f2: float = 4.11
    period: float = 100.0

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError(f"period must be > 0, got {self.period}")
        for name in ("alpha", "beta", "gamma", "delta", "mu", "f0", "f1", "f2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def gen_narma5(length: int, params: NarmaParams = NarmaParams()):
    """Generate the input series s_t and the NARMA5 target series v_t.

    s_t = mu * (sin(2 pi f0 t / T) sin(2 pi f1 t / T) sin(2 pi f2 t / T) + 1)
    v_{t+1} = alpha v_t + beta v_t (v_t + ... + v_{t-4})
              + gamma s_{t-4} s_t + delta

    with v_0..v_4 = 0. Fully deterministic.

    Raises:
        DivergenceError: if |v| exceeds 1e6 at some step.
    """
    if length < 6:
        raise ValueError(f"length must be >= 6, got {length}")
    t = np.arange(length, dtype=float)
    w = 2.0 * math.pi * t / params.period
    s = params.mu * (
        np.sin(w * params.f0) * np.sin(w * params.f1) * np.sin(w * params.f2) + 1.0
    )
    v = np.zeros(length, dtype=float)
    for k in range(4, length - 1):
        v[k + 1] = (
            params.alpha * v[k]
            + params.beta * v[k] * (v[k] + v[k - 1] + v[k - 2] + v[k - 3] + v[k - 4])
            + params.gamma * s[k - 4] * s[k]
            + params.delta
        )
        if not math.isfinite(v[k + 1]) or abs(v[k + 1]) > DIVERGENCE_LIMIT:
            raise DivergenceError(k + 1, v[k + 1])
    return s, v


def nmse(predicted, actual) -> float:
    """Normalized mean squared error: sum((a - p)^2) / sum(a^2)."""
    p = np.asarray(predicted, dtype=float)
    a = np.asarray(actual, dtype=float)
    if p.shape != a.shape or p.ndim != 1 or p.size == 0:
        raise ValueError("predicted and actual must be equal-length non-empty series")
    denom = float(np.sum(a**2))
    if denom == 0.0:
        raise DataError("actual series has zero energy; NMSE undefined")
    return float(np.sum((a - p) ** 2) / denom)


@dataclass
class NarmaOutcome:
    """Benchmark result: NMSE over the evaluated records plus the full run."""

    nmse: float
    loop: LoopResult
    params: NarmaParams
    length: int


def run_narma_benchmark(
    cfg: "RunConfig", params: NarmaParams | None = None
) -> NarmaOutcome:
    """One-step-ahead NARMA5 forecasting with the configured reservoir.

    The input series is rescaled from its exact range [0, 2 mu] to [0, 1]
    and fed through the same lag-window encoding as the market pipeline;
    the first burn_in_fraction of records is excluded from the NMSE.
    """
    params = params or cfg.narma
    s, v = gen_narma5(cfg.narma_length, params)
    x = s / (2.0 * params.mu)  # exact affine map onto [0, 1]

    # step t predicts v[t+1]; drop the final input so every step has a target
    y = v[1:]
    x = x[:-1]

    topo = resolve_selector(cfg.topology, cfg.n_qubits)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(2,)))
    loop = forecast_loop(x, y, topo, cfg, rng)

    evaluated = loop.evaluated
    value = nmse(
        [r.predicted for r in evaluated],
        [r.actual for r in evaluated],
    )
    return NarmaOutcome(nmse=value, loop=loop, params=params, length=cfg.narma_length)
