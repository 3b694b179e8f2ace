"""Reservoir state iteration: encode, run the register, feed back.

Ties the classical encoding layer to the sampled quantum layer and drives
the closed loop used by every workflow: lagged inputs and the previous
squashed residual go in, average spins come out, the linear readout predicts
the next target, and its residual becomes the next error signal.

The step loop is the hot path of every benchmark, so Reservoir precomputes
the feedback structure of its topology and samples the register inline;
the result is bit-identical to composing encode_angles with run_step on a
generator in the same state (covered by tests).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .encoding import HALF_PI, encode_angles
from .quantum import run_step
from .readout import ForecastRecord, RlsReadout, squash_error
from .topology import ReservoirTopology

if TYPE_CHECKING:
    from .config import RunConfig


class Reservoir:
    """A stateful noisy qubit register driven one step at a time."""

    def __init__(
        self,
        topo: ReservoirTopology,
        weights,
        noise,
        shots: int,
        rng: np.random.Generator,
        aggregation: str = "sum",
        initial_spins: np.ndarray | float = 0.0,
    ):
        self.topo = topo
        self.weights = weights
        self.noise = noise
        self.shots = shots
        self.rng = rng
        self.aggregation = aggregation
        n = topo.n_qubits
        if np.isscalar(initial_spins):
            self.spins = np.full(n, float(initial_spins))
        else:
            self.spins = np.asarray(initial_spins, dtype=float).copy()
            if self.spins.shape != (n,):
                raise ValueError("initial_spins must match the qubit count")

        # precomputed encode structure: feedback matrix plus per-branch gains
        fb = np.zeros((n, n))
        has_fb = np.zeros(n, dtype=bool)
        for m in range(n):
            members = topo.feedback_set(m)
            if members:
                has_fb[m] = True
                w = 1.0 / len(members) if aggregation == "mean" else 1.0
                for j in members:
                    fb[m, j] = w
        self._fb = fb
        self._in_gain = np.where(has_fb, weights.alpha, weights.alpha_prime)
        self._err_gain = np.where(has_fb, weights.gamma, weights.gamma_prime)
        self._beta = weights.beta

        self._sigma = noise.angle_jitter_sigma
        self._kappa = noise.crosstalk_kappa
        self._p01 = noise.p_flip_0to1
        self._flip_scale = 1.0 - noise.p_flip_0to1 - noise.p_flip_1to0

    def encode(self, u_window: np.ndarray, error: float) -> np.ndarray:
        """Rotation angles for the next step given inputs and feedback."""
        shifted = (self.spins + 1.0) / 2.0
        units = (
            self._in_gain * u_window
            + self._beta * (self._fb @ shifted)
            + self._err_gain * error
        )
        return np.clip(HALF_PI * units, 0.0, HALF_PI)

    def step(self, u_window: np.ndarray, error: float = 0.0) -> np.ndarray:
        """Advance one time step and return the new average spins."""
        theta = self.encode(np.asarray(u_window, dtype=float), error)
        if self.noise.per_shot_jitter:
            self.spins = run_step(theta, self.noise, self.shots, self.rng)
            return self.spins

        # inline of quantum.run_step for the common per-step-jitter case
        eff = theta.copy()
        if self._kappa != 0.0 and theta.size > 1:
            leak = np.zeros_like(theta)
            leak[1:] += theta[:-1]
            leak[:-1] += theta[1:]
            eff += self._kappa * leak
        eff += self._sigma * self.rng.standard_normal(theta.size)
        p_exc = np.sin(eff / 2.0) ** 2
        p_one = self._p01 + p_exc * self._flip_scale
        n_one = self.rng.binomial(self.shots, p_one)
        self.spins = 1.0 - 2.0 * n_one / self.shots
        return self.spins

    def reference_step(self, u_window: np.ndarray, error: float = 0.0) -> np.ndarray:
        """Slow-path step through the public layer functions (for tests)."""
        theta = encode_angles(
            u_window, self.spins, error, self.topo, self.weights, self.aggregation
        )
        self.spins = run_step(theta, self.noise, self.shots, self.rng)
        return self.spins


def build_reservoir(
    cfg: "RunConfig",
    topo: ReservoirTopology,
    rng: np.random.Generator,
    initial_spins: np.ndarray | float | None = None,
) -> Reservoir:
    return Reservoir(
        topo=topo,
        weights=cfg.weights,
        noise=cfg.noise,
        shots=cfg.shots,
        rng=rng,
        aggregation=cfg.aggregation,
        initial_spins=cfg.initial_spin if initial_spins is None else initial_spins,
    )


@dataclass
class LoopResult:
    """Outcome of a closed-loop forecasting run."""

    records: list[ForecastRecord]
    spin_history: np.ndarray  # (n_records, n_qubits), spins used for each record
    burn_in: int  # leading records excluded from summary metrics
    feedback_scale: float  # residual scale frozen after burn-in (0 if degenerate)

    @property
    def evaluated(self) -> list[ForecastRecord]:
        return self.records[self.burn_in :]


def forecast_loop(
    x: np.ndarray,
    y: np.ndarray,
    topo: ReservoirTopology,
    cfg: "RunConfig",
    rng: np.random.Generator,
    start: int | None = None,
    initial_spins: np.ndarray | float | None = None,
) -> LoopResult:
    """One-step-ahead forecasting with per-step readout updates.

    At step t the register is encoded from the lag window
    u_m = x[t - m] (m = 0..n_qubits-1), the previous spins, and the previous
    squashed residual; the readout predicts y[t], observes it, updates, and
    the squashed residual feeds the next step. The first burn_in_fraction of
    records is excluded from metrics (the reservoir and readout still update
    through it); the residual scale of the error squashing is the running
    mean absolute residual during burn-in, frozen once burn-in ends.

    Args:
        x: input series in [0, 1], one value per time index.
        y: target aligned with x; y[t] is what step t predicts.
        start: first step index; defaults to n_qubits - 1 (full lag window).

    Returns:
        LoopResult with one record per step from start to len(x) - 1.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = topo.n_qubits
    if start is None:
        start = n - 1
    if start < n - 1:
        raise ValueError(f"start must be >= n_qubits - 1 = {n - 1}, got {start}")
    if len(y) != len(x):
        raise ValueError("x and y must have equal length")
    n_steps = len(x) - start
    if n_steps < 2:
        raise ValueError("series too short for the lag window")

    burn_in = int(n_steps * cfg.burn_in_fraction)
    reservoir = build_reservoir(cfg, topo, rng, initial_spins)
    readout = RlsReadout(
        n,
        ridge_lambda=cfg.ridge_lambda,
        forgetting=cfg.forgetting,
        intercept=cfg.intercept,
    )

    fixed_scale = cfg.feedback_scale if isinstance(cfg.feedback_scale, float) else None
    abs_residual_sum = 0.0
    scale = fixed_scale if fixed_scale is not None else 0.0

    records: list[ForecastRecord] = []
    history = np.empty((n_steps, n), dtype=float)
    lags = np.arange(n)
    error = 0.0
    for k, t in enumerate(range(start, len(x))):
        spins = reservoir.step(x[t - lags], error)
        history[k] = spins
        rec = ForecastRecord.make(t, float(y[t]), readout.predict(spins))
        records.append(rec)
        readout.update(spins, rec.actual)

        if fixed_scale is None and k < burn_in:
            # running mean during burn-in; untouched (frozen) afterwards
            abs_residual_sum += abs(rec.residual)
            scale = abs_residual_sum / (k + 1)
        error = squash_error(rec.residual, scale) if scale > 0 else 0.0

    return LoopResult(
        records=records,
        spin_history=history,
        burn_in=burn_in,
        feedback_scale=scale,
    )
