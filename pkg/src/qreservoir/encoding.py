"""Classical pre-processing: returns, differences, the asymmetric volatility
transform, and the fold of input, feedback, and error into rotation angles.

The angle encoding maps everything into [0, pi/2]. Qubits whose feedback set
is non-empty mix the transformed input, the fed-back spins, and the previous
squashed error; qubits with no incoming connections see only input and error,
with their own weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .topology import ReservoirTopology

HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class AsymTransformParams:
    """Parameters of the asymmetric squashing transform.

    a0 sets the output level for non-negative return differences; a1 scales
    the extra response to negative ones (its sign sets the direction of the
    asymmetry).
    """

    a0: float = 0.5
    a1: float = -40.0

    def __post_init__(self):
        if not (math.isfinite(self.a0) and math.isfinite(self.a1)):
            raise ValueError("a0 and a1 must be finite")


@dataclass(frozen=True)
class EncodingWeights:
    """Mixing weights of the angle encoding.

    alpha/beta/gamma weight input, spin feedback, and error for qubits with
    feedback; alpha_prime/gamma_prime weight input and error for qubits
    without. Weight sums <= 1 keep unclamped angles inside [0, pi/2] for
    single-member feedback sets.
    """

    alpha: float = 0.3
    beta: float = 0.3
    gamma: float = 0.4
    alpha_prime: float = 0.6
    gamma_prime: float = 0.4

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "alpha_prime", "gamma_prime"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")
        if self.alpha + self.beta + self.gamma > 1.0 + 1e-12:
            raise ValueError("alpha + beta + gamma must be <= 1")
        if self.alpha_prime + self.gamma_prime > 1.0 + 1e-12:
            raise ValueError("alpha_prime + gamma_prime must be <= 1")


def log_returns(prices) -> np.ndarray:
    """r_t = ln(p_t / p_{t-1}); output is one shorter than the input."""
    p = np.asarray(prices, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise ValueError("need a 1-d series of at least 2 prices")
    bad = np.flatnonzero(~(p > 0.0))
    if bad.size:
        raise DataError(f"non-positive price {p[bad[0]]} at index {bad[0]}")
    return np.diff(np.log(p))


def delta(series) -> np.ndarray:
    """First differences x_t - x_{t-1}; output is one shorter than the input."""
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need a 1-d series of at least 2 values")
    return np.diff(x)


def asym_transform(dr, params: AsymTransformParams) -> np.ndarray | float:
    """Squash a return difference into [0, 1] with asymmetric response.

    u = 1 - exp(-(a0 + a1 * I * dr)) where I indicates dr < 0, so
    non-negative differences all map to the same level 1 - exp(-a0) and
    negative ones move monotonically away from it. Output is clamped to
    [0, 1]; scalar in, scalar out.
    """
    x = np.asarray(dr, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("return differences must be finite")
    indicator = (x < 0.0).astype(float)
    u = 1.0 - np.exp(-(params.a0 + params.a1 * indicator * x))
    u = np.clip(u, 0.0, 1.0)
    return float(u) if np.isscalar(dr) or x.ndim == 0 else u


def encode_angles(
    u_window: np.ndarray,
    prev_spins: np.ndarray,
    prev_error: float,
    topo: ReservoirTopology,
    weights: EncodingWeights,
    aggregation: str = "sum",
) -> np.ndarray:
    """Fold inputs, fed-back spins, and previous error into rotation angles.

    For qubit m with feedback members F(m) (itself if self-looped, plus graph
    neighbors), the feedback term aggregates shifted spins (s+1)/2 over F(m)
    by sum (default) or mean, and

        theta_m = (pi/2) * (alpha * u_m + beta * f_m + gamma * e)

    clamped to [0, pi/2]. Summed feedback lets dense graphs drive qubits into
    the clamp, which is what degrades recall in highly connected reservoirs;
    mean aggregation keeps f_m in [0, 1] regardless of degree. Qubits with an
    empty feedback set use the primed branch without a spin term.
    """
    u = np.asarray(u_window, dtype=float)
    s = np.asarray(prev_spins, dtype=float)
    n = topo.n_qubits
    if u.shape != (n,) or s.shape != (n,):
        raise ValueError(
            f"u_window and prev_spins must have shape ({n},), "
            f"got {u.shape} and {s.shape}"
        )
    if aggregation not in ("sum", "mean"):
        raise ValueError(f"aggregation must be 'sum' or 'mean', got {aggregation!r}")

    shifted = (s + 1.0) / 2.0
    theta = np.empty(n, dtype=float)
    for m in range(n):
        members = topo.feedback_set(m)
        if members:
            f = shifted[list(members)].sum()
            if aggregation == "mean":
                f /= len(members)
            theta[m] = weights.alpha * u[m] + weights.beta * f + weights.gamma * prev_error
        else:
            theta[m] = weights.alpha_prime * u[m] + weights.gamma_prime * prev_error
    return np.clip(HALF_PI * theta, 0.0, HALF_PI)
