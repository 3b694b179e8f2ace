"""One time step of the noisy qubit register.

The circuit applies RY(theta_m) to each qubit of |0...0> and measures in the
computational basis. Because the circuit has no entangling gates the state is
a product state, so the excitation probability of qubit m is exactly
sin^2(theta'_m / 2) and finite-shot measurement reduces to per-qubit
Bernoulli sampling. Readout bit-flips fold into the Bernoulli parameter:
P(read 1) = p01 + sin^2(theta'/2) * (1 - p01 - p10).

Noise enters three ways: Gaussian jitter on each rotation angle (one draw
per step by default, shared across shots, to mimic slow drift), linear
crosstalk leakage from register-adjacent qubits, and the asymmetric readout
flips above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NoiseModel:
    """Noise parameters for one register time step.

    Attributes:
        angle_jitter_sigma: std dev (radians) of Gaussian rotation-angle jitter.
        p_flip_0to1: readout probability of reading 1 given the qubit is 0.
        p_flip_1to0: readout probability of reading 0 given the qubit is 1.
        crosstalk_kappa: fraction of each register-neighbor's nominal angle
            leaked into a qubit's effective angle.
        per_shot_jitter: draw fresh jitter for every shot instead of once per
            step. Per-step is the default; the shared draw models drift that
            persists across a shot batch.
    """

    angle_jitter_sigma: float = 0.0
    p_flip_0to1: float = 0.0
    p_flip_1to0: float = 0.0
    crosstalk_kappa: float = 0.0
    per_shot_jitter: bool = False

    def __post_init__(self):
        for name in ("p_flip_0to1", "p_flip_1to0"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")
        for name in ("angle_jitter_sigma", "crosstalk_kappa"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")

    @property
    def is_noiseless(self) -> bool:
        return (
            self.angle_jitter_sigma == 0.0
            and self.p_flip_0to1 == 0.0
            and self.p_flip_1to0 == 0.0
            and self.crosstalk_kappa == 0.0
        )


NOISE_PRESETS = {
    "none": NoiseModel(),
    # Plausible magnitudes for a retired-generation superconducting register;
    # not calibrated to any specific device.
    "rochester-like": NoiseModel(
        angle_jitter_sigma=0.02,
        p_flip_0to1=0.02,
        p_flip_1to0=0.03,
        crosstalk_kappa=0.01,
    ),
}


def noise_preset(name: str) -> NoiseModel:
    try:
        return NOISE_PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown noise preset '{name}' (choose from {sorted(NOISE_PRESETS)})"
        ) from None


def ideal_spin(theta: float) -> float:
    """Noiseless infinite-shot average spin of RY(theta)|0>: cos(theta)."""
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta}")
    return math.cos(theta)


def effective_angles(
    theta: np.ndarray, noise: NoiseModel, rng: np.random.Generator
) -> np.ndarray:
    """Apply crosstalk leakage and angle jitter to the nominal angles.

    Always consumes one normal draw per qubit (scaled by sigma) so that
    noiseless and noisy runs with the same seed stay stream-aligned.
    """
    theta = np.asarray(theta, dtype=float)
    eff = theta.copy()
    if noise.crosstalk_kappa != 0.0 and theta.size > 1:
        leak = np.zeros_like(theta)
        leak[1:] += theta[:-1]
        leak[:-1] += theta[1:]
        eff += noise.crosstalk_kappa * leak
    if not noise.per_shot_jitter:
        eff += noise.angle_jitter_sigma * rng.standard_normal(theta.size)
    return eff


def run_step(
    angles: np.ndarray,
    noise: NoiseModel,
    shots: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Sample average spins s = (n0 - n1)/shots for one register time step.

    Args:
        angles: nominal rotation angles, radians, shape (n_qubits,).
        noise: noise parameters applied this step.
        shots: number of measurement repetitions, >= 1.
        rng: seeded generator; identical (angles, noise, shots, seed) yield
            bit-identical output.

    Returns:
        Array of average spins in [-1, 1], each on the (n0 - n1)/shots grid.
    """
    theta = np.asarray(angles, dtype=float)
    if theta.ndim != 1 or theta.size == 0:
        raise ValueError("angles must be a non-empty 1-d array")
    if not np.all(np.isfinite(theta)):
        raise ValueError("angles must be finite")
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")

    if noise.per_shot_jitter:
        base = effective_angles(theta, noise, rng)
        jitter = noise.angle_jitter_sigma * rng.standard_normal((shots, theta.size))
        p_exc = np.sin((base[None, :] + jitter) / 2.0) ** 2
        p_one = noise.p_flip_0to1 + p_exc * (1.0 - noise.p_flip_0to1 - noise.p_flip_1to0)
        ones = rng.random((shots, theta.size)) < p_one
        n_one = ones.sum(axis=0)
    else:
        eff = effective_angles(theta, noise, rng)
        p_exc = np.sin(eff / 2.0) ** 2
        p_one = noise.p_flip_0to1 + p_exc * (1.0 - noise.p_flip_0to1 - noise.p_flip_1to0)
        n_one = rng.binomial(shots, p_one)

    return 1.0 - 2.0 * n_one / shots
