"""Linear readout trained online with recursive least squares.

The forecast is the dot product of a weight vector with the spin vector.
After every observed target the weights take one RLS step, so with unit
forgetting factor they track the ridge-regularized expanding-window least
squares solution exactly. The residual is squashed to [0, 1) before being
fed back into the encoding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ForecastRecord:
    """One forecast step: target value, prediction, and their difference."""

    t: int
    actual: float
    predicted: float
    residual: float

    @classmethod
    def make(cls, t: int, actual: float, predicted: float) -> "ForecastRecord":
        return cls(t=t, actual=actual, predicted=predicted, residual=actual - predicted)


class RlsReadout:
    """Recursive least-squares readout of an n-dimensional state vector.

    P starts at I/ridge_lambda, so the iterates coincide with batch ridge
    regression (penalty ridge_lambda) over all data seen so far when the
    forgetting factor is 1.

    With intercept=True the regression runs on [s, 1], i.e. the forecast is
    w . s + b. The offset matters: targets with a large mean otherwise force
    the spin weights to reproduce the mean from noisy, strongly correlated
    features, which collapses the fit of the fluctuations.
    """

    def __init__(
        self,
        n: int,
        ridge_lambda: float = 1e-3,
        forgetting: float = 1.0,
        intercept: bool = False,
    ):
        if n < 1:
            raise ValueError(f"state dimension must be >= 1, got {n}")
        if ridge_lambda <= 0:
            raise ValueError(f"ridge_lambda must be > 0, got {ridge_lambda}")
        if not 0.0 < forgetting <= 1.0:
            raise ValueError(f"forgetting must be in (0, 1], got {forgetting}")
        self.n = n
        self.ridge_lambda = ridge_lambda
        self.forgetting = forgetting
        self.intercept = intercept
        d = n + 1 if intercept else n
        self._weights = np.zeros(d)
        self.P = np.eye(d) / ridge_lambda

    @property
    def w(self) -> np.ndarray:
        """Weights over the spin vector (excludes the offset)."""
        return self._weights[: self.n]

    @property
    def bias(self) -> float:
        return float(self._weights[self.n]) if self.intercept else 0.0

    def _features(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if s.shape != (self.n,):
            raise ValueError(f"state must have shape ({self.n},), got {s.shape}")
        return np.append(s, 1.0) if self.intercept else s

    def predict(self, s: np.ndarray) -> float:
        """Forecast w . s (+ offset) for the current state."""
        return float(self._weights @ self._features(s))

    def update(self, s: np.ndarray, target: float) -> None:
        """One RLS step absorbing the pair (s, target)."""
        if not math.isfinite(target):
            raise ValueError(f"target must be finite, got {target}")
        f = self._features(s)
        lam = self.forgetting
        Pf = self.P @ f
        gain = Pf / (lam + f @ Pf)
        self._weights = self._weights + gain * (target - self._weights @ f)
        self.P = (self.P - np.outer(gain, Pf)) / lam
        # symmetrize to keep P positive-definite under roundoff
        self.P = (self.P + self.P.T) / 2.0


def batch_ridge(states: np.ndarray, targets: np.ndarray, ridge_lambda: float) -> np.ndarray:
    """Normal-equations ridge solution (lam*I + S^T S) w = S^T y.

    Reference solution that RLS with unit forgetting must reproduce.
    """
    S = np.asarray(states, dtype=float)
    y = np.asarray(targets, dtype=float)
    n = S.shape[1]
    return np.linalg.solve(ridge_lambda * np.eye(n) + S.T @ S, S.T @ y)


def mse(records) -> float:
    """Mean squared residual over forecast records or raw residuals."""
    if len(records) == 0:
        raise ValueError("mse needs at least one record")
    res = np.asarray(
        [r.residual if isinstance(r, ForecastRecord) else r for r in records],
        dtype=float,
    )
    return float(np.mean(res**2))


def squash_error(residual: float, scale: float) -> float:
    """Map a residual to [0, 1): 1 - exp(-|residual|/scale)."""
    if scale <= 0:
        raise ValueError(f"scale must be > 0, got {scale}")
    return 1.0 - math.exp(-abs(residual) / scale)


def write_records_csv(path, records) -> None:
    """Stream forecast records to CSV with fixed column order."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,actual,predicted,residual\n")
        for r in records:
            fh.write(f"{r.t},{r.actual!r},{r.predicted!r},{r.residual!r}\n")
