"""Least-squares autoregressive fits, residuals and one-step prediction.

The model is ``x_t = a0 + a1 x_{t-1} + ... + am x_{t-m} + r_t`` with the
coefficients chosen to minimise the sum of squared residuals ``r_t``.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, DegenerateVariance, HistoryTooShort, SeriesTooShort, SingularDesign
from .series import UniformSeries, as_series


@dataclass(frozen=True)
class ArModel:
    order: int
    a0: float
    coeffs: np.ndarray
    noise_var: float
    n_fit: int

    def to_dict(self):
        return {
            "order": self.order,
            "a0": float(self.a0),
            "coeffs": [float(c) for c in self.coeffs],
            "noise_var": float(self.noise_var),
        }


def lag_matrix(x: np.ndarray, m: int) -> np.ndarray:
    """Design matrix with rows ``(1, x_{t-1}, ..., x_{t-m})`` for ``t = m..n-1``."""
    n = x.size
    cols = [np.ones(n - m)] + [x[m - i : n - i] for i in range(1, m + 1)]
    return np.column_stack(cols)


def fit_ar(series, m: int) -> ArModel:
    """Ordinary least squares AR(m) fit with an intercept.

    Needs at least ``m + 1`` regression rows (``len(series) >= 2m + 1``).
    """
    if m < 1:
        raise ConfigError(f"AR order must be >= 1, got {m}")
    x = as_series(series).values
    if x.size < 2 * m + 1:
        raise SeriesTooShort(f"AR({m}) needs at least {2 * m + 1} samples, got {x.size}")
    if np.ptp(x) == 0:
        raise DegenerateVariance("cannot fit an AR model to a constant series")
    X = lag_matrix(x, m)
    y = x[m:]
    beta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < m + 1:
        raise SingularDesign(f"lagged design has rank {rank} < {m + 1}")
    resid = y - X @ beta
    return ArModel(m, float(beta[0]), beta[1:].copy(), float(np.mean(resid * resid)), int(y.size))


def residuals(series, model: ArModel) -> UniformSeries:
    """Residuals ``r_t`` for ``t = m..n-1``; output sample j is input index ``m + j``."""
    series = as_series(series)
    x = series.values
    m = model.order
    if x.size <= m:
        raise SeriesTooShort(f"need more than {m} samples for AR({m}) residuals")
    r = x[m:] - lag_matrix(x, m) @ np.r_[model.a0, model.coeffs]
    return series.derive(r, start_t=series.start_t + m / series.rate_hz, flags=series.flags[m:])


def predict_one_step(model: ArModel, history: Sequence[float]) -> float:
    """Predict the value following ``history`` (most recent value last)."""
    h = np.asarray(history, dtype=float)
    m = model.order
    if h.size < m:
        raise HistoryTooShort(f"AR({m}) prediction needs {m} past values, got {h.size}")
    recent = h[::-1][:m]  # x_t, x_{t-1}, ...
    return float(model.a0 + np.dot(model.coeffs, recent))
