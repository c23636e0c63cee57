"""Sample autocorrelation, partial autocorrelation and significance lags."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateVariance, LagTooLarge, NumericalBreakdown
from .series import as_series

SIG_Z = 1.96


@dataclass(frozen=True)
class CorrelationSequence:
    """Correlation by lag ``0..max_lag`` estimated from ``n`` samples."""

    kind: str
    values: np.ndarray
    n: int

    @property
    def max_lag(self):
        return self.values.size - 1

    @property
    def sig_bound(self):
        return SIG_Z / math.sqrt(self.n)


def _check(values, max_lag):
    n = values.size
    if max_lag < 0 or not max_lag < n / 2:
        raise LagTooLarge(f"max_lag {max_lag} must be below half the length ({n})")


def acf(series, max_lag: int) -> CorrelationSequence:
    """Biased sample autocorrelation.

    ``r_k = sum_t (x_t - m)(x_{t+k} - m) / sum_t (x_t - m)^2``; dividing every
    lag by the same total keeps the sequence positive semi-definite.
    """
    x = as_series(series).values
    _check(x, max_lag)
    d = x - x.mean()
    denom = float(np.dot(d, d))
    if denom == 0.0:
        raise DegenerateVariance("autocorrelation of a constant series is undefined")
    n = d.size
    r = np.empty(max_lag + 1)
    r[0] = 1.0
    for k in range(1, max_lag + 1):
        r[k] = np.dot(d[: n - k], d[k:]) / denom
    return CorrelationSequence("acf", r, n)


def durbin_levinson(r):
    """Reflection coefficients for autocorrelations ``r[0..p]`` (``r[0] == 1``).

    Returns ``(pacf, phi, err)``: partial autocorrelations with ``pacf[0] = 1``,
    the order-p prediction coefficients and the normalized prediction-error
    variance after each order.
    """
    r = np.asarray(r, dtype=float)
    p = r.size - 1
    pacf = np.empty(p + 1)
    pacf[0] = 1.0
    err = np.empty(p + 1)
    err[0] = 1.0
    phi = np.zeros(0)
    for k in range(1, p + 1):
        if err[k - 1] <= 0:
            raise NumericalBreakdown(f"prediction error variance non-positive at order {k - 1}")
        kk = (r[k] - np.dot(phi, r[k - 1 : 0 : -1])) / err[k - 1]
        phi = np.concatenate([phi - kk * phi[::-1], [kk]])
        pacf[k] = kk
        err[k] = err[k - 1] * (1.0 - kk * kk)
    return pacf, phi, err


def pacf(series, max_lag: int) -> CorrelationSequence:
    """Partial autocorrelation via Durbin-Levinson on the biased ACF."""
    ac = acf(series, max_lag)
    values, _, _ = durbin_levinson(ac.values)
    return CorrelationSequence("pacf", values, ac.n)


def first_insignificant_lag(corr: CorrelationSequence) -> int:
    """Smallest lag ``k >= 1`` with ``|corr[k]| < 1.96 / sqrt(n)``.

    Returns ``max_lag + 1`` when every lag stays significant.
    """
    bound = corr.sig_bound
    below = np.flatnonzero(np.abs(corr.values[1:]) < bound)
    return int(below[0]) + 1 if below.size else corr.max_lag + 1
