"""Delayed residual maps.

A linear AR(m) model is fitted by least squares and the next-step residual
``r_{t+1}`` is averaged within bins of the current value ``x_t``. A flat map
means the linear model captures the one-step dynamics; a systematic shape
estimates the lag-one nonlinearity the linear model misses.
"""

import math
from dataclasses import dataclass

import numpy as np

from .armodel import ArModel, fit_ar, residuals
from .errors import ConfigError, InsufficientData
from .series import as_series

MIN_COUNT = 30
BINNINGS = ("equal_count", "equal_width")


@dataclass(frozen=True)
class DrmResult:
    bin_centers: np.ndarray
    mean_residual: np.ndarray
    stderr: np.ndarray
    counts: np.ndarray
    binning: str
    model: ArModel

    @property
    def n_bins(self):
        return self.counts.size

    def flat(self, n_sigma=3.0):
        """True when every bin's mean residual is within ``n_sigma`` standard errors of 0."""
        return bool(np.all(np.abs(self.mean_residual) < n_sigma * self.stderr))

    def to_dict(self):
        bins = [
            {"center": float(c), "mean_r": float(m), "stderr": float(s), "count": int(k)}
            for c, m, s, k in zip(self.bin_centers, self.mean_residual, self.stderr, self.counts)
        ]
        return {"bins": bins, "binning": self.binning}


def delay_pairs(series, model: ArModel):
    """Pairs ``(x_t, r_{t+1})`` for every ``t`` with a residual at ``t + 1``."""
    x = as_series(series).values
    r = residuals(series, model).values  # r[j] belongs to x index m + j
    m = model.order
    return x[m - 1 : x.size - 1], r


def compute_drm(series, m: int = 1, n_bins: int = 7, binning: str = "equal_count", min_count: int = MIN_COUNT) -> DrmResult:
    """Bin ``(x_t, r_{t+1})`` pairs by ``x_t`` and summarise the residuals.

    ``equal_count`` sorts the pairs by ``x_t`` and splits them into ``n_bins``
    contiguous groups whose sizes differ by at most one. ``equal_width`` uses
    ``n_bins`` equal intervals over the observed range and requires every
    interval to hold ``min_count`` pairs. Bin centres are the mean ``x_t`` of
    each bin; standard errors use the sample standard deviation.
    """
    if binning not in BINNINGS:
        raise ConfigError(f"unknown binning {binning!r}")
    if n_bins < 1:
        raise ConfigError("n_bins must be >= 1")
    series = as_series(series)
    need = n_bins * min_count + m
    if len(series) < need:
        raise InsufficientData(f"DRM with {n_bins} bins needs {need} samples, got {len(series)}")
    model = fit_ar(series, m)
    xs, rs = delay_pairs(series, model)

    if binning == "equal_count":
        order = np.argsort(xs, kind="stable")
        groups = np.array_split(order, n_bins)
    else:
        lo, hi = xs.min(), xs.max()
        edges = np.linspace(lo, hi, n_bins + 1)
        which = np.clip(np.searchsorted(edges, xs, side="right") - 1, 0, n_bins - 1)
        groups = [np.flatnonzero(which == b) for b in range(n_bins)]

    counts = np.array([g.size for g in groups])
    if counts.min() < min_count:
        raise InsufficientData(f"a DRM bin holds {counts.min()} pairs, fewer than {min_count}")
    centers = np.array([xs[g].mean() for g in groups])
    means = np.array([rs[g].mean() for g in groups])
    stderr = np.array([rs[g].std(ddof=1) / math.sqrt(g.size) for g in groups])
    return DrmResult(centers, means, stderr, counts, binning, model)
