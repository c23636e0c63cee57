"""Histograms, lognormal fitting and goodness of fit, averaging-time study
and stratified sampling budgets."""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from .errors import (
    AllZeroSigma,
    ConfigError,
    DegenerateFit,
    DegenerateRange,
    NonPositiveValue,
    TooFewBlocks,
)
from .resample import block_average
from .series import as_series

KS_CAVEAT = "params-estimated"
MIN_BLOCKS = 30
KS_CRIT_5PCT = 1.358  # asymptotic two-sided 5% point of the Kolmogorov distribution


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray

    def to_dict(self):
        return {"edges": [float(e) for e in self.edges], "counts": [int(c) for c in self.counts]}


@dataclass(frozen=True)
class LogNormalFit:
    mu: float
    sigma: float
    n: int
    degenerate: bool

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return special.ndtr((np.log(x) - self.mu) / self.sigma)

    def to_dict(self):
        return {"mu": self.mu, "sigma": self.sigma, "n": self.n}


@dataclass(frozen=True)
class KsResult:
    d_stat: float
    p_asymptotic: float
    n: int
    caveat: str = KS_CAVEAT
    p_bootstrap: Optional[float] = None

    @property
    def critical_5pct(self):
        return KS_CRIT_5PCT / math.sqrt(self.n)

    @property
    def passes_5pct(self):
        return self.d_stat < self.critical_5pct

    def to_dict(self):
        out = {"d": self.d_stat, "p": self.p_asymptotic, "caveat": self.caveat}
        if self.p_bootstrap is not None:
            out["p_bootstrap"] = self.p_bootstrap
        return out


def histogram(series, n_bins: int, range: Optional[Tuple[float, float]] = None) -> Histogram:
    """Equal-width histogram; bins are right-open except the last."""
    values = as_series(series).values
    if n_bins < 1:
        raise ConfigError("n_bins must be >= 1")
    if range is None:
        lo, hi = float(values.min()), float(values.max())
        if lo == hi:
            raise DegenerateRange(f"all values equal {lo}; pass an explicit range")
    else:
        lo, hi = map(float, range)
        if not hi > lo:
            raise DegenerateRange(f"range ({lo}, {hi}) is empty")
    counts, edges = np.histogram(values, bins=n_bins, range=(lo, hi))
    return Histogram(edges, counts)


def fit_lognormal(series) -> LogNormalFit:
    """Maximum-likelihood lognormal fit: mean and population std of ln(x)."""
    values = as_series(series).values
    bad = np.flatnonzero(~(values > 0))
    if bad.size:
        raise NonPositiveValue(int(bad[0]), float(values[bad[0]]))
    logs = np.log(values)
    mu = float(np.mean(logs))
    sigma = float(np.std(logs))
    return LogNormalFit(mu, sigma, int(values.size), sigma == 0.0)


def ks_statistic(values, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov distance between the sample and ``cdf``."""
    z = np.sort(cdf(np.asarray(values, dtype=float)))
    n = z.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - z), np.max(z - (i - 1) / n)))


def ks_lognormal(series, fit: LogNormalFit, bootstrap: int = 0, seed: int = 0) -> KsResult:
    """KS test of ``series`` against the fitted lognormal.

    The asymptotic p-value treats the parameters as known. They were
    estimated from the same data, so the p-value is too large and the test
    rejects too rarely.
    With ``bootstrap > 0`` a parametric bootstrap p-value that refits on each
    resample is added.
    """
    values = as_series(series).values
    if fit.degenerate or not fit.sigma > 0:
        raise DegenerateFit("cannot test against a zero-variance fit")
    bad = np.flatnonzero(~(values > 0))
    if bad.size:
        raise NonPositiveValue(int(bad[0]), float(values[bad[0]]))
    n = values.size
    d = ks_statistic(values, fit.cdf)
    p = float(special.kolmogorov(math.sqrt(n) * d))
    p_boot = None
    if bootstrap > 0:
        from .synth import make_rng, standard_normal

        rng = make_rng(seed)
        exceed = 0
        for _ in range(bootstrap):
            sim = np.exp(fit.mu + fit.sigma * standard_normal(rng, n))
            refit = fit_lognormal(sim)
            if ks_statistic(sim, refit.cdf) >= d:
                exceed += 1
        p_boot = (exceed + 1) / (bootstrap + 1)
    return KsResult(d, min(max(p, 0.0), 1.0), n, p_bootstrap=p_boot)


@dataclass(frozen=True)
class AveragingResult:
    window_s: int
    fit: LogNormalFit
    ks: KsResult

    def to_dict(self):
        return {"window_s": self.window_s, "fit": self.fit.to_dict(), "ks": self.ks.to_dict(), "passes_5pct": self.ks.passes_5pct}


def averaging_invariance(series, window_lengths_s: Sequence[int]) -> List[AveragingResult]:
    """Fit and KS-test the lognormal after block-averaging over each window."""
    series = as_series(series)
    out = []
    for window_s in window_lengths_s:
        k = window_s * series.rate_hz
        if k < 1 or abs(k - round(k)) > 1e-9:
            raise ConfigError(f"window {window_s} s is not a whole number of samples")
        k = int(round(k))
        blocks = len(series) // k
        if blocks < MIN_BLOCKS:
            raise TooFewBlocks(window_s, blocks)
        averaged = block_average(series, k)
        fit = fit_lognormal(averaged)
        out.append(AveragingResult(window_s, fit, ks_lognormal(averaged, fit)))
    return out


@dataclass(frozen=True)
class FixedTotal:
    total: int


@dataclass(frozen=True)
class TargetHalfwidth:
    halfwidth: float
    z: float = 1.96


def sampling_budget(strata: Sequence[Tuple[str, float]], mode) -> List[Tuple[str, int]]:
    """Split a sampling budget across strata.

    ``FixedTotal(N)`` gives a Neyman allocation (proportional to each
    stratum's sigma, equal stratum sizes) rounded by largest remainder so the
    parts sum to exactly N. ``TargetHalfwidth(h, z)`` gives each stratum the
    sample size for a confidence half-width ``h`` on its mean.
    """
    names = [s[0] for s in strata]
    sigmas = np.asarray([s[1] for s in strata], dtype=float)
    if np.any(sigmas < 0):
        raise ConfigError("sigma must be non-negative")
    if isinstance(mode, TargetHalfwidth):
        if not mode.halfwidth > 0:
            raise ConfigError("halfwidth must be positive")
        return [(name, int(math.ceil((mode.z * s / mode.halfwidth) ** 2))) for name, s in zip(names, sigmas)]
    if not isinstance(mode, FixedTotal):
        raise ConfigError(f"unknown budget mode {mode!r}")
    total = sigmas.sum()
    if total == 0:
        raise AllZeroSigma("every stratum has zero sigma")
    if mode.total < len(strata):
        raise ConfigError(f"budget {mode.total} smaller than stratum count {len(strata)}")
    quota = mode.total * sigmas / total
    alloc = np.floor(quota).astype(int)
    short = mode.total - int(alloc.sum())
    # largest remainder first, earlier stratum on ties
    order = sorted(range(len(strata)), key=lambda i: (-(quota[i] - alloc[i]), i))
    for i in order[:short]:
        alloc[i] += 1
    return [(name, int(a)) for name, a in zip(names, alloc)]
