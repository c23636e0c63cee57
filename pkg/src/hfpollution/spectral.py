"""Periodograms, 1/f slope fits and sliding-window dominant-frequency tracking."""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import BandTooNarrow, ConfigError, SeriesTooShort, WindowTooLarge, ZeroPowerInBand
from .series import as_series

WINDOWS = ("rect", "hann")
DEFAULT_F_MIN = 1.0 / 600.0
DEFAULT_MIN_PROMINENCE = 8.0
MIN_LENGTH = 16
MIN_TRACK_SAMPLES = 64


@dataclass(frozen=True)
class Spectrum:
    """One-sided power per positive-frequency bin, DC excluded.

    Power is normalised so that, for a rectangular window, it sums to the
    population variance of the input.
    """

    freqs: np.ndarray
    power: np.ndarray
    window_fn: str = "rect"
    norm: str = "variance"

    @property
    def df(self):
        return float(self.freqs[0])

    def to_dict(self):
        return {"freqs": [float(f) for f in self.freqs], "power": [float(p) for p in self.power]}


@dataclass(frozen=True)
class DominantPeak:
    freq: float
    period: float
    prominence_ratio: float

    def to_dict(self):
        return {"freq": self.freq, "period": self.period, "prominence": self.prominence_ratio}


def periodogram(series, window_fn: str = "rect") -> Spectrum:
    x = as_series(series)
    n = len(x)
    if n < MIN_LENGTH:
        raise SeriesTooShort(f"periodogram needs at least {MIN_LENGTH} samples, got {n}")
    if window_fn == "rect":
        w = np.ones(n)
    elif window_fn == "hann":
        w = np.hanning(n)
    else:
        raise ConfigError(f"unknown window {window_fn!r}")
    d = x.values - x.values.mean()
    spec = np.fft.rfft(w * d)
    power = np.abs(spec[1:]) ** 2 / (n * np.dot(w, w))
    # every bin below Nyquist stands for a +/- frequency pair
    if n % 2 == 0:
        power[:-1] *= 2.0
    else:
        power *= 2.0
    freqs = np.arange(1, n // 2 + 1) * (x.rate_hz / n)
    return Spectrum(freqs, power, window_fn)


def fit_one_over_f(spec: Spectrum, band: Optional[Tuple[float, float]] = None) -> Tuple[float, float]:
    """Least-squares line through log10(power) against log10(freq).

    Returns ``(slope, intercept)``; pink noise gives a slope near -1. Bins
    with zero power inside the band are left out of the fit.
    """
    lo, hi = band if band is not None else (spec.freqs[0], spec.freqs[-1])
    sel = (spec.freqs >= lo) & (spec.freqs <= hi)
    p = spec.power[sel]
    if p.size and not np.any(p > 0):
        raise ZeroPowerInBand(f"no power in band [{lo}, {hi}] Hz")
    pos = p > 0
    if np.count_nonzero(pos) < 8:
        raise BandTooNarrow(f"band [{lo}, {hi}] Hz holds {np.count_nonzero(pos)} usable bins, need 8")
    lf = np.log10(spec.freqs[sel][pos])
    lp = np.log10(p[pos])
    slope, intercept = np.polyfit(lf, lp, 1)
    return float(slope), float(intercept)


def dominant_frequency(spec: Spectrum, f_min: float = DEFAULT_F_MIN, min_prominence: float = DEFAULT_MIN_PROMINENCE) -> Optional[DominantPeak]:
    """Strongest bin at or above ``f_min``, if it stands out from the band.

    Prominence is the peak power over the median power of the searched bins.
    Returns ``None`` below ``min_prominence``; ties go to the lower frequency.
    """
    if f_min > spec.freqs[-1]:
        raise ConfigError(f"f_min {f_min} Hz is above the highest bin {spec.freqs[-1]} Hz")
    sel = spec.freqs >= f_min
    freqs, power = spec.freqs[sel], spec.power[sel]
    k = int(np.argmax(power))
    peak = float(power[k])
    if peak <= 0:
        return None
    med = float(np.median(power))
    ratio = peak / med if med > 0 else float("inf")
    if ratio < min_prominence:
        return None
    f = float(freqs[k])
    return DominantPeak(f, 1.0 / f, ratio)


def dominant_track(
    series,
    window_s: float,
    step_s: float,
    f_min: float = DEFAULT_F_MIN,
    min_prominence: float = DEFAULT_MIN_PROMINENCE,
    window_fn: str = "hann",
) -> List[Tuple[float, Optional[DominantPeak]]]:
    """Dominant peak of each sliding window, as ``(window_start_t, peak)`` in time order."""
    series = as_series(series)
    w = int(round(window_s * series.rate_hz))
    step = int(round(step_s * series.rate_hz))
    if w < MIN_TRACK_SAMPLES:
        raise ConfigError(f"window of {w} samples is below the minimum {MIN_TRACK_SAMPLES}")
    if step < 1:
        raise ConfigError("step must cover at least one sample")
    if w > len(series):
        raise WindowTooLarge(f"window of {w} samples exceeds series length {len(series)}")
    out = []
    for start in range(0, len(series) - w + 1, step):
        chunk = series.derive(series.values[start : start + w], start_t=series.start_t + start / series.rate_hz, flags=series.flags[start : start + w])
        peak = dominant_frequency(periodogram(chunk, window_fn), f_min, min_prominence)
        out.append((chunk.start_t, peak))
    return out
