"""Block averaging, extreme-preserving decimation and moving-average smoothing."""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import BlockTooLarge, ConfigError, EvenWindow, WindowTooLarge
from .series import UniformSeries


def _blocks(series, k):
    if k < 1:
        raise ConfigError(f"block size must be >= 1, got {k}")
    nblocks = len(series) // k
    if nblocks == 0:
        raise BlockTooLarge(f"block size {k} exceeds series length {len(series)}")
    return nblocks


def block_average(series: UniformSeries, k: int) -> UniformSeries:
    """Means of consecutive non-overlapping blocks of ``k`` samples.

    The trailing partial block is dropped. Output rate is ``rate / k``.
    """
    nblocks = _blocks(series, k)
    n = nblocks * k
    values = series.values[:n].reshape(nblocks, k).mean(axis=1)
    flags = np.bitwise_or.reduce(series.flags[:n].reshape(nblocks, k), axis=1)
    return series.derive(values, rate_hz=series.rate_hz / k, flags=flags)


def decimate_extremes(series: UniformSeries, k: int) -> UniformSeries:
    """Keep, per block of ``k`` samples, the one farthest from the block mean.

    Ties go to the earliest sample, so a flat block yields its first value.
    Every output value is an input value.
    """
    nblocks = _blocks(series, k)
    n = nblocks * k
    blocks = series.values[:n].reshape(nblocks, k)
    dev = np.abs(blocks - blocks.mean(axis=1, keepdims=True))
    pick = np.argmax(dev, axis=1)  # first maximum wins
    rows = np.arange(nblocks)
    flags = series.flags[:n].reshape(nblocks, k)[rows, pick]
    return series.derive(blocks[rows, pick], rate_hz=series.rate_hz / k, flags=flags)


def decimate(series: UniformSeries, k: int, mode: str = "extremes") -> UniformSeries:
    if mode == "extremes":
        return decimate_extremes(series, k)
    if mode == "mean":
        return block_average(series, k)
    raise ConfigError(f"unknown decimate mode {mode!r}")


def moving_average(series: UniformSeries, w: int) -> UniformSeries:
    """Centered moving average without edge padding (output is ``w - 1`` shorter)."""
    if w < 1 or w % 2 == 0:
        raise EvenWindow(f"window must be a positive odd integer, got {w}")
    if w > len(series):
        raise WindowTooLarge(f"window {w} exceeds series length {len(series)}")
    if w == 1:
        return series.derive(series.values.copy(), flags=series.flags.copy())
    values = sliding_window_view(series.values, w).mean(axis=1)
    flags = np.bitwise_or.reduce(sliding_window_view(series.flags, w), axis=1)
    half = (w - 1) // 2
    return series.derive(values, start_t=series.start_t + half / series.rate_hz, flags=flags)
