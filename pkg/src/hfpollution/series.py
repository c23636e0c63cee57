"""Fixed-rate sample container shared by every analysis module."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import EmptySeries

# Per-sample quality bits; 0 means a plain measured sample.
MEASURED = 0
INTERPOLATED = 1
NEGATIVE = 2  # negative calibrated value, kept but a candidate for clamping

UNITS = ("adc", "ppm")


@dataclass(frozen=True)
class UniformSeries:
    """Samples on a regular time grid.

    Sample ``k`` is taken at ``start_t + k / rate_hz`` seconds.
    """

    start_t: float
    rate_hz: float
    values: np.ndarray
    unit: str = "ppm"
    flags: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise EmptySeries("series must be a non-empty 1-d sequence")
        if not self.rate_hz > 0:
            raise ValueError(f"rate_hz must be positive, got {self.rate_hz}")
        if self.unit not in UNITS:
            raise ValueError(f"unknown unit {self.unit!r}")
        flags = self.flags
        if flags is None:
            flags = np.zeros(values.size, dtype=np.uint8)
        else:
            flags = np.asarray(flags, dtype=np.uint8)
            if flags.shape != values.shape:
                raise ValueError("flags must match values in length")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "flags", flags)

    def __len__(self):
        return self.values.size

    @property
    def times(self):
        return self.start_t + np.arange(self.values.size) / self.rate_hz

    @property
    def duration_s(self):
        return self.values.size / self.rate_hz

    def derive(self, values, *, start_t=None, rate_hz=None, flags=None):
        """New series with this one's unit and, by default, its grid."""
        return UniformSeries(
            start_t=self.start_t if start_t is None else start_t,
            rate_hz=self.rate_hz if rate_hz is None else rate_hz,
            values=values,
            unit=self.unit,
            flags=flags,
        )


def as_series(data, rate_hz=1.0, start_t=0.0, unit="ppm"):
    """Wrap a plain sequence as a series; series pass through untouched."""
    if isinstance(data, UniformSeries):
        return data
    return UniformSeries(start_t=start_t, rate_hz=rate_hz, values=np.asarray(data, dtype=float), unit=unit)
