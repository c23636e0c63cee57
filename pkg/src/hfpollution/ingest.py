"""Sensor log parsing, ADC to ppm calibration and gap regularization.

The CO monitors log one 12-bit ADC reading per second. Logs arrive as CSV
with a ``epoch_s,adc`` header (raw) or ``epoch_s,ppm`` (already calibrated).
"""

import json
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    AdcOutOfRange,
    ConfigError,
    DuplicateTimestamp,
    EmptyInput,
    LengthMismatch,
    MalformedLine,
    OffGrid,
)
from .series import INTERPOLATED, NEGATIVE, UniformSeries

ADC_MAX = 4095
RAW_HEADER = "epoch_s,adc"
PPM_HEADER = "epoch_s,ppm"
DEFAULT_MAX_GAP_S = 5
REFERENCE_TEMP_C = 25.0


class RawRecord(NamedTuple):
    t: int
    adc: int


@dataclass(frozen=True)
class CalibrationCurve:
    """Polynomial ADC to ppm mapping for one device.

    ``coeffs[j]`` multiplies ``adc ** j``. ``temp_coeff`` is ppm per degree
    Celsius away from 25 C and is only used when temperatures are supplied.
    """

    device_id: str
    coeffs: tuple
    temp_coeff: Optional[float] = None

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs:
            raise ConfigError("calibration curve needs at least one coefficient")
        if len(coeffs) > 6:
            raise ConfigError(f"calibration degree {len(coeffs) - 1} exceeds 5")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_json(cls, text):
        try:
            obj = json.loads(text)
            return cls(str(obj["device_id"]), obj["coeffs"], obj.get("temp_coeff"))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid calibration file: {exc}") from exc

    def to_json(self):
        return json.dumps(
            {"device_id": self.device_id, "coeffs": list(self.coeffs), "temp_coeff": self.temp_coeff},
            sort_keys=True,
        )


@dataclass(frozen=True)
class Samples:
    """Irregular timestamped values, the input to :func:`regularize`."""

    t: np.ndarray
    values: np.ndarray
    flags: np.ndarray

    def __len__(self):
        return self.t.size


def _split_header(text, expected):
    lines = text.splitlines()
    if not lines or lines[0].strip().lstrip("﻿") != expected:
        got = lines[0].strip() if lines else ""
        raise MalformedLine(1, f"expected header {expected!r}, got {got!r}")
    return lines[1:]


def parse_records(csv_text: str) -> List[RawRecord]:
    """Parse a raw ``epoch_s,adc`` log into records sorted by time."""
    records = []
    for line_no, line in enumerate(_split_header(csv_text, RAW_HEADER), start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise MalformedLine(line_no, "expected 2 fields")
        try:
            t, adc = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLine(line_no, "fields must be integers") from None
        if not 0 <= adc <= ADC_MAX:
            raise AdcOutOfRange(line_no, adc)
        records.append(RawRecord(t, adc))
    records.sort(key=lambda r: r.t)
    for prev, cur in zip(records, records[1:]):
        if prev.t == cur.t:
            raise DuplicateTimestamp(cur.t)
    return records


def serialize_records(records: Sequence[RawRecord]) -> str:
    lines = [RAW_HEADER] + [f"{r.t},{r.adc}" for r in records]
    return "\n".join(lines) + "\n"


def parse_ppm(csv_text: str) -> Samples:
    """Parse a pre-calibrated ``epoch_s,ppm`` file."""
    ts, vs = [], []
    for line_no, line in enumerate(_split_header(csv_text, PPM_HEADER), start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise MalformedLine(line_no, "expected 2 fields")
        try:
            t, v = float(parts[0]), float(parts[1])
        except ValueError:
            raise MalformedLine(line_no, "fields must be numbers") from None
        if not (math.isfinite(t) and math.isfinite(v)):
            raise MalformedLine(line_no, "non-finite field")
        ts.append(t)
        vs.append(v)
    t = np.asarray(ts, dtype=float)
    v = np.asarray(vs, dtype=float)
    order = np.argsort(t, kind="stable")
    t, v = t[order], v[order]
    dup = np.flatnonzero(np.diff(t) == 0)
    if dup.size:
        raise DuplicateTimestamp(t[dup[0]])
    return Samples(t, v, np.where(v < 0, NEGATIVE, 0).astype(np.uint8))


def sniff_header(csv_text: str) -> str:
    first = csv_text.split("\n", 1)[0].strip().lstrip("﻿")
    if first == RAW_HEADER:
        return "adc"
    if first == PPM_HEADER:
        return "ppm"
    raise MalformedLine(1, f"unrecognised header {first!r}")


def apply_calibration(records: Sequence[RawRecord], curve: CalibrationCurve, temp_c=None) -> Samples:
    """Convert ADC counts to ppm.

    Negative results are kept and flagged ``NEGATIVE`` rather than clamped.
    """
    t = np.fromiter((r.t for r in records), dtype=float, count=len(records))
    adc = np.fromiter((r.adc for r in records), dtype=float, count=len(records))
    # Horner, highest power first
    ppm = np.zeros_like(adc)
    for c in reversed(curve.coeffs):
        ppm = ppm * adc + c
    if temp_c is not None:
        temp = np.asarray(temp_c, dtype=float)
        if temp.shape != adc.shape:
            raise LengthMismatch(f"{temp.size} temperatures for {adc.size} records")
        if curve.temp_coeff is not None:
            ppm = ppm + curve.temp_coeff * (temp - REFERENCE_TEMP_C)
    flags = np.where(ppm < 0, NEGATIVE, 0).astype(np.uint8)
    return Samples(t, ppm, flags)


def regularize(samples, rate_hz: float = 1.0, max_gap_s: int = DEFAULT_MAX_GAP_S, unit: str = "ppm") -> List[UniformSeries]:
    """Place samples on a fixed-rate grid.

    Gaps of at most ``max_gap_s`` seconds are filled by linear interpolation
    (flagged ``INTERPOLATED``); longer gaps start a new segment. Timestamps
    must lie on the ``1 / rate_hz`` grid anchored at the first sample.

    ``samples`` is a :class:`Samples` or a sequence of ``(t, value)`` pairs.
    """
    if not isinstance(samples, Samples):
        pairs = list(samples)
        t = np.asarray([p[0] for p in pairs], dtype=float)
        v = np.asarray([p[1] for p in pairs], dtype=float)
        samples = Samples(t, v, np.where(v < 0, NEGATIVE, 0).astype(np.uint8))
    if len(samples) == 0:
        raise EmptyInput("no samples to regularize")
    if not rate_hz > 0:
        raise ConfigError("rate_hz must be positive")
    t, v, flags = samples.t, samples.values, samples.flags
    if np.any(np.diff(t) <= 0):
        raise ConfigError("samples must be sorted with strictly increasing time")

    pos = (t - t[0]) * rate_hz
    idx = np.rint(pos).astype(np.int64)
    if np.any(np.abs(pos - idx) > 1e-6):
        raise OffGrid(f"timestamps do not fall on a {rate_hz} Hz grid")
    steps = np.diff(idx)
    max_step = max_gap_s * rate_hz
    breaks = np.flatnonzero(steps > max_step) + 1

    segments = []
    for lo, hi in zip(np.r_[0, breaks], np.r_[breaks, t.size]):
        seg_idx = idx[lo:hi] - idx[lo]
        n = int(seg_idx[-1]) + 1
        grid = np.arange(n)
        values = np.interp(grid, seg_idx, v[lo:hi])
        values[seg_idx] = v[lo:hi]  # measured samples exactly, no interp rounding
        seg_flags = np.full(n, INTERPOLATED, dtype=np.uint8)
        seg_flags[seg_idx] = flags[lo:hi]
        seg_flags[(seg_flags == INTERPOLATED) & (values < 0)] |= NEGATIVE
        segments.append(UniformSeries(start_t=float(t[lo]), rate_hz=rate_hz, values=values, unit=unit, flags=seg_flags))
    return segments


def load_samples(csv_text: str, curve: Optional[CalibrationCurve] = None):
    """Read either CSV flavour; returns ``(samples, unit)``.

    Raw logs are calibrated when a curve is given and otherwise stay in
    ADC counts.
    """
    kind = sniff_header(csv_text)
    if kind == "ppm":
        return parse_ppm(csv_text), "ppm"
    records = parse_records(csv_text)
    if curve is not None:
        return apply_calibration(records, curve), "ppm"
    t = np.fromiter((r.t for r in records), dtype=float, count=len(records))
    adc = np.fromiter((r.adc for r in records), dtype=float, count=len(records))
    return Samples(t, adc, np.zeros(adc.size, dtype=np.uint8)), "adc"


def format_series_csv(series: UniformSeries, column="ppm") -> str:
    lines = [f"epoch_s,{column}"]
    for t, v in zip(series.times, series.values):
        ts = str(int(t)) if float(t).is_integer() else repr(float(t))
        lines.append(f"{ts},{float(v)!r}")
    return "\n".join(lines) + "\n"
