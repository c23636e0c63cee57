"""End-to-end analysis of one sensor log.

ingest -> regularize -> per segment: distribution on the full-rate series,
then decimation and correlation, AR, DRM, spectrum and dominant-frequency
track on the decimated series. Analyses that cannot run on a segment (too
short, no positive values, ...) are recorded as skipped with the reason.
"""

import hashlib
import json
import logging
import math
import os
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import __version__
from .armodel import fit_ar
from .correlation import acf, first_insignificant_lag, pacf
from .distribution import averaging_invariance, fit_lognormal, histogram, ks_lognormal
from .drm import compute_drm
from .errors import ConfigError, HfPollutionError, IoError
from .ingest import CalibrationCurve, Samples, load_samples, regularize
from .resample import decimate
from .series import INTERPOLATED, NEGATIVE, UniformSeries
from .spectral import DEFAULT_F_MIN, DEFAULT_MIN_PROMINENCE, dominant_track, fit_one_over_f, periodogram

log = logging.getLogger(__name__)

FORMATS = ("json", "csv", "svg")
FRAGMENTS = ("distribution", "correlation", "ar", "drm", "spectral", "track")


@dataclass
class PipelineConfig:
    input: str
    calib: Optional[str] = None
    rate_hz: float = 1.0
    max_gap_s: int = 5
    decimate_factor: int = 10
    decimate_mode: str = "extremes"
    ar_order: int = 1
    drm_bins: int = 7
    drm_binning: str = "equal_count"
    max_lag: int = 50
    psd_window_s: float = 3600.0
    psd_step_s: float = 1800.0
    psd_taper: str = "hann"
    f_min: float = DEFAULT_F_MIN
    min_prominence: float = DEFAULT_MIN_PROMINENCE
    one_over_f_band: Optional[Tuple[float, float]] = None
    hist_bins: int = 50
    averaging_windows: Tuple[int, ...] = (10, 60)
    ks_bootstrap: int = 0
    seed: int = 0
    time_window: Optional[Tuple[float, float]] = None
    out_dir: str = "."
    formats: Tuple[str, ...] = ("json",)

    def validate(self):
        positive = {
            "rate_hz": self.rate_hz,
            "max_gap_s": self.max_gap_s,
            "decimate_factor": self.decimate_factor,
            "ar_order": self.ar_order,
            "drm_bins": self.drm_bins,
            "max_lag": self.max_lag,
            "psd_window_s": self.psd_window_s,
            "psd_step_s": self.psd_step_s,
            "f_min": self.f_min,
            "min_prominence": self.min_prominence,
            "hist_bins": self.hist_bins,
        }
        for name, value in positive.items():
            if not value > 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        if any(not w > 0 for w in self.averaging_windows):
            raise ConfigError("averaging windows must be positive")
        if self.decimate_mode not in ("extremes", "mean"):
            raise ConfigError(f"decimate_mode must be 'extremes' or 'mean', got {self.decimate_mode!r}")
        if self.drm_binning not in ("equal_count", "equal_width"):
            raise ConfigError(f"unknown drm binning {self.drm_binning!r}")
        if self.psd_taper not in ("rect", "hann"):
            raise ConfigError(f"unknown psd taper {self.psd_taper!r}")
        if self.ks_bootstrap < 0:
            raise ConfigError("ks_bootstrap must be >= 0")
        if self.time_window is not None and not self.time_window[1] > self.time_window[0]:
            raise ConfigError("time window end must follow its start")
        unknown = set(self.formats) - set(FORMATS)
        if unknown:
            from .errors import UnknownFormat

            raise UnknownFormat(f"unknown format(s): {', '.join(sorted(unknown))}")

    def echo(self):
        """Config as recorded in the report; output location is left out."""
        d = asdict(self)
        d.pop("out_dir")
        d.pop("formats")
        d["input"] = os.path.basename(self.input)
        d["calib"] = os.path.basename(self.calib) if self.calib else None
        return _jsonable(d)


@dataclass
class Report:
    meta: dict
    segments: List[dict] = field(default_factory=list)

    def to_dict(self):
        return {"meta": self.meta, "segments": self.segments}

    def to_json(self):
        return canonical_json(self.to_dict())

    @classmethod
    def from_dict(cls, obj):
        return cls(obj["meta"], obj["segments"])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    return obj


def canonical_json(obj) -> str:
    """Sorted keys, shortest round-trip floats, non-finite floats as null."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=1, allow_nan=False) + "\n"


def _read_text(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return raw, raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        from .errors import DataError

        raise DataError(f"{path} is not UTF-8") from exc


def _skipped(exc):
    return {"skipped": f"{exc.code}: {exc}"}


def _run_step(fn):
    try:
        return fn()
    except HfPollutionError as exc:
        return _skipped(exc)


def _series_fragment(s: UniformSeries):
    return {"start_t": s.start_t, "rate_hz": s.rate_hz, "unit": s.unit, "values": s.values}


def _distribution(seg: UniformSeries, cfg: PipelineConfig):
    positive = seg.values > 0
    excluded = int(np.count_nonzero(~positive))
    if not positive.any():
        return {"skipped": f"non-positive values: {excluded}"}
    # dropping non-positive samples leaves a shorter, approximately gridded series
    pos = seg.derive(seg.values[positive], flags=seg.flags[positive])
    out = {"excluded_nonpositive": excluded}
    fit = fit_lognormal(pos)
    out["fit"] = fit.to_dict()
    out["ks"] = _run_step(lambda: ks_lognormal(pos, fit, bootstrap=cfg.ks_bootstrap, seed=cfg.seed).to_dict())
    out["histogram"] = _run_step(lambda: histogram(pos, cfg.hist_bins).to_dict())
    averaging = []
    for w in cfg.averaging_windows:
        try:
            averaging.append(averaging_invariance(pos, [w])[0].to_dict())
        except HfPollutionError as exc:
            averaging.append({"window_s": w, **_skipped(exc)})
    out["averaging"] = averaging
    return out


def _correlation(series: UniformSeries, cfg: PipelineConfig):
    max_lag = min(cfg.max_lag, math.ceil(len(series) / 2) - 1)
    a = acf(series, max_lag)
    p = pacf(series, max_lag)
    return {
        "acf": a.values,
        "pacf": p.values,
        "sig_bound": a.sig_bound,
        "first_insig_lag": first_insignificant_lag(a),
        "rate_hz": series.rate_hz,
    }


def _spectral(series: UniformSeries, cfg: PipelineConfig):
    spec = periodogram(series, cfg.psd_taper)
    out = {"psd": spec.to_dict(), "window_fn": spec.window_fn}
    band = cfg.one_over_f_band or (spec.freqs[0], spec.freqs[-1])

    def one_over_f():
        slope, intercept = fit_one_over_f(spec, band)
        return {"slope": slope, "intercept": intercept, "band": list(band)}

    out["one_over_f"] = _run_step(one_over_f)
    return out


def _track(series: UniformSeries, cfg: PipelineConfig):
    track = dominant_track(series, cfg.psd_window_s, cfg.psd_step_s, cfg.f_min, cfg.min_prominence, cfg.psd_taper)
    rows = []
    for t, peak in track:
        rows.append({"t": t, **peak.to_dict()} if peak is not None else {"t": t, "peak": None})
    return {"window_s": cfg.psd_window_s, "step_s": cfg.psd_step_s, "records": rows}


def analyze_segment(seg: UniformSeries, cfg: PipelineConfig) -> dict:
    out = {
        "start_t": seg.start_t,
        "n": len(seg),
        "n_interpolated": int(np.count_nonzero(seg.flags & INTERPOLATED)),
        "n_negative": int(np.count_nonzero(seg.flags & NEGATIVE)),
    }
    out["distribution"] = _run_step(lambda: _distribution(seg, cfg))
    try:
        dec = decimate(seg, cfg.decimate_factor, cfg.decimate_mode) if cfg.decimate_factor > 1 else seg
    except HfPollutionError as exc:
        for name in FRAGMENTS[1:]:
            out[name] = _skipped(exc)
        return out
    out["series"] = _series_fragment(dec)
    out["correlation"] = _run_step(lambda: _correlation(dec, cfg))
    out["ar"] = _run_step(lambda: fit_ar(dec, cfg.ar_order).to_dict())
    out["drm"] = _run_step(lambda: compute_drm(dec, cfg.ar_order, cfg.drm_bins, cfg.drm_binning).to_dict())
    out["spectral"] = _run_step(lambda: _spectral(dec, cfg))
    out["track"] = _run_step(lambda: _track(dec, cfg))
    return out


def load_segments(cfg: PipelineConfig):
    raw, text = _read_text(cfg.input)
    curve = None
    if cfg.calib:
        curve = CalibrationCurve.from_json(_read_text(cfg.calib)[1])
    samples, unit = load_samples(text, curve)
    if cfg.time_window is not None:
        lo, hi = cfg.time_window
        keep = (samples.t >= lo) & (samples.t <= hi)
        samples = Samples(samples.t[keep], samples.values[keep], samples.flags[keep])
    segments = regularize(samples, cfg.rate_hz, cfg.max_gap_s, unit=unit)
    return raw, unit, len(samples), segments


def run_pipeline(cfg: PipelineConfig) -> Report:
    cfg.validate()
    try:
        raw, unit, n_records, segments = load_segments(cfg)
    except HfPollutionError as exc:
        exc.args = (f"ingest: {exc}",)
        raise
    log.info("analyzing %d segment(s) from %d records", len(segments), n_records)
    meta = {
        "tool": "hfpollution",
        "version": __version__,
        "input_sha256": hashlib.sha256(raw).hexdigest(),
        "config": cfg.echo(),
        "unit": unit,
        "n_records": n_records,
        "n_segments": len(segments),
    }
    results = []
    for i, seg in enumerate(segments):
        log.debug("segment %d: %d samples from t=%s", i, len(seg), seg.start_t)
        results.append({"index": i, **analyze_segment(seg, cfg)})
    return Report(_jsonable(meta), _jsonable(results))
