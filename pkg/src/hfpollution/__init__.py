"""Analysis of high-frequency (1 Hz) pollution sensor time series.

Ingest and calibration, extreme-preserving decimation, lognormal fitting,
correlograms, least-squares AR models, delayed residual maps, periodograms
with dominant-frequency tracking, and seeded synthetic generators.
"""

__version__ = "0.1.0"

from .armodel import ArModel, fit_ar, predict_one_step, residuals  # noqa: E402
from .correlation import CorrelationSequence, acf, first_insignificant_lag, pacf  # noqa: E402
from .distribution import (  # noqa: E402
    FixedTotal,
    Histogram,
    KsResult,
    LogNormalFit,
    TargetHalfwidth,
    averaging_invariance,
    fit_lognormal,
    histogram,
    ks_lognormal,
    sampling_budget,
)
from .drm import DrmResult, compute_drm  # noqa: E402
from .ingest import CalibrationCurve, RawRecord, apply_calibration, parse_records, regularize  # noqa: E402
from .resample import block_average, decimate_extremes, moving_average  # noqa: E402
from .series import UniformSeries  # noqa: E402
from .spectral import DominantPeak, Spectrum, dominant_frequency, dominant_track, fit_one_over_f, periodogram  # noqa: E402
from .synth import (  # noqa: E402
    SynthSpec,
    gen_ar1,
    gen_lognormal_ar1,
    gen_one_over_f,
    gen_sine_mix,
    gen_threshold_ar,
    generate,
)

__all__ = [
    "ArModel", "fit_ar", "predict_one_step", "residuals",
    "CorrelationSequence", "acf", "first_insignificant_lag", "pacf",
    "FixedTotal", "Histogram", "KsResult", "LogNormalFit", "TargetHalfwidth",
    "averaging_invariance", "fit_lognormal", "histogram", "ks_lognormal", "sampling_budget",
    "DrmResult", "compute_drm",
    "CalibrationCurve", "RawRecord", "apply_calibration", "parse_records", "regularize",
    "block_average", "decimate_extremes", "moving_average",
    "UniformSeries",
    "DominantPeak", "Spectrum", "dominant_frequency", "dominant_track", "fit_one_over_f", "periodogram",
    "SynthSpec", "gen_ar1", "gen_lognormal_ar1", "gen_one_over_f", "gen_sine_mix", "gen_threshold_ar", "generate",
]
