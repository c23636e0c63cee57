"""Command line entry point.

    hfpollution ingest  --input log.csv [--calib curve.json] --out DIR
    hfpollution analyze --input log.csv [options] --format json,csv,svg --out DIR
    hfpollution synth   --kind lognormal_ar1 --n 3600 --seed 1 --out fixture.csv
    hfpollution report  --report DIR/report.json --format csv,svg --out DIR

Exit status: 0 ok, 2 configuration error, 3 data error, 4 I/O error. Errors
are printed to stderr as a single ``error[<family>:<Name>]: message`` line.
"""

import argparse
import json
import logging
import os
import sys

from . import __version__
from .errors import ConfigError, HfPollutionError, IoError
from .ingest import CalibrationCurve, format_series_csv, load_samples, regularize
from .pipeline import FORMATS, PipelineConfig, Report, _read_text, run_pipeline
from .report import emit_report
from .spectral import DEFAULT_MIN_PROMINENCE
from .synth import KINDS, SynthSpec, generate

log = logging.getLogger("hfpollution")

SYNTH_DEFAULTS = {
    "ar1": {"phi": 0.77, "sigma": 1.0},
    "lognormal_ar1": {"phi": 0.77, "mu": 1.0, "sigma_log": 0.5},
    "sine_mix": {"period_s": 90.0, "amplitude": 1.0},
    "one_over_f": {},
    "threshold_ar": {"phi_low": 0.9, "phi_high": 0.3, "quantile_q": 0.7, "sigma": 1.0},
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"error[config:Usage]: {message}\n")


def _formats(text):
    fmts = tuple(f.strip() for f in text.split(",") if f.strip())
    if not fmts:
        raise argparse.ArgumentTypeError("empty format list")
    return fmts


def _window(text):
    try:
        lo, hi = text.split("..")
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected FROM..TO epoch seconds, got {text!r}") from None


def _ints(text):
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _param(text):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        return key, json.loads(value)
    except json.JSONDecodeError:
        raise argparse.ArgumentTypeError(f"value for {key} is not a number or JSON literal") from None


def build_parser():
    parser = _Parser(prog="hfpollution", description="Analyse 1 Hz pollution sensor series.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def ingest_flags(p):
        p.add_argument("--input", required=True, help="CSV with header epoch_s,adc or epoch_s,ppm")
        p.add_argument("--calib", help="calibration JSON for raw ADC logs")
        p.add_argument("--rate", type=float, default=1.0, help="sampling rate in Hz (default 1)")
        p.add_argument("--max-gap", type=int, default=5, help="longest gap in seconds to interpolate (default 5)")
        p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("ingest", help="calibrate and regularize a log into segment CSVs")
    ingest_flags(p)

    p = sub.add_parser("analyze", help="run the full analysis and write a report")
    ingest_flags(p)
    p.add_argument("--window", type=_window, help="keep only FROM..TO epoch seconds")
    p.add_argument("--decimate", type=int, default=10, help="decimation factor (default 10, i.e. 0.1 Hz)")
    p.add_argument("--decimate-mode", choices=("extremes", "mean"), default="extremes")
    p.add_argument("--ar-order", type=int, default=1)
    p.add_argument("--drm-bins", type=int, default=7)
    p.add_argument("--drm-binning", choices=("equal_count", "equal_width"), default="equal_count")
    p.add_argument("--max-lag", type=int, default=50)
    p.add_argument("--psd-window", type=float, default=3600.0, help="track window in seconds (default 3600)")
    p.add_argument("--psd-step", type=float, default=1800.0, help="track step in seconds (default 1800)")
    p.add_argument("--psd-taper", choices=("hann", "rect"), default="hann")
    p.add_argument("--f-min", type=float, default=0.001667, help="lowest frequency searched for peaks (Hz)")
    p.add_argument("--min-prominence", type=float, default=DEFAULT_MIN_PROMINENCE)
    p.add_argument("--hist-bins", type=int, default=50)
    p.add_argument("--avg-windows", type=_ints, default=(10, 60), help="block-averaging windows in seconds, e.g. 10,60")
    p.add_argument("--ks-bootstrap", type=int, default=0, help="parametric bootstrap resamples for the KS p-value")
    p.add_argument("--seed", type=int, default=0, help="seed for the KS bootstrap")
    p.add_argument("--format", type=_formats, default=("json",), help="comma list of json,csv,svg")

    p = sub.add_parser("synth", help="write a seeded synthetic series as epoch_s,ppm CSV")
    p.add_argument("--kind", choices=KINDS, default="lognormal_ar1")
    p.add_argument("--spec", help="SynthSpec JSON file (overrides --kind/--n/--rate/--seed/--param)")
    p.add_argument("--n", type=int, default=3600)
    p.add_argument("--rate", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", type=float, default=0.0, help="epoch seconds of the first sample")
    p.add_argument("--param", type=_param, action="append", default=[], help="generator parameter KEY=VALUE (repeatable)")
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("report", help="render an existing report.json")
    p.add_argument("--report", required=True, help="path to report.json")
    p.add_argument("--format", type=_formats, default=("csv", "svg"))
    p.add_argument("--out", default=".")
    return parser


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}") from exc


def cmd_ingest(args):
    curve = CalibrationCurve.from_json(_read_text(args.calib)[1]) if args.calib else None
    samples, unit = load_samples(_read_text(args.input)[1], curve)
    segments = regularize(samples, args.rate, args.max_gap, unit=unit)
    try:
        os.makedirs(args.out, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {args.out}: {exc.strerror}") from exc
    for i, seg in enumerate(segments):
        path = os.path.join(args.out, f"segment_{i:03d}.csv")
        _write_text(path, format_series_csv(seg, unit))
        print(path)
    return 0


def cmd_analyze(args):
    cfg = PipelineConfig(
        input=args.input,
        calib=args.calib,
        rate_hz=args.rate,
        max_gap_s=args.max_gap,
        decimate_factor=args.decimate,
        decimate_mode=args.decimate_mode,
        ar_order=args.ar_order,
        drm_bins=args.drm_bins,
        drm_binning=args.drm_binning,
        max_lag=args.max_lag,
        psd_window_s=args.psd_window,
        psd_step_s=args.psd_step,
        psd_taper=args.psd_taper,
        f_min=args.f_min,
        min_prominence=args.min_prominence,
        hist_bins=args.hist_bins,
        averaging_windows=args.avg_windows,
        ks_bootstrap=args.ks_bootstrap,
        seed=args.seed,
        time_window=args.window,
        out_dir=args.out,
        formats=args.format,
    )
    cfg.validate()
    report = run_pipeline(cfg)
    for fmt in cfg.formats:
        for path in emit_report(report, fmt, cfg.out_dir):
            print(path)
    return 0


def cmd_synth(args):
    if args.spec:
        spec = SynthSpec.from_json(_read_text(args.spec)[1])
    else:
        params = dict(SYNTH_DEFAULTS[args.kind])
        params.update(dict(args.param))
        spec = SynthSpec(args.kind, params, args.n, args.rate, args.seed)
    series = generate(spec, start_t=args.start)
    text = format_series_csv(series, "ppm")
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_report(args):
    try:
        report = Report.from_dict(json.loads(_read_text(args.report)[1]))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ConfigError(f"{args.report} is not a report: {exc}") from exc
    for fmt in args.format:
        if fmt not in FORMATS:
            from .errors import UnknownFormat

            raise UnknownFormat(f"unknown report format {fmt!r}")
    for fmt in args.format:
        for path in emit_report(report, fmt, args.out):
            print(path)
    return 0


COMMANDS = {"ingest": cmd_ingest, "analyze": cmd_analyze, "synth": cmd_synth, "report": cmd_report}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except HfPollutionError as exc:
        msg = " ".join(str(exc).split())
        print(f"error[{exc.code}]: {msg}", file=sys.stderr)
        return exc.exit_status


if __name__ == "__main__":
    sys.exit(main())
