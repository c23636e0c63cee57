"""Writing reports to disk: canonical JSON, per-fragment CSV and SVG figures.

Figure files (one each, every segment overlaid):

    timeseries.svg   analysed (decimated) concentration series
    histogram.svg    concentration histogram
    correlogram.svg  acf / pacf stems with the +/-1.96/sqrt(n) band
    drm.svg          delayed residual map with standard-error bars
    psd.svg          log-log periodogram with the fitted 1/f line
    track.svg        dominant period per sliding window
"""

import csv
import io
import os
from typing import List

from .errors import IoError, UnknownFormat
from .pipeline import FORMATS, Report

FIGURES = ("timeseries", "histogram", "correlogram", "drm", "psd", "track")


def _ok(fragment):
    return isinstance(fragment, dict) and "skipped" not in fragment


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _segment_tables(seg):
    """Yield ``(name, header, rows)`` for each CSV table of one segment."""
    series = seg.get("series")
    if series:
        rate, t0 = series["rate_hz"], series["start_t"]
        yield "series", ["epoch_s", "value"], [(t0 + k / rate, v) for k, v in enumerate(series["values"])]
    dist = seg.get("distribution")
    if _ok(dist):
        if _ok(dist.get("histogram")):
            h = dist["histogram"]
            yield "histogram", ["lo", "hi", "count"], list(zip(h["edges"][:-1], h["edges"][1:], h["counts"]))
        rows = []
        for a in dist.get("averaging", []):
            if "skipped" in a:
                rows.append((a["window_s"], None, None, None, None, a["skipped"]))
            else:
                rows.append((a["window_s"], a["fit"]["mu"], a["fit"]["sigma"], a["ks"]["d"], a["ks"]["p"], ""))
        yield "averaging", ["window_s", "mu", "sigma", "ks_d", "ks_p", "skipped"], rows
    corr = seg.get("correlation")
    if _ok(corr):
        yield "correlation", ["lag", "acf", "pacf"], [(k, a, p) for k, (a, p) in enumerate(zip(corr["acf"], corr["pacf"]))]
    ar = seg.get("ar")
    if _ok(ar):
        rows = [("a0", ar["a0"])] + [(f"a{i + 1}", c) for i, c in enumerate(ar["coeffs"])] + [("noise_var", ar["noise_var"])]
        yield "ar", ["term", "value"], rows
    drm = seg.get("drm")
    if _ok(drm):
        yield "drm", ["center", "mean_r", "stderr", "count"], [(b["center"], b["mean_r"], b["stderr"], b["count"]) for b in drm["bins"]]
    spec = seg.get("spectral")
    if _ok(spec):
        yield "psd", ["freq_hz", "power"], list(zip(spec["psd"]["freqs"], spec["psd"]["power"]))
    track = seg.get("track")
    if _ok(track):
        rows = [(r["t"], r.get("freq"), r.get("period"), r.get("prominence")) for r in track["records"]]
        yield "track", ["window_start_t", "freq_hz", "period_s", "prominence"], rows


def write_csv(report: Report, out_dir) -> List[str]:
    written = []
    for seg in report.segments:
        for name, header, rows in _segment_tables(seg):
            path = os.path.join(out_dir, f"seg{seg['index']:03d}_{name}.csv")
            written.append(_write(path, _csv_text(header, rows)))
    return written


def emit_report(report: Report, format: str, out_dir) -> List[str]:
    """Write ``report`` in one format; returns the written paths."""
    if format not in FORMATS:
        raise UnknownFormat(f"unknown report format {format!r}")
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out_dir}: {exc.strerror}") from exc
    if format == "json":
        return [_write(os.path.join(out_dir, "report.json"), report.to_json())]
    if format == "csv":
        return write_csv(report, out_dir)
    from .plotting import render_figures

    try:
        return render_figures(report, out_dir)
    except OSError as exc:
        raise IoError(f"cannot write figures to {out_dir}: {exc.strerror}") from exc

