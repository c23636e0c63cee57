"""Matplotlib figures for a report, saved as SVG.

Output is made reproducible by pinning the SVG id salt and dropping the
creation date from the file metadata.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "svg.hashsalt": "hfpollution",
    "svg.fonttype": "path",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.figsize": (8, 5),
    "figure.dpi": 100,
}


def _ok(fragment):
    return isinstance(fragment, dict) and "skipped" not in fragment


def _label(seg):
    return f"segment {seg['index']}"


def _note_empty(ax, drawn):
    if not drawn:
        ax.text(0.5, 0.5, "no data", ha="center", va="center", transform=ax.transAxes)


def plot_timeseries(ax, segments):
    drawn = False
    for seg in segments:
        s = seg.get("series")
        if not s:
            continue
        v = np.asarray(s["values"], dtype=float)
        t = (np.arange(v.size) / s["rate_hz"] + s["start_t"] - segments[0].get("start_t", 0)) / 60.0
        ax.plot(t, v, lw=0.8, label=_label(seg))
        ax.set_ylabel(s["unit"])
        drawn = True
    ax.set_xlabel("minutes since first segment")
    ax.set_title("Concentration (analysed series)")
    _note_empty(ax, drawn)


def plot_histogram(ax, segments):
    drawn = False
    for seg in segments:
        dist = seg.get("distribution")
        if not (_ok(dist) and _ok(dist.get("histogram"))):
            continue
        edges = np.asarray(dist["histogram"]["edges"])
        counts = np.asarray(dist["histogram"]["counts"])
        ax.bar(edges[:-1], counts, width=np.diff(edges), align="edge", alpha=0.6, label=_label(seg))
        drawn = True
    ax.set_xlabel("concentration")
    ax.set_ylabel("count")
    ax.set_title("Histogram")
    _note_empty(ax, drawn)


def plot_correlogram(ax, segments):
    drawn = False
    for i, seg in enumerate(segments):
        corr = seg.get("correlation")
        if not _ok(corr):
            continue
        lags = np.arange(len(corr["acf"]))
        ax.stem(lags, corr["acf"], linefmt=f"C{i}-", markerfmt=f"C{i}o", basefmt=" ", label=f"acf, {_label(seg)}")
        ax.plot(lags[1:], corr["pacf"][1:], f"C{i}x", label=f"pacf, {_label(seg)}")
        b = corr["sig_bound"]
        ax.axhspan(-b, b, color=f"C{i}", alpha=0.15)
        drawn = True
    ax.set_xlabel("lag (samples)")
    ax.set_ylabel("correlation")
    ax.set_title("Correlogram")
    _note_empty(ax, drawn)


def plot_drm(ax, segments):
    drawn = False
    for seg in segments:
        drm = seg.get("drm")
        if not _ok(drm):
            continue
        c = [b["center"] for b in drm["bins"]]
        m = [b["mean_r"] for b in drm["bins"]]
        e = [b["stderr"] for b in drm["bins"]]
        ax.errorbar(c, m, yerr=e, fmt="o-", capsize=3, label=_label(seg))
        drawn = True
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("x_t (bin centre)")
    ax.set_ylabel("mean r_{t+1}")
    ax.set_title("Delayed residual map")
    _note_empty(ax, drawn)


def plot_psd(ax, segments):
    drawn = False
    for i, seg in enumerate(segments):
        spec = seg.get("spectral")
        if not _ok(spec):
            continue
        f = np.asarray(spec["psd"]["freqs"])
        p = np.asarray(spec["psd"]["power"])
        pos = p > 0
        ax.loglog(f[pos], p[pos], f"C{i}-", lw=0.8, label=_label(seg))
        fit = spec.get("one_over_f")
        if _ok(fit):
            ff = f[(f >= fit["band"][0]) & (f <= fit["band"][1])]
            ax.loglog(ff, 10 ** (fit["intercept"] + fit["slope"] * np.log10(ff)), f"C{i}--", label=f"slope {fit['slope']:.2f}")
        drawn = True
    ax.set_xlabel("frequency (Hz)")
    ax.set_ylabel("power")
    ax.set_title("Periodogram")
    _note_empty(ax, drawn)


def plot_track(ax, segments):
    drawn = False
    for seg in segments:
        track = seg.get("track")
        if not _ok(track):
            continue
        rows = [r for r in track["records"] if r.get("period") is not None]
        if rows:
            ax.scatter([r["t"] for r in rows], [r["period"] for r in rows], s=16, label=_label(seg))
            drawn = True
    ax.set_xlabel("window start (epoch s)")
    ax.set_ylabel("dominant period (s)")
    ax.set_title("Dominant frequency track")
    _note_empty(ax, drawn)


PLOTTERS = {
    "timeseries": plot_timeseries,
    "histogram": plot_histogram,
    "correlogram": plot_correlogram,
    "drm": plot_drm,
    "psd": plot_psd,
    "track": plot_track,
}


def render_figures(report, out_dir):
    written = []
    with plt.rc_context(STYLE):
        for name, plotter in PLOTTERS.items():
            fig, ax = plt.subplots()
            plotter(ax, report.segments)
            if ax.get_legend_handles_labels()[0]:
                ax.legend(fontsize=8)
            fig.tight_layout()
            path = os.path.join(out_dir, f"{name}.svg")
            fig.savefig(path, format="svg", metadata={"Date": None})
            plt.close(fig)
            written.append(path)
    return written
