"""Static SVG figure rendering for the CLI report path.

All functions write a figure to a file and return the file name; nothing
is ever displayed.  SVG output is script-free and written without a date
stamp so reruns differ only where the data differs.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

PLOT_RC = {
    "figure.figsize": (7.0, 4.5),
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.fonttype": "none",
    "svg.hashsalt": "qwalk-nm",  # deterministic element ids, diffable output
}

_SAVE_KW = {"format": "svg", "metadata": {"Date": None}, "bbox_inches": "tight"}


def _occupied(positions, dist):
    mask = dist > 1e-12
    return positions[mask], dist[mask]


def save_distribution(path, positions, dist, label):
    """Final-step position distribution, occupied sites only."""
    with plt.rc_context(PLOT_RC):
        fig, ax = plt.subplots()
        x, p = _occupied(np.asarray(positions), np.asarray(dist))
        ax.plot(x, p, lw=1.2, label=label)
        ax.set_xlabel("position")
        ax.set_ylabel("probability")
        ax.legend(loc="best")
        fig.savefig(path, **_SAVE_KW)
        plt.close(fig)
    return path


def save_step_series(path, series_by_name, ylabel):
    """One or more per-step scalar series on a shared time axis."""
    with plt.rc_context(PLOT_RC):
        fig, ax = plt.subplots()
        for name, values in series_by_name.items():
            ax.plot(np.arange(len(values)), values, lw=1.0, label=name)
        ax.set_xlabel("step")
        ax.set_ylabel(ylabel)
        ax.legend(loc="best")
        fig.savefig(path, **_SAVE_KW)
        plt.close(fig)
    return path


def save_variance_sweep(path, curves, classical_value, noiseless_value):
    """Variance against noise amplitude, one curve per bandwidth, log y."""
    with plt.rc_context(PLOT_RC):
        fig, ax = plt.subplots()
        for gamma, (amps, variances) in sorted(curves.items()):
            ax.plot(amps, variances, marker="o", ms=3, lw=1.0, label=f"gamma={gamma:g}")
        ax.axhline(classical_value, color="k", ls="--", lw=1.0, label="classical")
        ax.axhline(noiseless_value, color="gray", ls=":", lw=1.0, label="noise-free")
        ax.set_yscale("log")
        ax.set_xlabel("noise amplitude a")
        ax.set_ylabel("variance at final step")
        ax.legend(loc="best")
        fig.savefig(path, **_SAVE_KW)
        plt.close(fig)
    return path


def save_spectrum_report(path, steps, values, fitted, frequencies, power, peaks, bands):
    """Two panels: the series with its subtracted fit, and the residual
    power spectrum over 0 < f <= 1/2 with detected peaks marked."""
    with plt.rc_context(PLOT_RC):
        fig, (top, bottom) = plt.subplots(2, 1, figsize=(7.0, 6.5))
        top.plot(steps, values, lw=1.0, label="series")
        top.plot(steps, fitted, lw=1.0, ls="--", label="subtracted fit")
        top.set_xlabel("step")
        top.set_ylabel("value")
        top.legend(loc="best")

        half = len(power) // 2
        bottom.plot(frequencies[1:half + 1], power[1:half + 1], lw=1.0)
        for lo, hi in bands:
            bottom.axvspan(lo, hi, alpha=0.12, color="tab:orange")
        for peak in peaks:
            bottom.plot([peak.frequency], [peak.power], "v", color="tab:red", ms=7)
            bottom.annotate(f"f={peak.frequency:g}", (peak.frequency, peak.power),
                            textcoords="offset points", xytext=(4, 4), fontsize=8)
        bottom.set_xlabel("frequency (cycles/step)")
        bottom.set_ylabel("power")
        fig.savefig(path, **_SAVE_KW)
        plt.close(fig)
    return path
