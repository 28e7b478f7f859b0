"""Figures written next to the CSV/JSON outputs (``--plot``)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": (6.0, 3.7),
    "svg.hashsalt": "levyrest",
}


def figure_path(output_path, suffix: str = ".png") -> Path:
    return Path(output_path).with_suffix(suffix)


def _save(fig, path) -> Path:
    path = Path(path)
    # drop the version stamp so reruns give identical bytes
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_marginals(times, positions: np.ndarray, path, title: str = "") -> Path:
    """Empirical CDFs of the first coordinate at each grid time.

    ``positions`` has shape ``(paths, len(times), dim)``.
    """
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for j, t in enumerate(times):
            x = np.sort(positions[:, j, 0])
            ax.step(x, np.arange(1, len(x) + 1) / len(x), where="post", label=f"t = {t:g}")
        lo, hi = np.quantile(positions[:, :, 0], [0.01, 0.99])
        if hi > lo:
            ax.set_xlim(lo, hi)
        ax.set_xlabel("x_1")
        ax.set_ylabel("empirical CDF")
        if title:
            ax.set_title(title)
        ax.legend(loc="lower right")
        return _save(fig, path)


def plot_convergence(report: dict, path) -> Path:
    """KS distance to the limit marginal against the scale parameter n."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        series: dict[tuple, list] = {}
        for entry in report["entries"]:
            series.setdefault((entry["kind"], entry["t"]), []).append((entry["n"], entry["ks"]))
        for (kind, t), pts in sorted(series.items()):
            n, ks = zip(*pts)
            ax.plot(n, ks, marker="o", label=f"{kind}, t = {t:g}")
        ax.set_xscale("log")
        ax.set_xlabel("n")
        ax.set_ylabel("two-sample KS distance")
        ax.set_title(f"limit case ({report['case']})")
        ax.legend()
        return _save(fig, path)
