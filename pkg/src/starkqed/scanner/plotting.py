"""Line charts of measures against time, written as SVG."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

# fixed salt and no date stamp so identical data gives identical files
matplotlib.rcParams["svg.hashsalt"] = "starkqed"
matplotlib.rcParams["svg.fonttype"] = "none"

COLORS = ("tab:blue", "tab:brown", "tab:red", "tab:green", "tab:purple", "tab:orange")


def plot_curves(curves, path, xlabel="t", ylabel="", title=None):
    """``curves`` is a sequence of (label, t, y); missing y values may be NaN."""
    fig, ax = plt.subplots(figsize=(5, 3.6))
    for i, (label, t, y) in enumerate(curves):
        ax.plot(t, y, color=COLORS[i % len(COLORS)], lw=1.2, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title, fontsize=10)
    ax.set_xlim(min(c[1][0] for c in curves), max(c[1][-1] for c in curves))
    ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
