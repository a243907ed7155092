"""Presets for the coherence and discord time-evolution figures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from ..model import SystemParams
from .plotting import plot_curves
from .sweep import SweepConfig, run_sweep

GAMMA_PAIRS = ((1, 2), (2, 3), (3, 4), (4, 5))
PANELS = (("A", 0), ("B", 1), ("C", 3))


@dataclass(frozen=True)
class FigurePreset:
    name: str
    measure: str  # "qc" or "qd"
    wz: float
    wc: float

    @property
    def column(self) -> str:
        return "coherence" if self.measure == "qc" else "discord"

    def points(self, lambda1=1.0, lambda2=1.0):
        return [
            SystemParams(self.wz, self.wc, g1, g2, lambda1, lambda2, n)
            for _, n in PANELS
            for g1, g2 in GAMMA_PAIRS
        ]


FIGURES = {
    "fig2": FigurePreset("fig2", "qc", 0.0, 0.0),
    "fig3": FigurePreset("fig3", "qc", 0.5, 1.0),
    "fig4": FigurePreset("fig4", "qd", 0.0, 0.0),
    "fig5": FigurePreset("fig5", "qd", 0.5, 1.0),
}


def figure_points():
    """The 24 distinct parameter points behind all four figures."""
    return FIGURES["fig2"].points() + FIGURES["fig3"].points()


def figure_config(fig_id: str, out=Path("out"), backend="paper", tmax=5.0, samples=1000, measure=None, **kw) -> SweepConfig:
    preset = FIGURES[fig_id]
    return SweepConfig(
        points=preset.points(),
        backend=backend,
        tmax=tmax,
        samples=samples,
        measure=measure or preset.measure,
        out=Path(out),
        stem=fig_id,
        **kw,
    )


def reproduce_figure(fig_id: str, out=Path("out"), backend="paper", tmax=5.0, samples=1000, plot=True, **kw):
    """Write per-point CSVs and one SVG per panel; returns (csv paths, svg paths)."""
    if fig_id not in FIGURES:
        raise KeyError(f"unknown figure {fig_id!r}; choose from {sorted(FIGURES)}")
    preset = FIGURES[fig_id]
    cfg = figure_config(fig_id, out, backend, tmax, samples, **kw)
    plotted = preset.column if cfg.measure in (preset.measure, "both") else ("coherence" if cfg.measure == "qc" else "discord")
    result = run_sweep(cfg)
    svgs = []
    if plot:
        per_panel = len(GAMMA_PAIRS)
        for k, (label, n) in enumerate(PANELS):
            curves = []
            for j, (g1, g2) in enumerate(GAMMA_PAIRS):
                rows = result.samples[k * per_panel + j]
                for b in cfg.backends:
                    sel = [r for r in rows if r.backend == b]
                    t = [r.t for r in sel]
                    y = [getattr(r, plotted) for r in sel]
                    y = [math.nan if v is None else v for v in y]
                    tag = f" [{b}]" if len(cfg.backends) > 1 else ""
                    curves.append((f"$\\gamma_1={g1}, \\gamma_2={g2}${tag}", t, y))
            ylabel = "quantum coherence" if plotted == "coherence" else "quantum discord"
            title = f"({label}) n={n}, wz={preset.wz:g}, wc={preset.wc:g}, backend={cfg.backend}"
            path = cfg.out / f"{fig_id}_{label}_n{n}.svg"
            svgs.append(plot_curves(curves, path, ylabel=ylabel, title=title))
    return result.paths, svgs
