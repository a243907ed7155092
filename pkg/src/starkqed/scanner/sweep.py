"""Parameter sweeps written to self-describing CSV files."""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..atomstate import coherent_mix_populations, reduce_to_atoms
from ..correlations import CorrelationSample, coherence_jsd, discord_closed_form
from ..model import SystemParams
from ..propagator import Populations, population_arrays

COLUMNS = (
    "t", "backend", "wz", "wc", "gamma1", "gamma2", "lambda1", "lambda2", "n",
    "e2", "b2", "a2", "coherence", "discord", "classical", "mutual_info", "valid",
)

MEASURES = ("qc", "qd", "both")
MODES = ("fock", "coherent")
BACKEND_CHOICES = ("exact", "paper", "both")


@dataclass
class SweepConfig:
    points: list
    backend: str = "paper"
    tmax: float = 5.0
    samples: int = 1000
    measure: str = "both"
    mode: str = "fock"
    n_max: int = 40
    out: Path = Path("out")
    stem: str = "sweep"
    bf_samples: int = 100
    bf_theta_steps: int = 361
    bf_phi_steps: int = 721
    jobs: int = 1

    def __post_init__(self):
        self.out = Path(self.out)
        if not self.tmax > 0:
            raise ValueError("tmax must be positive")
        if self.samples < 2:
            raise ValueError("samples must be at least 2")
        if not self.points:
            raise ValueError("no parameter points")
        for p in self.points:
            if not isinstance(p, SystemParams):
                raise TypeError(f"expected SystemParams, got {type(p).__name__}")
        if self.backend not in BACKEND_CHOICES:
            raise ValueError(f"backend must be one of {BACKEND_CHOICES}")
        if self.measure not in MEASURES:
            raise ValueError(f"measure must be one of {MEASURES}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")

    @property
    def backends(self) -> tuple:
        return ("exact", "paper") if self.backend == "both" else (self.backend,)

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.tmax, self.samples)

    def header(self) -> str:
        items = {
            "backend": self.backend,
            "mode": self.mode,
            "measure": self.measure,
            "tmax": fmt(self.tmax),
            "samples": self.samples,
        }
        if self.mode == "coherent":
            items["n_max"] = self.n_max
            items["alpha"] = ";".join(fmt(complex(p.alpha)) for p in self.points)
        return "# " + " ".join(f"{k}={v}" for k, v in items.items())


@dataclass
class SweepResult:
    paths: list = field(default_factory=list)
    samples: dict = field(default_factory=dict)  # point index -> list[CorrelationSample]


def fmt(x) -> str:
    """Locale-independent, round-trippable float text (17 significant digits)."""
    if x is None:
        return ""
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    return f"{float(x):.17g}"


def point_samples(params: SystemParams, times, backend: str, measure: str = "both", mode: str = "fock", n_max: int = 40):
    """Correlation samples for one parameter point and backend, time ascending."""
    if mode == "fock":
        e2, b2, a2 = population_arrays(params, times, backend)
    else:
        e2, b2, a2 = coherent_mix_populations(params, times, n_max, backend)
    rows = []
    for t, e, b, a in zip(times, e2, b2, a2):
        pops = Populations.checked(float(e), float(b), float(a))
        if not pops.valid:
            rows.append(CorrelationSample(float(t), pops.e2, pops.b2, pops.a2, None, None, None, None, backend, False))
            continue
        state = reduce_to_atoms(pops)
        coh = disc = cls = mi = None
        if measure in ("qc", "both"):
            coh = coherence_jsd(state)
        if measure in ("qd", "both"):
            d = discord_closed_form(state)
            disc, cls, mi = d.Q, d.J, d.I
        rows.append(CorrelationSample(float(t), pops.e2, pops.b2, pops.a2, coh, disc, cls, mi, backend, True))
    return rows


def _point_job(args):
    params, times, backends, measure, mode, n_max = args
    per_backend = [point_samples(params, times, b, measure, mode, n_max) for b in backends]
    # time-major, backend-minor
    return [s for group in zip(*per_backend) for s in group]


def point_filename(stem: str, index: int, p: SystemParams) -> str:
    return f"{stem}_{index:02d}_n{p.n}_g{p.gamma1:g}-{p.gamma2:g}_wz{p.wz:g}_wc{p.wc:g}.csv"


def render_csv(cfg: SweepConfig, params: SystemParams, samples) -> str:
    buf = io.StringIO()
    buf.write(cfg.header() + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    fixed = [fmt(params.wz), fmt(params.wc), fmt(params.gamma1), fmt(params.gamma2),
             fmt(params.lambda1), fmt(params.lambda2), str(params.n)]
    for s in samples:
        w.writerow(
            [fmt(s.t), s.backend, *fixed, fmt(s.e2), fmt(s.b2), fmt(s.a2),
             fmt(s.coherence), fmt(s.discord), fmt(s.classical), fmt(s.mutual_info),
             "true" if s.valid else "false"]
        )
    return buf.getvalue()


def compute_sweep(cfg: SweepConfig) -> dict:
    times = cfg.times()
    jobs = [(p, times, cfg.backends, cfg.measure, cfg.mode, cfg.n_max) for p in cfg.points]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_point_job, jobs))
    else:
        results = [_point_job(j) for j in jobs]
    return dict(enumerate(results))


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Compute every point and write one CSV per parameter point."""
    samples = compute_sweep(cfg)
    os.makedirs(cfg.out, exist_ok=True)
    result = SweepResult(samples=samples)
    for i, p in enumerate(cfg.points):
        path = cfg.out / point_filename(cfg.stem, i, p)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(render_csv(cfg, p, samples[i]))
        result.paths.append(path)
    return result


def read_csv(path):
    """Rows of a sweep CSV as dicts (header comment skipped)."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    return list(csv.DictReader(lines))
