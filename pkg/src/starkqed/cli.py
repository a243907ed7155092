"""Command line front end: figure presets, single-point sweeps, validation.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .model import SystemParams
from .scanner import validation
from .scanner.figures import FIGURES, reproduce_figure
from .scanner.plotting import plot_curves
from .scanner.sweep import BACKEND_CHOICES, MEASURES, MODES, SweepConfig, run_sweep

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

DEFAULTS = {
    "figure": None,
    "wz": 0.0,
    "wc": 0.0,
    "gamma1": 1.0,
    "gamma2": 2.0,
    "lambda1": 1.0,
    "lambda2": 1.0,
    "n": 0,
    "alpha": 0j,
    "mode": "fock",
    "backend": None,  # paper for figures, exact for single points
    "measure": None,
    "tmax": 5.0,
    "samples": 1000,
    "out": "out",
    "validate": False,
    "bf_theta_steps": 361,
    "bf_phi_steps": 721,
    "bf_samples": 100,
    "n_max": 40,
    "jobs": 1,
}


class UsageError(Exception):
    pass


def _bool(text: str) -> bool:
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _complex(text: str) -> complex:
    return complex(text.replace(" ", ""))


CONVERTERS = {
    "figure": str, "wz": float, "wc": float, "gamma1": float, "gamma2": float,
    "lambda1": float, "lambda2": float, "n": int, "alpha": _complex, "mode": str,
    "backend": str, "measure": str, "tmax": float, "samples": int, "out": str,
    "validate": _bool, "bf_theta_steps": int, "bf_phi_steps": int, "bf_samples": int,
    "n_max": int, "jobs": int,
}


def read_config(path) -> dict:
    """Parse a key=value file; '#' starts a comment, keys may use '-' or '_'."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in CONVERTERS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = CONVERTERS[key](value)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: {exc}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="starkqed",
        description="Two Stark-shifted atoms in a cavity: populations, coherence and discord sweeps.",
        argument_default=argparse.SUPPRESS,
    )
    p.add_argument("--config", help="key=value file; command line flags take precedence")
    p.add_argument("--figure", choices=sorted(FIGURES), help="reproduce a figure preset")
    for name in ("wz", "wc", "gamma1", "gamma2", "lambda1", "lambda2"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--n", type=int, help="initial photon number")
    p.add_argument("--alpha", type=_complex, help="coherent amplitude, e.g. 1.5 or 1+0.5j")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--backend", choices=BACKEND_CHOICES)
    p.add_argument("--measure", choices=MEASURES)
    p.add_argument("--tmax", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--validate", action="store_true", help="run the validation report")
    p.add_argument("--bf-theta-steps", dest="bf_theta_steps", type=int)
    p.add_argument("--bf-phi-steps", dest="bf_phi_steps", type=int)
    p.add_argument("--bf-samples", dest="bf_samples", type=int, help="random states for brute-force discord")
    p.add_argument("--n-max", dest="n_max", type=int, help="Fock cutoff in coherent mode")
    p.add_argument("--jobs", type=int, help="worker processes for sweeps")
    return p


def resolve(argv) -> dict:
    args = vars(build_parser().parse_args(argv))
    opts = dict(DEFAULTS)
    config = args.pop("config", None)
    if config is not None:
        try:
            opts.update(read_config(config))
        except OSError as exc:
            raise UsageError(f"cannot read config {config}: {exc.strerror}") from None
    opts.update(args)
    for key, choices in (("figure", FIGURES), ("mode", MODES), ("backend", BACKEND_CHOICES), ("measure", MEASURES)):
        if opts[key] is not None and opts[key] not in choices:
            raise UsageError(f"{key} must be one of {sorted(choices)}")
    return opts


def _run_validation(opts, out: Path) -> int:
    report = validation.validate(
        theta_steps=opts["bf_theta_steps"], phi_steps=opts["bf_phi_steps"], bf_samples=opts["bf_samples"]
    )
    print(report.text())
    out.mkdir(parents=True, exist_ok=True)
    (out / "validation.json").write_text(report.to_json() + "\n", encoding="utf-8")
    (out / "validation.txt").write_text(report.text() + "\n", encoding="utf-8")
    return EXIT_OK if report.ok else EXIT_VALIDATION


def _run_point(opts, out: Path) -> int:
    params = SystemParams(
        opts["wz"], opts["wc"], opts["gamma1"], opts["gamma2"],
        opts["lambda1"], opts["lambda2"], opts["n"], opts["alpha"],
    )
    cfg = SweepConfig(
        points=[params],
        backend=opts["backend"] or "exact",
        tmax=opts["tmax"],
        samples=opts["samples"],
        measure=opts["measure"] or "both",
        mode=opts["mode"],
        n_max=opts["n_max"],
        out=out,
        stem="point",
        jobs=opts["jobs"],
    )
    result = run_sweep(cfg)
    rows = result.samples[0]
    for column, label in (("coherence", "quantum coherence"), ("discord", "quantum discord")):
        if cfg.measure not in ("both", "qc" if column == "coherence" else "qd"):
            continue
        curves = []
        for b in cfg.backends:
            sel = [r for r in rows if r.backend == b]
            y = [float("nan") if getattr(r, column) is None else getattr(r, column) for r in sel]
            curves.append((b, [r.t for r in sel], y))
        svg = result.paths[0].with_name(result.paths[0].stem + f"_{column}.svg")
        title = f"wz={params.wz:g} wc={params.wc:g} gamma=({params.gamma1:g},{params.gamma2:g}) n={params.n}"
        plot_curves(curves, svg, ylabel=label, title=title)
        print(svg)
    for path in result.paths:
        print(path)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        opts = resolve(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"starkqed: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(opts["out"])
    try:
        if opts["validate"]:
            return _run_validation(opts, out)
        if opts["figure"]:
            csvs, svgs = reproduce_figure(
                opts["figure"], out,
                backend=opts["backend"] or "paper",
                tmax=opts["tmax"],
                samples=opts["samples"],
                measure=opts["measure"],
                mode=opts["mode"],
                n_max=opts["n_max"],
                jobs=opts["jobs"],
            )
            for path in [*csvs, *svgs]:
                print(path)
            return EXIT_OK
        return _run_point(opts, out)
    except OSError as exc:
        print(f"starkqed: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, TypeError) as exc:
        print(f"starkqed: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
