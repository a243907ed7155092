"""Acceptance criteria 1-10, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed as they happen
and again in the pytest terminal summary (see conftest.py).  Running this
file directly executes all criteria without pytest.
"""

import filecmp
import math
import time

import numpy as np

from starkqed import correlations, oracle, propagator
from starkqed.atomstate import dynamical_state
from starkqed.model import SystemParams, dressed_coefficients
from starkqed.scanner import validation
from starkqed.scanner.figures import figure_points, reproduce_figure
from starkqed.scanner.spectral import analysis_grid, expected_frequencies, spectral_peaks

RESULTS = {}

# frozen on the first oracle run (paper backend, t in [0, 5], 1000 samples)
FROZEN_MAX_C_BY_STARK = [0.24960071847362392, 0.1547989004626611, 0.1115610285395911, 0.08694933891854344]
FROZEN_MEAN_C_BY_N = [0.1422873846973343, 0.1421389279422539, 0.12370024201344774]
# printed rational k formulas vs linear solve, relative; first run gave 5.97e-14
FROZEN_PRINTED_K_DEVIATION = 1e-12


def record(number, passed, detail):
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    RESULTS[number] = line
    print(line)
    return passed


def random_params(rng):
    return SystemParams(
        rng.uniform(-2, 2), rng.uniform(0, 2), rng.uniform(0, 5), rng.uniform(0, 5),
        rng.uniform(0.2, 2), rng.uniform(0.2, 2), int(rng.integers(0, 6)),
    )


def random_dynamical_states(seed, count):
    rng = np.random.default_rng(seed)
    return [dynamical_state(x / 2, b2, a2) for a2, x, b2 in rng.dirichlet([1, 1, 1], size=count)]


def test_criterion_01_unitarity():
    rng = np.random.default_rng(0)
    draws = [random_params(rng) for _ in range(20)]
    t = np.linspace(0, 10, 1000)
    start = time.perf_counter()
    worst = 0.0
    for p in draws:
        psi = propagator.amplitudes_exact(p, t)
        worst = max(worst, float(np.max(np.abs(np.sum(np.abs(psi) ** 2, axis=1) - 1))))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-12 and elapsed < 1.0
    assert record(1, ok, f"max |norm-1| = {worst:.2e} (< 1e-12), {elapsed:.2f} s (< 1 s)")


def test_criterion_02_oracle_agreement():
    start = time.perf_counter()
    worst = 0.0
    for p in figure_points():
        traj = oracle.integrate(p, 5.0, 500, tol=1e-10)
        worst = max(worst, float(np.max(np.abs(traj.states - propagator.amplitudes_exact(p, traj.times)))))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 10.0
    assert record(2, ok, f"max amplitude deviation = {worst:.2e} (< 1e-8), {elapsed:.2f} s (< 10 s)")


def test_criterion_03_paper_weights():
    worst_res = worst_dev = 0.0
    for p in figure_points():
        pw = propagator.paper_weights(dressed_coefficients(p))
        worst_res = max(worst_res, float(np.max(np.abs(pw.residual))))
        worst_dev = max(worst_dev, pw.printed_deviation)
    ok = worst_res < 1e-10 and worst_dev <= FROZEN_PRINTED_K_DEVIATION
    assert record(
        3, ok,
        f"k-condition residual = {worst_res:.2e} (< 1e-10), printed-k deviation = {worst_dev:.2e} "
        f"(baseline <= {FROZEN_PRINTED_K_DEVIATION:g})",
    )


def test_criterion_04_coherence_identity():
    worst = max(
        abs(correlations.coherence_closed_form(s.r22) - correlations.coherence_jsd(s))
        for s in random_dynamical_states(1, 1000)
    )
    bell = correlations.coherence_jsd(dynamical_state(0.5, 0.0))
    quarter = correlations.coherence_jsd(dynamical_state(0.25, 0.25, 0.25))
    ok_id = worst < 1e-10
    ok_bell = abs(bell - 0.557923) <= 1e-6
    ok_quarter = abs(quarter - 0.394514) <= 1e-6
    assert record(
        4, ok_id and ok_bell and ok_quarter,
        f"identity gap = {worst:.2e} (< 1e-10) {'ok' if ok_id else 'FAIL'}; "
        f"Bell = {bell:.7f} vs 0.557923 {'ok' if ok_bell else 'FAIL'}; "
        f"e2=0.25 -> {quarter:.7f} vs 0.394514 (|diff| {abs(quarter - 0.394514):.2e}) {'ok' if ok_quarter else 'FAIL'}",
    )


def test_criterion_05_discord_identities():
    states = random_dynamical_states(2, 100)
    q2_gap = max(abs(correlations.discord_closed_form(s).Q2 - 2 * s.r22) for s in states)
    start = time.perf_counter()
    bf_gap = theta_off = 0.0
    for s in states:
        bf = correlations.discord_bruteforce(s, 361, 721)
        d = correlations.discord_closed_form(s)
        bf_gap = max(bf_gap, abs(bf.Q - min(d.Q1, d.Q2)))
        th = bf.angles.theta
        theta_off = max(theta_off, min(th, abs(th - math.pi / 2)) / bf.theta_step)
    elapsed = time.perf_counter() - start
    # (d) everywhere: random states plus every figure trajectory sample
    cons = max(abs(d.I - d.J - d.Q) for d in map(correlations.discord_closed_form, states))
    t = np.linspace(0, 5, 1000)
    for p in figure_points():
        for backend in ("paper", "exact"):
            e2, b2, a2 = propagator.population_arrays(p, t, backend)
            for x in zip(e2, b2, a2):
                d = correlations.discord_closed_form(dynamical_state(*x))
                cons = max(cons, abs(d.I - d.J - d.Q))
    ok = q2_gap < 1e-12 and bf_gap < 1e-3 and theta_off <= 1.0 and cons < 1e-9 and elapsed < 30
    assert record(
        5, ok,
        f"(a) |Q2-2e2| = {q2_gap:.1e}; (b) |Qbf-min(Q1,Q2)| = {bf_gap:.1e} (< 1e-3); "
        f"(c) argmin theta offset = {theta_off:.2f} steps (<= 1); (d) |I-J-Q| = {cons:.1e} (< 1e-9); "
        f"brute force {elapsed:.1f} s (< 30 s)",
    )


def test_criterion_06_bell_point():
    d = correlations.discord_closed_form(dynamical_state(0.5, 0.0))
    ok = abs(d.Q - 1) < 1e-9 and abs(d.I - 2) < 1e-9
    assert record(6, ok, f"Q = {d.Q:.12f}, I = {d.I:.12f}")


def test_criterion_07_spectral_content():
    bad = []
    for p in figure_points():
        t, dt = analysis_grid(p, "paper", samples=4096)
        e2, _, _ = propagator.population_arrays(p, t, "paper")
        rep = spectral_peaks(e2, dt, expected_frequencies(p, "paper"))
        if not rep.ok:
            bad.append(p)
    assert record(7, not bad, f"{24 - len(bad)}/24 presets show exactly the expected lines")


def test_criterion_08_stark_trend():
    vals = validation.max_coherence_by_stark()
    mono = all(a >= b for a, b in zip(vals, vals[1:]))
    frozen = np.allclose(vals, FROZEN_MAX_C_BY_STARK, rtol=1e-9, atol=0)
    assert record(8, mono and frozen, "max C for gamma sum 3,5,7,9: " + ", ".join(f"{v:.6f}" for v in vals))


def test_criterion_09_photon_trend():
    vals = validation.mean_coherence_by_photons()
    mono = all(a >= b for a, b in zip(vals, vals[1:]))
    frozen = np.allclose(vals, FROZEN_MEAN_C_BY_N, rtol=1e-9, atol=0)
    assert record(9, mono and frozen, "mean C for n = 0,1,3: " + ", ".join(f"{v:.6f}" for v in vals))


def test_criterion_10_determinism(tmp_path):
    a, _ = reproduce_figure("fig2", tmp_path / "a")
    b, _ = reproduce_figure("fig2", tmp_path / "b")
    same = len(a) == len(b) == 12 and all(filecmp.cmp(x, y, shallow=False) for x, y in zip(a, b))
    assert record(10, same, f"{len(a)} CSVs byte-identical across two runs")


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except AssertionError:
                pass
