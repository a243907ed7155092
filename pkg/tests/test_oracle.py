import numpy as np
import pytest

from starkqed import oracle
from starkqed.model import SystemParams, dressed_coefficients, initial_state
from starkqed.propagator import amplitudes_exact

TRIVIAL = SystemParams(0, 0, 0, 0, 1, 1, 0)
FIG2_A = SystemParams(0, 0, 1, 2, 1, 1, 0)


def test_rhs_trivial():
    psi = initial_state().to_array()
    got = oracle.ode_rhs(dressed_coefficients(TRIVIAL), 0, psi)
    assert np.allclose(got, -1j * np.array([0, 1, 1, 0]))


def test_trivial_final_state():
    traj = oracle.integrate(TRIVIAL, 2.0, 50, tol=1e-10)
    assert np.max(np.abs(traj.states[-1] - amplitudes_exact(TRIVIAL, [2.0])[0])) < 1e-8


def test_first_sample_is_initial_state():
    traj = oracle.integrate(FIG2_A, 1e-9, 2)
    assert np.array_equal(traj.states[0], [1, 0, 0, 0])
    assert np.allclose(traj.states[1], [1, 0, 0, 0], atol=1e-7)


def test_figure_point_crosscheck():
    rep = oracle.crosscheck(FIG2_A, 5.0, 500)
    assert rep.max_amplitude_error < 1e-8
    # paper vs exact disagreement is a reported number, not a verdict
    assert rep.max_population_error is not None and rep.max_population_error > 0


@pytest.mark.parametrize("p", [TRIVIAL, FIG2_A], ids=["trivial", "fig2A"])
def test_error_decreases_with_tolerance(p):
    # coarse output grid so the sampling points do not cap the step size
    errs = []
    for tol in (1e-6, 1e-8, 1e-10):
        traj = oracle.integrate(p, 5.0, 3, tol)
        errs.append(np.max(np.abs(traj.states - amplitudes_exact(p, traj.times))))
    assert errs[0] > errs[1] > errs[2]


def test_norm_drift_small():
    traj = oracle.integrate(FIG2_A, 5.0, 200)
    assert traj.norm_drift().max() < 1e-8


def test_zero_coupling_constant():
    with pytest.warns(UserWarning):
        p = SystemParams(0.3, 0.2, 1, 2, 0, 0, 1)
    rep = oracle.crosscheck(p, 2.0, 10)
    assert rep.max_amplitude_error < 1e-8
    assert rep.max_population_error is None
    traj = oracle.integrate(p, 2.0, 10)
    assert np.allclose(np.abs(traj.states[:, 0]), 1)


def test_integrate_many_matches_single():
    pts = [TRIVIAL, FIG2_A]
    batch = oracle.integrate_many(pts, 1.0, 11)
    for i, p in enumerate(pts):
        assert np.allclose(batch[:, i, :], oracle.integrate(p, 1.0, 11).states, atol=1e-9)


def test_backwards_integration():
    H = np.array([[0, 1], [1, 0]], dtype=float)
    out, _ = oracle.integrate_linear(H, np.array([1, 0], dtype=complex), np.array([0.0, -1.0]), 1e-10, 1e-10)
    assert np.allclose(out[-1], [np.cos(1), 1j * np.sin(1)], atol=1e-8)


@pytest.mark.parametrize(
    "kwargs",
    [dict(t_end=0.0, samples=5), dict(t_end=1.0, samples=1), dict(t_end=1.0, samples=5, tol=1e-3),
     dict(t_end=1.0, samples=5, tol=1e-15)],
)
def test_bad_arguments(kwargs):
    with pytest.raises(ValueError):
        oracle.integrate(FIG2_A, **kwargs)


def test_step_underflow_raises():
    H = np.diag([1e14, -1e14])
    with pytest.raises(oracle.IntegrationError) as info:
        oracle.integrate_linear(H, np.array([1, 0], dtype=complex), np.array([0.0, 1.0]), 1e-13, 1e-13, max_steps=10)
    assert info.value.t >= 0
