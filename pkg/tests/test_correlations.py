import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starkqed import correlations as C
from starkqed.atomstate import TwoQubitXState, dynamical_state, marginal_entropies

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.diag([1.0, -1.0]).astype(complex),
)


def vn(rho):
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log2(w)))


def oracle_coherence(rho):
    sigma = np.diag(np.diag(rho))
    return math.sqrt(max(vn((rho + sigma) / 2) - vn(rho) / 2 - vn(sigma) / 2, 0.0))


def oracle_conditional_entropy(rho, theta, phi):
    """sum_j p_j S(rho_A|j) for a projective measurement of B along (theta, phi)."""
    n = (math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))
    ns = sum(c * s for c, s in zip(n, PAULI))
    total = 0.0
    for sign in (1, -1):
        proj = np.kron(np.eye(2), (np.eye(2) + sign * ns) / 2)
        m = proj @ rho @ proj
        p = np.trace(m).real
        if p > 1e-14:
            total += p * vn(np.einsum("ijkj->ik", m.reshape(2, 2, 2, 2)) / p)
    return total


def random_xstate(rng, scale=0.95):
    d = rng.dirichlet([1, 1, 1, 1])
    return TwoQubitXState(
        *d,
        r23=scale * rng.uniform() * math.sqrt(d[1] * d[2]) * np.exp(2j * math.pi * rng.uniform()),
        r14=scale * rng.uniform() * math.sqrt(d[0] * d[3]) * np.exp(2j * math.pi * rng.uniform()),
    )


def random_dynamical(rng):
    a2, x, b2 = rng.dirichlet([1, 1, 1])
    return dynamical_state(x / 2, b2, a2)


# ------------------------------------------------------------------ coherence


@pytest.mark.parametrize("e2, expected", [(0.0, 0.0), (0.5, 0.5579230452841439), (0.25, 0.39451116870066744)])
def test_coherence_closed_form_values(e2, expected):
    assert np.isclose(C.coherence_closed_form(e2), expected, rtol=0, atol=1e-12)


def test_coherence_diagonal_state_zero():
    s = TwoQubitXState(0.1, 0.2, 0.3, 0.4)
    assert C.coherence_jsd(s) == 0.0


def test_coherence_jsd_matches_oracle_general_xstate():
    rng = np.random.default_rng(8)
    for _ in range(50):
        s = random_xstate(rng)
        assert np.isclose(C.coherence_jsd(s), oracle_coherence(s.matrix()), atol=1e-12)


def test_coherence_identity_random_dynamical():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        s = random_dynamical(rng)
        assert abs(C.coherence_closed_form(s.r22) - C.coherence_jsd(s)) < 1e-10


def test_coherence_closed_form_domain():
    with pytest.raises(ValueError):
        C.coherence_closed_form(0.6)


def test_jsd_symmetric():
    rng = np.random.default_rng(3)
    a, b = random_xstate(rng).matrix(), random_xstate(rng).matrix()
    assert np.isclose(C.jsd(a, b), C.jsd(b, a))
    assert C.jsd(a, a) == pytest.approx(0.0, abs=1e-12)


# ------------------------------------------------------------------ discord


def test_product_state_discord_zero():
    s = dynamical_state(0.0, 0.0, 1.0)
    d = C.discord_closed_form(s)
    assert d.Q == pytest.approx(0.0, abs=1e-12)
    assert d.J == pytest.approx(0.0, abs=1e-12)


def test_bell_point():
    d = C.discord_closed_form(dynamical_state(0.5, 0.0))
    assert abs(d.Q - 1) < 1e-9
    assert abs(d.I - 2) < 1e-9
    assert abs(d.Q2 - 1) < 1e-12
    # the theta = pi/2 branch also reaches 1 for a pure maximally entangled block
    assert abs(d.Q1 - 1) < 1e-9


def test_printed_q2_is_twice_e2():
    rng = np.random.default_rng(4)
    for _ in range(200):
        s = random_dynamical(rng)
        assert abs(C.discord_closed_form(s).Q2 - 2 * s.r22) < 1e-12


def test_printed_dynamical_q1_differs_by_sign_of_one_term():
    rng = np.random.default_rng(6)
    for _ in range(50):
        s = random_dynamical(rng)
        e2, b2 = s.r22, s.r44
        q1_printed, q2_printed = C.discord_dynamical_printed(e2, b2)
        q1 = C.discord_closed_form(s).Q1
        term = 2 * e2 * math.log2(2 * e2) if e2 > 0 else 0.0
        assert np.isclose(q1_printed - q1, -2 * term, atol=1e-12)
        assert np.isclose(q2_printed, 2 * e2)


@pytest.mark.parametrize("seed", range(5))
def test_measurement_formula_matches_projector_oracle(seed):
    rng = np.random.default_rng(seed)
    s = random_xstate(rng)
    rho = s.matrix()
    for theta, phi in rng.uniform(0, 1, (20, 2)) * [math.pi / 2, 2 * math.pi]:
        got = float(C.conditional_entropy(s, theta, phi))
        # the sine form in the transverse term is the cosine form with phi shifted by pi/4
        want = oracle_conditional_entropy(rho, theta, phi + math.pi / 4)
        assert abs(got - want) < 1e-10


def test_measurement_probabilities_sum_to_one():
    s = random_xstate(np.random.default_rng(9))
    theta = np.linspace(0, math.pi / 2, 5)[:, None]
    phi = np.linspace(0, 6, 4)[None, :]
    (p1, p2), (u1, u2) = C.measurement_outcomes(s, theta, phi)
    assert p1.shape == (5, 4)
    assert np.allclose(p1 + p2, 1)
    assert np.all(u1 >= -1e-15) and np.all(u2 >= -1e-15)


def test_bruteforce_quarter_state():
    s = dynamical_state(0.25, 0.25, 0.25)
    bf = C.discord_bruteforce(s)
    assert abs(bf.Q - C.discord_closed_form(s).Q) < 1e-3


def test_bruteforce_diagonal_state_zero():
    s = TwoQubitXState(0.1, 0.2, 0.3, 0.4)
    assert abs(C.discord_bruteforce(s, 37, 73).Q) < 1e-12


def test_bruteforce_never_below_closed_form_on_dynamical_states():
    rng = np.random.default_rng(2)
    for _ in range(20):
        s = random_dynamical(rng)
        bf = C.discord_bruteforce(s, 91, 181)
        d = C.discord_closed_form(s)
        assert bf.Q >= d.Q - 1e-9
        assert abs(bf.Q - d.Q) < 1e-3
        th = bf.angles.theta
        assert min(th, abs(th - math.pi / 2)) <= bf.theta_step


def test_bruteforce_tie_break_deterministic():
    s = TwoQubitXState(0.25, 0.25, 0.25, 0.25)
    bf = C.discord_bruteforce(s, 9, 9)
    assert (bf.angles.theta, bf.angles.phi) == (0.0, 0.0)


def test_grid_too_coarse():
    with pytest.raises(ValueError):
        C.measurement_grid(5, 100)


@pytest.mark.parametrize("theta, phi", [(-0.1, 0.0), (2.0, 0.0), (0.5, 2 * math.pi)])
def test_measurement_angles_validated(theta, phi):
    with pytest.raises(ValueError):
        C.MeasurementAngles(theta, phi)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1))
def test_conservation_identity(x, y):
    e2 = x / 2
    b2 = (1 - 2 * e2) * y
    d = C.discord_closed_form(dynamical_state(e2, b2))
    assert abs(d.I - d.J - d.Q) < 1e-9
    assert d.Q >= -1e-12 and d.J >= -1e-12


@pytest.mark.parametrize("p, q", [(0.3, 0.6), (0.5, 0.5), (0.9, 0.2)])
def test_product_diagonal_mutual_info_zero(p, q):
    s = TwoQubitXState(p * q, p * (1 - q), (1 - p) * q, (1 - p) * (1 - q))
    assert abs(C.mutual_information(s)) < 1e-12


def test_mutual_information_bell():
    s = dynamical_state(0.5, 0.0)
    assert marginal_entropies(s) == (1.0, 1.0)
    assert abs(C.mutual_information(s) - 2) < 1e-12


def test_coherence_exceeds_discord_not_universal():
    # at the Bell point discord (1) is larger than coherence (0.558)
    s = dynamical_state(0.5, 0.0)
    assert C.coherence_jsd(s) < C.discord_closed_form(s).Q


def test_correlation_sample_fields():
    s = dynamical_state(0.2, 0.1)
    cs = C.correlation_sample(0.5, 0.2, 0.1, 0.5, s, "exact", measure="qc")
    assert cs.discord is None and cs.coherence is not None and cs.valid
