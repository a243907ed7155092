"""Coherence and correlation measures of two-qubit X states.

Coherence is the square root of the quantum Jensen-Shannon divergence
between a state and its dephased version.  Discord follows the usual split
Q = I - J, with J optimised over projective measurements on atom B.
Every closed form here has an independent numerical counterpart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .atomstate import (
    TwoQubitXState,
    binary_entropy,
    marginal_entropies,
    matrix_entropy,
    xstate_eigenvalues,
)

LOG2_3 = math.log2(3)


@dataclass(frozen=True)
class MeasurementAngles:
    theta: float
    phi: float

    def __post_init__(self):
        if not 0 <= self.theta <= math.pi / 2 + 1e-15:
            raise ValueError("theta must lie in [0, pi/2]")
        if not 0 <= self.phi < 2 * math.pi:
            raise ValueError("phi must lie in [0, 2 pi)")


@dataclass(frozen=True)
class DiscordResult:
    Q: float
    Q1: float
    Q2: float
    J: float
    zeta1: float
    zeta2: float
    I: float

    @property
    def branch(self) -> int:
        """0 if the theta = pi/2 measurement wins, 1 for theta = 0."""
        return int(self.Q2 < self.Q1)


@dataclass(frozen=True)
class CorrelationSample:
    t: float
    e2: float
    b2: float
    a2: float
    coherence: float | None
    discord: float | None
    classical: float | None
    mutual_info: float | None
    backend: str
    valid: bool


# ------------------------------------------------------------------ coherence


def jsd(rho, sigma) -> float:
    """Quantum Jensen-Shannon divergence in bits."""
    mix = 0.5 * (np.asarray(rho) + np.asarray(sigma))
    return matrix_entropy(mix) - 0.5 * (matrix_entropy(rho) + matrix_entropy(sigma))


def coherence_jsd(s: TwoQubitXState) -> float:
    """sqrt(JSD(rho, rho_diag)) from dense eigen-decompositions."""
    rho = s.matrix()
    value = jsd(rho, np.diag(np.diag(rho)))
    return math.sqrt(max(value, 0.0))


def coherence_closed_form(e2: float) -> float:
    """Coherence of the dynamical state diag(a2, e2, e2, b2) with inner coherence e2."""
    if not -1e-12 <= e2 <= 0.5 + 1e-12:
        raise ValueError(f"e2={e2!r} outside [0, 1/2]")
    return math.sqrt(3 * max(e2, 0.0) * (1 - LOG2_3 / 2))


# ------------------------------------------------------------------ discord


def _xlogx_sum(values) -> float:
    v = np.asarray(values, dtype=float)
    v = v[v > 0]
    return float(np.sum(v * np.log2(v)))


def mutual_information(s: TwoQubitXState) -> float:
    sa, sb = marginal_entropies(s)
    return sa + sb + _xlogx_sum(xstate_eigenvalues(s))


def conditional_entropy_minima(s: TwoQubitXState) -> tuple[float, float]:
    """(zeta1, zeta2): conditional entropies at theta = pi/2 (best phi) and theta = 0."""
    z = 1 - 2 * (s.r33 + s.r44)
    c = abs(s.r14) + abs(s.r23)
    arg = 0.5 * (1 + math.sqrt(z * z + 4 * c * c))
    zeta1 = binary_entropy(min(arg, 1.0))
    zeta2 = -_xlogx_sum(s.diagonal) - binary_entropy(s.r11 + s.r33)
    return zeta1, zeta2


def discord_closed_form(s: TwoQubitXState) -> DiscordResult:
    eta_term = _xlogx_sum(xstate_eigenvalues(s))
    zeta1, zeta2 = conditional_entropy_minima(s)
    h_a = binary_entropy(s.r11 + s.r22)
    h_b = binary_entropy(s.r11 + s.r33)
    J1, J2 = h_a - zeta1, h_a - zeta2
    Q1 = h_b + eta_term + zeta1
    Q2 = h_b + eta_term + zeta2
    I = h_a + h_b + eta_term
    return DiscordResult(Q=min(Q1, Q2), Q1=Q1, Q2=Q2, J=max(J1, J2), zeta1=zeta1, zeta2=zeta2, I=I)


def discord_dynamical_printed(e2: float, b2: float) -> tuple[float, float]:
    """(Q1, Q2) for the dynamical state written in e2 and b2 as printed.

    The printed Q1 carries -2 e2 log2(2 e2) where the generic X-state form
    gives +2 e2 log2(2 e2); :func:`discord_closed_form` is authoritative.
    """
    a2 = 1 - 2 * e2 - b2
    arg = 0.5 * (1 + math.sqrt((1 - 2 * e2 - 2 * b2) ** 2 + 4 * e2**2))
    Q1 = (
        binary_entropy(1 - e2 - b2)
        + _xlogx_sum([a2])
        + _xlogx_sum([b2])
        - _xlogx_sum([2 * e2])
        + binary_entropy(min(arg, 1.0))
    )
    return Q1, 2 * e2


def measurement_outcomes(s: TwoQubitXState, theta, phi):
    """Outcome probabilities p_j and Bloch-length terms upsilon_j for projectors on B.

    Broadcasts over ``theta`` and ``phi``; returns ([p1, p2], [u1, u2]) with each
    array shaped like the broadcast angle grid.  The sine form of the
    transverse term means the measurement axis has Bloch azimuth
    ``phi + pi/4``; minima over phi are unaffected.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    cos_t = np.cos(theta)
    sin2 = np.sin(theta) ** 2
    m14, m23 = abs(s.r14), abs(s.r23)
    cross = m14**2 + m23**2 - 2 * m14 * m23 * np.sin(2 * phi + s.phase)
    p, ups = [], []
    for j in (1, 2):
        sign = (-1) ** j
        p.append(0.5 * (1 + sign * cos_t * (1 - 2 * s.r11 - 2 * s.r33)))
        ups.append(0.25 * (1 - 2 * (s.r33 + s.r44) + sign * cos_t * (1 - 2 * s.r11 - 2 * s.r44)) ** 2 + sin2 * cross)
    shape = np.broadcast_shapes(theta.shape, phi.shape)
    return [np.broadcast_to(v, shape) for v in p], [np.broadcast_to(v, shape) for v in ups]


def _h_array(x):
    x = np.clip(x, 0.0, 1.0)
    out = np.zeros_like(x)
    m = (x > 0) & (x < 1)
    xm = x[m]
    out[m] = -xm * np.log2(xm) - (1 - xm) * np.log2(1 - xm)
    return out


def conditional_entropy(s: TwoQubitXState, theta, phi):
    """sum_j p_j S(rho_{A|j}) on a grid of measurement angles."""
    (p1, p2), (u1, u2) = measurement_outcomes(s, theta, phi)
    total = np.zeros(np.shape(p1))
    for p, u in ((p1, u1), (p2, u2)):
        safe = np.where(p > 1e-300, p, 1.0)
        eta_plus = 0.5 * (1 + np.sqrt(np.maximum(u, 0.0)) / safe)
        total += np.where(p > 1e-300, p * _h_array(eta_plus), 0.0)
    return total


@dataclass(frozen=True)
class BruteForceDiscord:
    Q: float
    J: float
    angles: MeasurementAngles
    theta_step: float
    phi_step: float


def measurement_grid(theta_steps: int, phi_steps: int):
    """theta over [0, pi/2] inclusive, phi over [0, 2 pi) exclusive."""
    if theta_steps < 9 or phi_steps < 9:
        raise ValueError("need at least 9 grid steps per angle")
    theta = np.linspace(0.0, math.pi / 2, theta_steps)
    phi = np.arange(phi_steps) * (2 * math.pi / phi_steps)
    return theta, phi


def discord_bruteforce(s: TwoQubitXState, theta_steps: int = 361, phi_steps: int = 721) -> BruteForceDiscord:
    """Discord by minimising the conditional entropy on an angle grid.

    Ties resolve to the lowest (theta, phi) index.
    """
    theta, phi = measurement_grid(theta_steps, phi_steps)
    cond = conditional_entropy(s, theta[:, None], phi[None, :])
    flat = int(np.argmin(cond))
    i, j = np.unravel_index(flat, cond.shape)
    h_a, _ = marginal_entropies(s)
    J = h_a - float(cond[i, j])
    Q = mutual_information(s) - J
    return BruteForceDiscord(
        Q=Q,
        J=J,
        angles=MeasurementAngles(float(theta[i]), float(phi[j])),
        theta_step=float(theta[1] - theta[0]),
        phi_step=float(phi[1] - phi[0]),
    )


def correlation_sample(t, e2, b2, a2, state, backend, measure="both") -> CorrelationSample:
    coherence = discord = classical = mutual = None
    if measure in ("qc", "both"):
        coherence = coherence_jsd(state)
    if measure in ("qd", "both"):
        d = discord_closed_form(state)
        discord, classical, mutual = d.Q, d.J, d.I
    return CorrelationSample(t, e2, b2, a2, coherence, discord, classical, mutual, backend, True)
