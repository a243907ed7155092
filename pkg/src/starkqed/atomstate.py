"""Reduced two-atom density matrices of X form, and entropy helpers.

Basis order is (|e1 e2>, |e1 g2>, |g1 e2>, |g1 g2>).  Entropies are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .model import AmplitudeVector, SystemParams
from .propagator import Populations, population_arrays

EIG_TOL = 1e-12


class InvalidPopulationError(ValueError):
    pass


class InvalidSpectrumError(ValueError):
    pass


class TruncationError(ValueError):
    pass


@dataclass(frozen=True)
class TwoQubitXState:
    r11: float
    r22: float
    r33: float
    r44: float
    r23: complex = 0j
    r14: complex = 0j

    def __post_init__(self):
        trace = self.r11 + self.r22 + self.r33 + self.r44
        if abs(trace - 1) > 1e-10:
            raise InvalidPopulationError(f"trace {trace!r} differs from 1")
        if min(self.r11, self.r22, self.r33, self.r44) < -EIG_TOL:
            raise InvalidPopulationError("negative diagonal entry")
        if abs(self.r23) ** 2 > self.r22 * self.r33 + EIG_TOL or abs(self.r14) ** 2 > self.r11 * self.r44 + EIG_TOL:
            raise InvalidPopulationError("coherences violate positivity")

    @property
    def phase(self) -> float:
        """Relative phase arg(r14 * conj(r23)), 0 when either coherence vanishes."""
        z = self.r14 * np.conj(self.r23)
        return float(np.angle(z)) if z != 0 else 0.0

    @property
    def diagonal(self) -> np.ndarray:
        return np.array([self.r11, self.r22, self.r33, self.r44])

    def matrix(self) -> np.ndarray:
        rho = np.diag(self.diagonal).astype(complex)
        rho[1, 2] = self.r23
        rho[2, 1] = np.conj(self.r23)
        rho[0, 3] = self.r14
        rho[3, 0] = np.conj(self.r14)
        return rho

    def dephased(self) -> "TwoQubitXState":
        return TwoQubitXState(self.r11, self.r22, self.r33, self.r44)


def dynamical_state(e2: float, b2: float, a2: float | None = None) -> TwoQubitXState:
    """diag(a2, e2, e2, b2) with inner coherence e2; a2 defaults to 1 - 2 e2 - b2."""
    if a2 is None:
        a2 = 1 - 2 * e2 - b2
    return reduce_to_atoms(Populations.checked(e2, b2, a2))


def reduce_to_atoms(pops: Populations) -> TwoQubitXState:
    """Reduced atomic state after tracing out the cavity, from the population triple."""
    if not pops.valid:
        raise InvalidPopulationError("; ".join(pops.violations))
    e2 = min(max(pops.e2, 0.0), 0.5)
    b2 = max(pops.b2, 0.0)
    a2 = max(pops.a2, 0.0)
    return TwoQubitXState(a2, e2, e2, b2, r23=e2, r14=0j)


def reduce_amplitudes(psi: AmplitudeVector) -> TwoQubitXState:
    """Reduced state keeping c and d separate (exact backend, unequal couplings)."""
    return TwoQubitXState(
        abs(psi.a) ** 2,
        abs(psi.c) ** 2,
        abs(psi.d) ** 2,
        abs(psi.b) ** 2,
        r23=complex(psi.c * np.conj(psi.d)),
    )


def poisson_weights(mean: float, n_max: int, tail_tol: float = 1e-10) -> np.ndarray:
    """P_n for n = 0..n_max; raises if the discarded tail exceeds ``tail_tol``."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if mean == 0:
        w = np.zeros(n_max + 1)
        w[0] = 1.0
        return w
    tail = stats.poisson.sf(n_max, mean)
    if tail >= tail_tol:
        raise TruncationError(f"Poisson tail beyond n_max={n_max} is {tail:.3e} (>= {tail_tol:g})")
    return stats.poisson.pmf(np.arange(n_max + 1), mean)


def reduce_coherent_mix(params: SystemParams, t: float, n_max: int, backend: str = "exact") -> TwoQubitXState:
    """Poisson-weighted mixture over Fock sectors n = 0..n_max for a coherent field of amplitude ``params.alpha``."""
    return coherent_mix_states(params, [t], n_max, backend)[0]


def coherent_mix_populations(params: SystemParams, times, n_max: int, backend: str):
    """Mixture (e2, b2, a2) arrays on a time grid.

    Each Fock sector must itself be physical; the first invalid sample
    raises :class:`InvalidPopulationError`.
    """
    w = poisson_weights(abs(complex(params.alpha)) ** 2, n_max)
    w = w / w.sum()
    t = np.atleast_1d(np.asarray(times, dtype=float))
    total = np.zeros((3, t.size))
    for n, weight in enumerate(w):
        if weight == 0:
            continue
        e2, b2, a2 = population_arrays(params.replace(n=n), t, backend)
        for i in range(t.size):
            pops = Populations.checked(e2[i], b2[i], a2[i])
            if not pops.valid:
                raise InvalidPopulationError(f"sector n={n}, t={t[i]!r}: " + "; ".join(pops.violations))
        total += weight * np.vstack([e2, b2, a2])
    return total[0], total[1], total[2]


def coherent_mix_states(params, times, n_max, backend="exact"):
    e2, b2, a2 = coherent_mix_populations(params, times, n_max, backend)
    return [reduce_to_atoms(Populations.checked(*v)) for v in zip(e2, b2, a2)]


def xstate_eigenvalues(s: TwoQubitXState) -> np.ndarray:
    """Closed-form eigenvalues of an X state, sorted descending."""
    outer = math.sqrt((s.r11 - s.r44) ** 2 + 4 * abs(s.r14) ** 2)
    inner = math.sqrt((s.r22 - s.r33) ** 2 + 4 * abs(s.r23) ** 2)
    eta = np.array(
        [
            0.5 * (s.r11 + s.r44 + outer),
            0.5 * (s.r11 + s.r44 - outer),
            0.5 * (s.r22 + s.r33 + inner),
            0.5 * (s.r22 + s.r33 - inner),
        ]
    )
    return np.sort(eta)[::-1]


def von_neumann_entropy(spectrum) -> float:
    """Entropy in bits of an eigenvalue (or probability) vector.

    Entries in [-1e-12, 0) are treated as zero; anything more negative is an
    error.  0 log 0 = 0.
    """
    p = np.asarray(spectrum, dtype=float).ravel()
    if np.any(p < -EIG_TOL):
        raise InvalidSpectrumError(f"negative eigenvalue {p.min()!r}")
    p = p[p > 0]
    return float(max(-np.sum(p * np.log2(p)), 0.0))


def matrix_entropy(rho) -> float:
    """Entropy of a Hermitian matrix via a dense eigensolver."""
    return von_neumann_entropy(np.linalg.eigvalsh(rho))


def binary_entropy(x: float) -> float:
    x = float(x)
    if not -EIG_TOL <= x <= 1 + EIG_TOL:
        raise ValueError(f"binary entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * math.log2(x) - (1 - x) * math.log2(1 - x))


def marginal_entropies(s: TwoQubitXState) -> tuple[float, float]:
    """(S_A, S_B): atom 1 is excited with probability r11 + r22, atom 2 with r11 + r33."""
    return binary_entropy(s.r11 + s.r22), binary_entropy(s.r11 + s.r33)
