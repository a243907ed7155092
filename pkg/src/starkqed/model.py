"""Physical parameters and dressed coefficients of the two-atom Stark-shifted cavity.

The dynamics starting from |e1 e2, n> never leave the four-dimensional
subspace spanned by

    |e1 e2, n>, |e1 g2, n+1>, |g1 e2, n+1>, |g1 g2, n+2>

so the atomic and field operators are never built explicitly; everything
downstream works with the 4x4 coefficient matrix returned by
:func:`exact_hamiltonian_matrix`.  Units: hbar = 1, frequencies are
dimensionless multiples of the atom-field coupling.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SystemParams:
    """One simulation point.

    ``alpha`` is only consulted when mixing over a coherent field
    (see :func:`starkqed.atomstate.reduce_coherent_mix`).
    """

    wz: float = 0.0
    wc: float = 0.0
    gamma1: float = 1.0
    gamma2: float = 2.0
    lambda1: float = 1.0
    lambda2: float = 1.0
    n: int = 0
    alpha: complex = 0.0

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 0:
            raise ValueError(f"n must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        for name in ("wz", "wc", "gamma1", "gamma2", "lambda1", "lambda2"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if not np.isfinite(complex(self.alpha)):
            raise ValueError(f"alpha must be finite, got {self.alpha!r}")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ValueError("couplings lambda1, lambda2 must be non-negative")
        if self.lambda1 == 0 and self.lambda2 == 0:
            warnings.warn("zero atom-field coupling: dynamics are trivial", stacklevel=3)

    @property
    def stark(self) -> float:
        """Summed Stark-shift strength gamma1 + gamma2."""
        return self.gamma1 + self.gamma2

    def replace(self, **changes) -> "SystemParams":
        fields = {k: getattr(self, k) for k in self.__dataclass_fields__}
        fields.update(changes)
        return SystemParams(**fields)


@dataclass(frozen=True)
class DressedCoefficients:
    xi1: float
    xi2: float
    xi3: float
    xi4: float
    f1: float
    f2: float
    delta: float
    F: float


@dataclass(frozen=True)
class AmplitudeVector:
    """Amplitudes of |e1e2,n>, |e1g2,n+1>, |g1e2,n+1>, |g1g2,n+2>."""

    a: complex
    c: complex
    d: complex
    b: complex

    @classmethod
    def from_array(cls, values) -> "AmplitudeVector":
        a, c, d, b = (complex(v) for v in values)
        return cls(a, c, d, b)

    def to_array(self) -> np.ndarray:
        return np.array([self.a, self.c, self.d, self.b], dtype=complex)

    def norm2(self) -> float:
        return abs(self.a) ** 2 + abs(self.c) ** 2 + abs(self.d) ** 2 + abs(self.b) ** 2


@dataclass(frozen=True)
class SymmetricAmplitudes:
    """Amplitudes of the reduced problem where c = d = e."""

    a: complex
    e: complex
    b: complex

    def weighted_norm2(self) -> float:
        return abs(self.a) ** 2 + 2 * abs(self.e) ** 2 + abs(self.b) ** 2


def dressed_coefficients(params: SystemParams) -> DressedCoefficients:
    """Diagonal frequencies, couplings and the auxiliary scalars delta and F.

    Examples
    --------
    >>> c = dressed_coefficients(SystemParams(0, 0, 0, 0, 1, 1, 0))
    >>> (c.xi1, c.f1, c.delta, c.F)
    (0.0, 1.0, 8.0, 0.0)
    """
    wz, wc, n = params.wz, params.wc, params.n
    g = params.stark
    l1, l2 = params.lambda1, params.lambda2
    root = math.sqrt(n + 1)

    xi1 = wz + wc * n + g * (2 + n)
    xi2 = wc * (n + 1)
    xi4 = -wz + wc * (n + 2) - g * (n + 4)
    delta = (wz - wc + g * (n + 2)) ** 2 + 4 * l2 * (l1 + l2) * (n + 1)
    F = 3 * (wz - wc) + g * (3 * n + 10)
    return DressedCoefficients(
        xi1=float(xi1),
        xi2=float(xi2),
        xi3=float(xi2),
        xi4=float(xi4),
        f1=l2 * root,
        f2=l1 * root,
        delta=float(delta),
        F=float(F),
    )


def exact_hamiltonian_matrix(coeffs: DressedCoefficients, n: int) -> np.ndarray:
    """Real symmetric generator of the amplitude equations, rows ordered (a, c, d, b).

    The b-row couplings lambda1*sqrt(n+2), lambda2*sqrt(n+2) are recovered
    from f2 and f1 by rescaling sqrt(n+1) -> sqrt(n+2).
    """
    scale = math.sqrt((n + 2) / (n + 1))
    g1 = coeffs.f2 * scale
    g2 = coeffs.f1 * scale
    return np.array(
        [
            [coeffs.xi1, coeffs.f1, coeffs.f2, 0.0],
            [coeffs.f1, coeffs.xi2, 0.0, g1],
            [coeffs.f2, 0.0, coeffs.xi3, g2],
            [0.0, g1, g2, coeffs.xi4],
        ],
        dtype=float,
    )


def hamiltonian(params: SystemParams) -> np.ndarray:
    """Shortcut for ``exact_hamiltonian_matrix`` straight from parameters."""
    return exact_hamiltonian_matrix(dressed_coefficients(params), params.n)


def initial_state() -> AmplitudeVector:
    """Both atoms excited: a(0) = 1, c(0) = d(0) = b(0) = 0."""
    return AmplitudeVector(1.0 + 0j, 0j, 0j, 0j)
