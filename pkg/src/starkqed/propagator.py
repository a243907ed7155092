"""Time evolution of the amplitudes.

Two backends are kept strictly apart:

``exact``
    Spectral solution of the full 4x4 amplitude equations.  Norm preserving,
    used as ground truth.
``paper``
    The symmetric (c = d) closed forms: eigenvalues chi_j, mode weights k_j
    and mode-sum amplitudes.  The reduced 3x3 problem these come from is not
    the exact c = d reduction, so this backend does not conserve
    |a|^2 + 2|e|^2 + |b|^2.  It is evaluated as printed, never patched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .model import (
    AmplitudeVector,
    DressedCoefficients,
    SymmetricAmplitudes,
    SystemParams,
    dressed_coefficients,
    exact_hamiltonian_matrix,
)

DEGENERACY_RTOL = 1e-9
POPULATION_TOL = 1e-12

BACKENDS = ("exact", "paper")


class DegeneracyError(ValueError):
    """The paper backend's mode weights have vanishing denominators; use ``evolve_exact``."""


class EigensolverError(RuntimeError):
    def __init__(self, message, matrix):
        super().__init__(f"{message}\nmatrix:\n{matrix!r}")
        self.matrix = matrix


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues and mode weights of either backend.

    For the exact backend ``weights`` holds the eigenvector matrix V (columns);
    for the paper backend it holds (k1, k2, k3).
    """

    eigenvalues: np.ndarray
    weights: np.ndarray
    backend: str = "exact"


@dataclass(frozen=True)
class Populations:
    e2: float
    b2: float
    a2: float
    violations: tuple = field(default=())

    @property
    def valid(self) -> bool:
        return not self.violations

    @classmethod
    def checked(cls, e2: float, b2: float, a2: float, tol: float = POPULATION_TOL) -> "Populations":
        """Build populations, recording (not clamping) any out-of-range entry."""
        bad = []
        if not (-tol <= e2 <= 0.5 + tol):
            bad.append(f"e2={e2!r} outside [0, 1/2]")
        if not (-tol <= b2 <= 1 + tol):
            bad.append(f"b2={b2!r} outside [0, 1]")
        if not (-tol <= a2 <= 1 + tol):
            bad.append(f"a2={a2!r} outside [0, 1]")
        if not all(map(math.isfinite, (e2, b2, a2))):
            bad.append("non-finite population")
        return cls(float(e2), float(b2), float(a2), tuple(bad))


# ---------------------------------------------------------------- exact backend


def spectral_decomposition(params: SystemParams) -> SpectralDecomposition:
    return _exact_decomposition(params)


@lru_cache(maxsize=256)
def _exact_decomposition(params: SystemParams) -> SpectralDecomposition:
    H = exact_hamiltonian_matrix(dressed_coefficients(params), params.n)
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigh failed: {exc}", H) from exc
    scale = max(np.linalg.norm(H), 1.0)
    residual = np.linalg.norm(H - (V * w) @ V.T)
    orth = np.linalg.norm(V.T @ V - np.eye(4))
    if residual > 1e-10 * scale or orth > 1e-10:
        raise EigensolverError(f"reconstruction residual {residual:.3e}, orthogonality {orth:.3e}", H)
    w.setflags(write=False)
    V.setflags(write=False)
    return SpectralDecomposition(w, V, "exact")


def amplitudes_exact(params: SystemParams, times) -> np.ndarray:
    """Amplitudes (a, c, d, b) on a time grid, shape ``(len(times), 4)``.

    psi(t) = V exp(-i Lambda t) V^T psi(0) with psi(0) = (1, 0, 0, 0).
    """
    dec = _exact_decomposition(params)
    t = np.atleast_1d(np.asarray(times, dtype=float))
    V = dec.weights
    phases = np.exp(-1j * np.outer(t, dec.eigenvalues))
    return (phases * V[0]) @ V.T


def evolve_exact(params: SystemParams, t: float) -> AmplitudeVector:
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t!r}")
    return AmplitudeVector.from_array(amplitudes_exact(params, [t])[0])


def populations_exact(params: SystemParams, t: float) -> Populations:
    (e2,), (b2,), (a2,) = _exact_population_arrays(params, [t])
    return Populations.checked(e2, b2, a2)


def _exact_population_arrays(params, times):
    psi = amplitudes_exact(params, times)
    p = np.abs(psi) ** 2
    e2 = 0.5 * (p[:, 1] + p[:, 2])
    return e2, p[:, 3], p[:, 0]


def quartic_coefficients(coeffs: DressedCoefficients, n: int) -> dict:
    """Characteristic polynomial of the exact matrix next to the printed one.

    Returns a mapping with ``canonical`` = (chi0, chi1, chi2, chi3) such that
    det(M I - H) = M^4 + chi3 M^3 + chi2 M^2 + chi1 M + chi0, computed from
    power traces (Newton identities), and ``printed`` with the published
    closed-form coefficients evaluated verbatim.
    """
    H = exact_hamiltonian_matrix(coeffs, n)
    H2 = H @ H
    H3 = H2 @ H
    p1, p2, p3, p4 = np.trace(H), np.trace(H2), np.trace(H3), np.trace(H3 @ H)
    e1 = p1
    e2 = (e1 * p1 - p2) / 2
    e3 = (e2 * p1 - e1 * p2 + p3) / 3
    e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4
    canonical = (float(e4), float(-e3), float(e2), float(-e1))
    return {"canonical": canonical, "printed": printed_quartic_coefficients(coeffs)}


def printed_quartic_coefficients(coeffs: DressedCoefficients) -> tuple:
    x1, x2, x3 = coeffs.xi1, coeffs.xi2, coeffs.xi3
    f1, f2 = coeffs.f1, coeffs.f2
    chi3 = -x1 - 2 * x2 - x3
    chi2 = 2 * x2 * x3 + x1 * x3 + 2 * x1 * x2 + x2**2 - 2 * f1**2 - 2 * f2**2
    chi1 = (
        f1**2 * x1 + f2**2 * x3 + 2 * f1**2 * x2 + 2 * f2**2 * x2 - x1 * x2**2
        + f1**2 * x3 + f2**2 * x3 - 2 * x1 * x2 * x3 - x2**2 * x3
    )
    chi0 = (
        f1**4 - 2 * f1**2 * f2**2 + f2**4 - f1**4 * x1 * x2 - f2**2 * x1 * x2
        - f1**2 * x2 * x3 - f2**2 * x2 * x3 + x1 * x2**2 * x3
    )
    return (chi0, chi1, chi2, chi3)


def characteristic_polynomial(chis, M):
    chi0, chi1, chi2, chi3 = chis
    return M**4 + chi3 * M**3 + chi2 * M**2 + chi1 * M + chi0


# ---------------------------------------------------------------- paper backend


def paper_eigenvalues(coeffs: DressedCoefficients) -> np.ndarray:
    """chi_{1,2} = (xi1 + xi2 -/+ sqrt(delta)) / 2, chi_3 = xi4."""
    if coeffs.delta < 0:
        raise ValueError(f"delta must be non-negative, got {coeffs.delta!r}")
    root = math.sqrt(coeffs.delta)
    s = coeffs.xi1 + coeffs.xi2
    return np.array([0.5 * (s - root), 0.5 * (s + root), coeffs.xi4])


def paper_eigenvalues_expanded(params: SystemParams) -> np.ndarray:
    """Same eigenvalues written directly in wz, wc, gamma and n."""
    c = dressed_coefficients(params)
    n, g = params.n, params.stark
    s = params.wz + params.wc * (2 * n + 1) + g * (n + 2)
    root = math.sqrt(c.delta)
    chi3 = -params.wz + params.wc * (n + 2) - g * (n + 4)
    return np.array([0.5 * (s - root), 0.5 * (s + root), chi3])


def _check_nondegenerate(coeffs: DressedCoefficients):
    if coeffs.f1 == 0:
        raise DegeneracyError("lambda2 = 0 leaves the paper weights undefined; use the exact backend (evolve_exact)")
    d, F = coeffs.delta, coeffs.F
    root = math.sqrt(max(d, 0.0))
    scale = max(d, F * F, abs(F) * root, 1e-300)
    for label, value in (
        ("delta", d),
        ("F^2 - delta", F * F - d),
        ("delta - F sqrt(delta)", d - F * root),
        ("delta + F sqrt(delta)", d + F * root),
    ):
        if abs(value) <= DEGENERACY_RTOL * scale:
            raise DegeneracyError(
                f"degenerate spectrum ({label} = {value:.3e}); use the exact backend (evolve_exact)"
            )


def printed_weights(coeffs: DressedCoefficients) -> np.ndarray:
    """k_j from the printed rational expressions (f1(f1+f2) = lambda2(lambda1+lambda2)(n+1))."""
    _check_nondegenerate(coeffs)
    P = coeffs.f1 * (coeffs.f1 + coeffs.f2)
    d, F = coeffs.delta, coeffs.F
    root = math.sqrt(d)
    return np.array([2 * P / (d - F * root), 2 * P / (d + F * root), 4 * P / (F * F - d)])


def weight_conditions(k, chi, coeffs: DressedCoefficients) -> np.ndarray:
    """Residuals of sum k = 0, sum k chi = 0, sum k chi^2 = f1 (f1 + f2)."""
    k = np.asarray(k)
    chi = np.asarray(chi)
    return np.array([k.sum(), k @ chi, k @ chi**2 - coeffs.f1 * (coeffs.f1 + coeffs.f2)])


@dataclass(frozen=True)
class PaperWeights:
    k: np.ndarray
    printed: np.ndarray
    chi: np.ndarray
    residual: np.ndarray
    printed_residual: np.ndarray

    @property
    def printed_deviation(self) -> float:
        """Max relative gap between printed and solved weights."""
        return float(np.max(np.abs(self.printed - self.k)) / max(np.max(np.abs(self.k)), 1e-300))


def paper_weights(coeffs: DressedCoefficients) -> PaperWeights:
    """Solve the three weight conditions and evaluate the printed k's alongside."""
    printed = printed_weights(coeffs)
    chi = paper_eigenvalues(coeffs)
    A = np.vander(chi, 3, increasing=True).T
    rhs = np.array([0.0, 0.0, coeffs.f1 * (coeffs.f1 + coeffs.f2)])
    k = np.linalg.solve(A, rhs)
    return PaperWeights(
        k=k,
        printed=printed,
        chi=chi,
        residual=weight_conditions(k, chi, coeffs),
        printed_residual=weight_conditions(printed, chi, coeffs),
    )


def paper_decomposition(params: SystemParams) -> SpectralDecomposition:
    return _paper_decomposition(params)


@lru_cache(maxsize=256)
def _paper_decomposition(params: SystemParams) -> SpectralDecomposition:
    pw = paper_weights(dressed_coefficients(params))
    return SpectralDecomposition(pw.chi, pw.k, "paper")


def amplitudes_paper(params: SystemParams, times, sign: int = -1) -> np.ndarray:
    """Mode-sum amplitudes (a, e, b) on a time grid, shape ``(len(times), 3)``.

    ``sign`` selects the phase exp(sign * i chi t).  The default -1 is the
    Schrodinger convention; +1 gives the complex-conjugate amplitudes.
    Populations do not depend on it.
    """
    coeffs = dressed_coefficients(params)
    dec = _paper_decomposition(params)
    chi, k = dec.eigenvalues, dec.weights
    f1, f2, xi2, xi4 = coeffs.f1, coeffs.f2, coeffs.xi2, coeffs.xi4
    t = np.atleast_1d(np.asarray(times, dtype=float))
    modes = np.exp(sign * 1j * np.outer(t, chi)) * k
    b = modes.sum(axis=1)
    e = -(modes @ (chi + xi4)) / (f1 + f2)
    a = (modes @ ((chi + xi4) * (chi + xi2) - f2 * (f1 + f2))) / (f1 * (f1 + f2))
    return np.column_stack([a, e, b])


def evolve_paper(params: SystemParams, t: float, sign: int = -1) -> SymmetricAmplitudes:
    a, e, b = amplitudes_paper(params, [t], sign)[0]
    return SymmetricAmplitudes(complex(a), complex(e), complex(b))


def _paper_population_arrays(params, times):
    amps = amplitudes_paper(params, times)
    e2 = np.abs(amps[:, 1]) ** 2
    b2 = np.abs(amps[:, 2]) ** 2
    return e2, b2, 1 - 2 * e2 - b2


def populations_paper_modesum(params: SystemParams, t: float) -> Populations:
    """Paper-backend populations from the mode sums; a2 by normalisation."""
    (e2,), (b2,), (a2,) = _paper_population_arrays(params, [t])
    return Populations.checked(e2, b2, a2)


def closed_form_population_arrays(params: SystemParams, times):
    """The printed |e(t)|^2 and |b(t)|^2 formulas evaluated verbatim."""
    c = dressed_coefficients(params)
    _check_nondegenerate(c)
    n, g, wz, wc = params.n, params.stark, params.wz, params.wc
    l1, l2 = params.lambda1, params.lambda2
    d, F = c.delta, c.F
    root = math.sqrt(d)
    X = -wz + wc * (4 * n + 5) - g * (n + 6)
    Y = -wz + wc * (n + 2) - g * (n + 4)
    t = np.atleast_1d(np.asarray(times, dtype=float))
    pref = l2**2 * (n + 1)

    const = sum((X - s * root) / (d - s * F * root) ** 2 for s in (1, -1)) + 64 * Y**2 / (F * F - d) ** 2
    e2 = pref * const + 2 * pref * np.cos(root * t) / (d * d - F * d) * (X * X - d)
    for s in (1, -1):
        e2 = e2 + 16 * pref * np.cos((F - s * root) / 2 * t) / ((F * F - d) * (d - s * F * root)) * (
            Y * (X - s * root)
        )

    bpref = 8 * l2**2 * (l1 + l2) ** 2 * (n + 1) ** 2 / (d - F * F)
    bracket = (3 * d + F * F) / (d * (d - F * F)) + np.cos(root * t) / d
    for s in (1, -1):
        bracket = bracket - np.cos((F - s * root) / 2 * t) / (d - s * F * root)
    b2 = bpref * bracket
    return e2, b2, 1 - 2 * e2 - b2


def populations_paper(params: SystemParams, t: float) -> Populations:
    """Printed closed-form populations at one time, out-of-range values flagged."""
    (e2,), (b2,), (a2,) = closed_form_population_arrays(params, [t])
    return Populations.checked(e2, b2, a2)


def paper_frequencies(coeffs: DressedCoefficients) -> np.ndarray:
    """Angular frequencies present in the paper-backend populations."""
    root = math.sqrt(coeffs.delta)
    return np.array([root, (coeffs.F - root) / 2, (coeffs.F + root) / 2])


def population_arrays(params: SystemParams, times, backend: str):
    """(e2, b2, a2) arrays for ``backend`` in {"exact", "paper"}."""
    if backend == "exact":
        return _exact_population_arrays(params, times)
    if backend == "paper":
        return _paper_population_arrays(params, times)
    raise ValueError(f"unknown backend {backend!r}")
