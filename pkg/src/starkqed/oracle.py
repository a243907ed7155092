"""Brute-force integration of the amplitude equations.

An adaptive Dormand-Prince 5(4) integrator, written out here so that the
check does not share any code path with the spectral backend.  Output times
are hit exactly by clipping the step, which keeps runs bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    AmplitudeVector,
    DressedCoefficients,
    SystemParams,
    dressed_coefficients,
    exact_hamiltonian_matrix,
    initial_state,
)
from .propagator import amplitudes_exact, population_arrays

DEFAULT_TOL = 1e-10

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B_LOW = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B - _B_LOW


class IntegrationError(RuntimeError):
    def __init__(self, message, t):
        super().__init__(f"{message} at t={t!r}")
        self.t = t


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), 4), complex
    rtol: float
    atol: float
    steps: int = 0

    def state(self, i: int) -> AmplitudeVector:
        return AmplitudeVector.from_array(self.states[i])

    def norm_drift(self) -> np.ndarray:
        return np.abs(np.sum(np.abs(self.states) ** 2, axis=1) - 1)


def ode_rhs(coeffs: DressedCoefficients, n: int, psi) -> np.ndarray:
    """d psi/dt = -i H psi for the amplitude vector (a, c, d, b)."""
    if isinstance(psi, AmplitudeVector):
        psi = psi.to_array()
    H = exact_hamiltonian_matrix(coeffs, n)
    return -1j * (H @ np.asarray(psi, dtype=complex))


def integrate_linear(H, psi0, times, rtol=DEFAULT_TOL, atol=DEFAULT_TOL, max_steps=10_000_000):
    """Integrate i dpsi/dt = H psi, returning psi at each of ``times``.

    ``H`` may be a single (d, d) matrix or a batch (m, d, d) with ``psi0`` of
    shape (m, d); the step size is then shared across the batch.  ``times``
    must start at 0 and be strictly monotone (negative times run backwards).
    """
    H = np.asarray(H, dtype=complex)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1 or times[0] != 0:
        raise ValueError("times must be a 1-d grid starting at 0")
    direction = 1.0 if times.size < 2 or times[-1] > 0 else -1.0
    if times.size > 1 and np.any(direction * np.diff(times) <= 0):
        raise ValueError("times must be strictly monotone")

    G = -1j * H
    if G.ndim == 2:
        f = lambda y: G @ y  # noqa: E731
    else:
        f = lambda y: np.einsum("mij,mj->mi", G, y)  # noqa: E731

    y = np.array(psi0, dtype=complex)
    out = np.empty((times.size,) + y.shape, dtype=complex)
    out[0] = y
    scale_h = np.max(np.abs(H)) if H.size else 0.0
    h = 0.01 / max(scale_h, 1e-3)
    t = 0.0
    k = np.empty((7,) + y.shape, dtype=complex)
    k[0] = f(y)
    steps = 0
    for i, target in enumerate(times[1:], start=1):
        while direction * (target - t) > 0:
            remaining = abs(target - t)
            last = h >= remaining
            step = remaining if last else h
            if step < 1e-14 * max(1.0, abs(t)):
                raise IntegrationError("step size underflow", t)
            dt = direction * step
            for s in range(1, 7):
                acc = y.copy()
                for j, a in enumerate(_A[s]):
                    if a:
                        acc += dt * a * k[j]
                k[s] = f(acc)
            y_new = y + dt * np.tensordot(_B, k, axes=1)
            err = dt * np.tensordot(_E, k, axes=1)
            sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            ratio = float(np.max(np.abs(err / sc)))
            steps += 1
            if steps > max_steps:
                raise IntegrationError("step budget exhausted", t)
            if ratio <= 1.0:
                t = target if last else t + dt
                y = y_new
                k[0] = k[6]  # first-same-as-last
                factor = 5.0 if ratio == 0 else min(5.0, 0.9 * ratio ** -0.2)
                if not last:
                    h = step * factor
            else:
                h = step * max(0.2, 0.9 * ratio ** -0.2)
        out[i] = y
    return out, steps


def integrate(params: SystemParams, t_end: float, samples: int, tol: float = DEFAULT_TOL) -> Trajectory:
    """Integrate from the doubly excited state onto a uniform grid of ``samples`` points."""
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if samples < 2:
        raise ValueError("samples must be at least 2")
    if not 1e-13 <= tol <= 1e-6:
        raise ValueError("tol must lie in [1e-13, 1e-6]")
    H = exact_hamiltonian_matrix(dressed_coefficients(params), params.n)
    times = np.linspace(0.0, t_end, samples)
    states, steps = integrate_linear(H, initial_state().to_array(), times, tol, tol)
    return Trajectory(times, states, tol, tol, steps)


def integrate_many(points, t_end: float, samples: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Batch integration of several parameter points, shape (samples, len(points), 4)."""
    Hs = np.array([exact_hamiltonian_matrix(dressed_coefficients(p), p.n) for p in points])
    psi0 = np.tile(initial_state().to_array(), (len(points), 1))
    times = np.linspace(0.0, t_end, samples)
    states, _ = integrate_linear(Hs, psi0, times, tol, tol)
    return states


@dataclass
class CrosscheckReport:
    params: SystemParams
    max_amplitude_error: float
    max_population_error: float | None
    max_norm_drift: float
    note: str = ""


def crosscheck(params: SystemParams, t_end: float, grid: int, tol: float = DEFAULT_TOL) -> CrosscheckReport:
    """Compare spectral and ODE amplitudes, and paper vs exact populations, on one grid."""
    traj = integrate(params, t_end, grid, tol)
    exact = amplitudes_exact(params, traj.times)
    amp_err = float(np.max(np.abs(exact - traj.states)))
    note = ""
    try:
        pe = population_arrays(params, traj.times, "paper")
        xe = population_arrays(params, traj.times, "exact")
        pop_err = float(max(np.max(np.abs(p - x)) for p, x in zip(pe, xe)))
    except ValueError as exc:  # DegeneracyError is a ValueError
        pop_err = None
        note = str(exc)
    return CrosscheckReport(params, amp_err, pop_err, float(traj.norm_drift().max()), note)


__all__ = [
    "IntegrationError",
    "Trajectory",
    "ode_rhs",
    "integrate",
    "integrate_linear",
    "integrate_many",
    "crosscheck",
    "CrosscheckReport",
]
