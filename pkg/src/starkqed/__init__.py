"""Two Stark-shifted two-level atoms in a single-mode cavity.

Exact and reduced-model time evolution, the reduced two-atom X state, and
its coherence and discord along the trajectory.
"""

from .atomstate import TwoQubitXState, dynamical_state, reduce_to_atoms
from .correlations import coherence_closed_form, coherence_jsd, discord_bruteforce, discord_closed_form
from .model import SystemParams, dressed_coefficients, hamiltonian, initial_state
from .oracle import crosscheck, integrate
from .propagator import (
    evolve_exact,
    evolve_paper,
    population_arrays,
    populations_exact,
    populations_paper,
    spectral_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "SystemParams",
    "TwoQubitXState",
    "coherence_closed_form",
    "coherence_jsd",
    "crosscheck",
    "discord_bruteforce",
    "discord_closed_form",
    "dressed_coefficients",
    "dynamical_state",
    "evolve_exact",
    "evolve_paper",
    "hamiltonian",
    "initial_state",
    "integrate",
    "population_arrays",
    "populations_exact",
    "populations_paper",
    "reduce_to_atoms",
    "spectral_decomposition",
]
