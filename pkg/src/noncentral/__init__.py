"""Bound states of the non-central (ring-shaped Coulomb) potential.

Closed-form Nikiforov-Uvarov solutions plus finite-difference and
quadrature oracles that check them.
"""

from .closed_form import (
    AngularSolution,
    BoundState,
    QuantumNumbers,
    angular_norm_const,
    angular_wavefunction,
    azimuthal_wavefunction,
    effective_l,
    full_wavefunction,
    hartmann_angular,
    hartmann_energy,
    radial_wavefunction,
    total_energy,
)
from .model import (
    ATOMIC,
    HartmannParams,
    NonCentralParams,
    ReducedCouplings,
    UnitsSystem,
    eval_potential,
    hartmann_to_noncentral,
    reduce,
)

__all__ = [
    "ATOMIC",
    "AngularSolution",
    "BoundState",
    "HartmannParams",
    "NonCentralParams",
    "QuantumNumbers",
    "ReducedCouplings",
    "UnitsSystem",
    "angular_norm_const",
    "angular_wavefunction",
    "azimuthal_wavefunction",
    "effective_l",
    "eval_potential",
    "full_wavefunction",
    "hartmann_angular",
    "hartmann_energy",
    "hartmann_to_noncentral",
    "radial_wavefunction",
    "reduce",
    "total_energy",
]
