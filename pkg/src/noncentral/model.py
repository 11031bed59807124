"""Units, potential parameters and potential evaluation.

The non-central potential is

    V(r, theta) = alpha / r + beta / (r^2 sin^2 theta) + gamma cos(theta) / (r^2 sin^2 theta)

and the ring-shaped Hartmann potential is its ``gamma = 0`` member,
parameterized by the dimensionless ``eta``, ``sigma`` and ``q``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class UnitsSystem:
    """Reduced Planck constant, particle mass and charge. Defaults to atomic units."""

    hbar: float = 1.0
    mass: float = 1.0
    charge: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "charge"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be strictly positive")

    @property
    def bohr_radius(self) -> float:
        return self.hbar**2 / (self.mass * self.charge**2)

    @property
    def hartree(self) -> float:
        """Energy unit mu e^4 / hbar^2 (twice the hydrogen ionization energy)."""
        return self.mass * self.charge**4 / self.hbar**2

    @property
    def two_mass_over_hbar2(self) -> float:
        return 2.0 * self.mass / self.hbar**2


ATOMIC = UnitsSystem()


@dataclass(frozen=True)
class NonCentralParams:
    alpha: float
    beta: float = 0.0
    gamma: float = 0.0

    def coulomb_charge(self, units: UnitsSystem = ATOMIC) -> float:
        """Z in ``alpha = -Z e^2``."""
        return -self.alpha / units.charge**2


@dataclass(frozen=True)
class ReducedCouplings:
    """Couplings scaled by 2 mu / hbar^2.

    ``A`` keeps the sign of alpha (negative for attraction); ``eps2`` is
    ``-2 mu E / hbar^2`` and is positive for bound states.
    """

    A: float
    beta_t: float
    gamma_t: float
    eps2: float


@dataclass(frozen=True)
class HartmannParams:
    eta: float
    sigma: float
    q: float

    def __post_init__(self):
        if not (self.eta > 0 and self.sigma > 0):
            raise DomainError("eta and sigma must be positive")


def eval_potential(p: NonCentralParams, r, theta):
    """Evaluate V(r, theta); accepts scalars or numpy arrays."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r <= 0):
        raise DomainError("r must be positive")
    if np.any((theta <= 0) | (theta >= np.pi)):
        raise DomainError("theta must lie strictly inside (0, pi)")
    s2 = np.sin(theta) ** 2
    v = p.alpha / r + (p.beta + p.gamma * np.cos(theta)) / (r**2 * s2)
    return v[()] if v.ndim == 0 else v


def hartmann_to_noncentral(h: HartmannParams, units: UnitsSystem = ATOMIC) -> NonCentralParams:
    alpha = -h.eta * h.sigma**2 * units.charge**2
    beta = h.q * h.eta**2 * h.sigma**2 * units.hbar**2 / (2.0 * units.mass)
    return NonCentralParams(alpha=alpha, beta=beta, gamma=0.0)


def eval_hartmann_potential(h: HartmannParams, r, theta, units: UnitsSystem = ATOMIC):
    """Hartmann potential written with the Bohr radius and hydrogen ground energy.

    V = eta sigma^2 eps0 (2 a / r - q eta a^2 / (r^2 sin^2 theta)),
    a = hbar^2 / (mu e^2), eps0 = -mu e^4 / (2 hbar^2).
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    a = units.bohr_radius
    eps0 = -0.5 * units.hartree
    v = h.eta * h.sigma**2 * eps0 * (2 * a / r - h.q * h.eta * a**2 / (r**2 * np.sin(theta) ** 2))
    return v[()] if v.ndim == 0 else v


def reduce(p: NonCentralParams, energy: float, units: UnitsSystem = ATOMIC) -> ReducedCouplings:
    k = units.two_mass_over_hbar2
    return ReducedCouplings(A=k * p.alpha, beta_t=k * p.beta, gamma_t=k * p.gamma, eps2=-k * energy)
