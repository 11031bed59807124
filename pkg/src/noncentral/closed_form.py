"""Exact eigenvalues and eigenfunctions of the separated non-central problem.

psi(r, theta, phi) = F(r)/r * H(cos theta) * Phi(phi), with

* F a Laguerre-type radial function of principal number n' = N + l_eff + 1,
* H a Jacobi-type polar function with indices (B + C, B - C),
* Phi = exp(i m phi) / sqrt(2 pi).

Angular quantities use the dimensionless couplings beta_t = 2 mu beta / hbar^2
and gamma_t = 2 mu gamma / hbar^2.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ComplexUError, DomainError
from .model import ATOMIC, HartmannParams, NonCentralParams, UnitsSystem, hartmann_to_noncentral, reduce
from .special import assoc_laguerre, jacobi

log = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class QuantumNumbers:
    N: int
    n: int
    m: int

    def __post_init__(self):
        for name in ("N", "n", "m"):
            v = getattr(self, name)
            if int(v) != v:
                raise DomainError(f"{name} must be an integer")
            object.__setattr__(self, name, int(v))
        if self.N < 0 or self.n < 0:
            raise DomainError("N and n must be nonnegative")


@dataclass(frozen=True)
class AngularSolution:
    """Auxiliaries of the polar solution.

    ``C`` carries the sign of gamma_t so that B^2 + C^2 = m^2 + beta_t,
    B^2 - C^2 = u and 2 B C = gamma_t.
    """

    m: int
    n: int
    u: float
    B: float
    C: float
    l_eff: float
    norm: float

    @property
    def jacobi_a(self) -> float:
        return self.B + self.C

    @property
    def jacobi_b(self) -> float:
        return self.B - self.C

    @property
    def separation_constant(self) -> float:
        return self.l_eff * (self.l_eff + 1)


def angular_auxiliaries(m: int, beta_t: float, gamma_t: float) -> tuple[float, float, float]:
    """Return (u, B, C) or raise ComplexUError."""
    s = m * m + beta_t
    g = abs(gamma_t)
    if s < 0 or g > s:
        raise ComplexUError(
            f"no real angular solution: m^2+beta_t={s:.6g}, gamma_t={gamma_t:.6g}"
        )
    # factored forms avoid cancellation when |gamma_t| is close to 0 or to s
    u = math.sqrt((s - g) * (s + g))
    B = math.sqrt((s + u) / 2)
    C = math.copysign(min(g / (2 * B), B), gamma_t) if B > 0 else 0.0
    return u, B, C


def effective_l(m: int, beta_t: float, gamma_t: float, n: int) -> float:
    _, B, _ = angular_auxiliaries(m, beta_t, gamma_t)
    return B + n


def angular_norm_const(B: float, C: float, n: int) -> float:
    a, b = B + C, B - C
    log_sq = (
        math.log(2 * n + 2 * B + 1)
        + math.lgamma(n + 1)
        + math.lgamma(n + 2 * B + 1)
        - (2 * B + 1) * math.log(2)
        - math.lgamma(n + a + 1)
        - math.lgamma(n + b + 1)
    )
    return math.exp(0.5 * log_sq)


def angular_solution(m: int, beta_t: float, gamma_t: float, n: int) -> AngularSolution:
    u, B, C = angular_auxiliaries(m, beta_t, gamma_t)
    return AngularSolution(m=m, n=n, u=u, B=B, C=C, l_eff=B + n, norm=angular_norm_const(B, C, n))


def total_energy(p: NonCentralParams, qn: QuantumNumbers, units: UnitsSystem = ATOMIC) -> float:
    """E = -mu alpha^2 / (2 hbar^2 (N + l_eff + 1)^2)."""
    if not p.alpha < 0:
        raise DomainError("bound states need alpha < 0")
    rc = reduce(p, 0.0, units)
    npr = qn.N + effective_l(qn.m, rc.beta_t, rc.gamma_t, qn.n) + 1
    return -units.mass * p.alpha**2 / (2 * units.hbar**2 * npr**2)


def hartmann_energy(h: HartmannParams, qn: QuantumNumbers, units: UnitsSystem = ATOMIC) -> float:
    return total_energy(hartmann_to_noncentral(h, units), qn, units)


@dataclass(frozen=True)
class RadialFunction:
    """Normalized F(r) = C z^(l+1) exp(-z/2) L_N^(2l+1)(z), z = 2 k r, k = mu Z e^2 / (hbar^2 n')."""

    N: int
    l_eff: float
    n_prime: float
    k: float
    norm: float

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        z = 2 * self.k * r
        with np.errstate(divide="ignore", invalid="ignore"):
            val = self.norm * np.power(z, self.l_eff + 1) * np.exp(-z / 2) * assoc_laguerre(self.N, 2 * self.l_eff + 1, z)
        return val[()] if val.ndim == 0 else val


def radial_wavefunction(n_prime: float, l_eff: float, Z: float, units: UnitsSystem = ATOMIC) -> RadialFunction:
    N_float = n_prime - l_eff - 1
    N = round(N_float)
    if abs(N_float - N) > 1e-9 or N < 0:
        raise DomainError(f"n' - l - 1 = {N_float} is not a nonnegative integer")
    k = units.mass * Z * units.charge**2 / (units.hbar**2 * n_prime)
    log_c2 = math.log(k) + math.lgamma(N + 1) - math.log(n_prime) - math.lgamma(N + 2 * l_eff + 2)
    return RadialFunction(N=N, l_eff=l_eff, n_prime=n_prime, k=k, norm=math.exp(0.5 * log_c2))


@dataclass(frozen=True)
class PolarFunction:
    """Normalized H(x) = N_n (1-x)^((B+C)/2) (1+x)^((B-C)/2) P_n^(B+C, B-C)(x)."""

    sol: AngularSolution
    norm: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.sol.jacobi_a, self.sol.jacobi_b
        val = self.norm * (1 - x) ** (a / 2) * (1 + x) ** (b / 2) * jacobi(self.sol.n, a, b, x)
        return val[()] if val.ndim == 0 else val


def angular_wavefunction(p: NonCentralParams, m: int, n: int, units: UnitsSystem = ATOMIC) -> PolarFunction:
    rc = reduce(p, 0.0, units)
    sol = angular_solution(m, rc.beta_t, rc.gamma_t, n)
    return PolarFunction(sol=sol, norm=sol.norm)


def hartmann_angular(mprime: float, n: int) -> Callable:
    """H(cos theta) for gamma = 0 written with P_n^(m', m') and (sin theta)^m'.

    Returns a function of theta.
    """
    const = angular_norm_const(mprime, 0.0, n)

    def H(theta):
        theta = np.asarray(theta, dtype=float)
        return const * np.sin(theta) ** mprime * jacobi(n, mprime, mprime, np.cos(theta))

    return H


def hartmann_angular_sum(mprime: float, n: int) -> Callable:
    """The same function as :func:`hartmann_angular`, from the explicit finite power sum in cos theta.

    With l = n + m':
    H = sqrt((2n+2m'+1) n! / (2 Gamma(n+2m'+1))) sin^m'
        * sum_v (-1)^v Gamma(2l-2v+1) / (2^l v! (l-m'-2v)! Gamma(l-v+1)) cos^(l-m'-2v)
    """
    ell = n + mprime
    pref = math.sqrt((2 * n + 2 * mprime + 1) * math.factorial(n) / (2 * math.gamma(n + 2 * mprime + 1)))
    terms = []
    for v in range(n // 2 + 1):
        log_mag = math.lgamma(2 * ell - 2 * v + 1) - ell * math.log(2) - math.lgamma(v + 1) - math.lgamma(n - 2 * v + 1) - math.lgamma(ell - v + 1)
        terms.append(((-1) ** v * math.exp(log_mag), n - 2 * v))

    def H(theta):
        theta = np.asarray(theta, dtype=float)
        c = np.cos(theta)
        total = sum(coef * c**power for coef, power in terms)
        return pref * np.sin(theta) ** mprime * total

    return H


@dataclass(frozen=True)
class AzimuthalFunction:
    m: int

    def __call__(self, phi):
        return np.exp(1j * self.m * np.asarray(phi, dtype=float)) / math.sqrt(2 * math.pi)


def azimuthal_wavefunction(m: int) -> AzimuthalFunction:
    return AzimuthalFunction(m=int(m))


@dataclass(frozen=True)
class BoundState:
    energy: float
    qn: QuantumNumbers
    l_eff: float
    n_prime: float
    angular: AngularSolution
    radial: RadialFunction
    polar: PolarFunction
    azimuthal: AzimuthalFunction
    params: NonCentralParams
    units: UnitsSystem = ATOMIC
    warnings: tuple[str, ...] = field(default=())

    def R(self, r):
        r = np.asarray(r, dtype=float)
        return self.radial(r) / r

    def psi(self, r, theta, phi):
        return self.R(r) * self.polar(np.cos(theta)) * self.azimuthal(phi)

    def metadata(self) -> dict:
        return {
            "energy": self.energy,
            "N": self.qn.N,
            "n": self.qn.n,
            "m": self.qn.m,
            "l_eff": self.l_eff,
            "n_prime": self.n_prime,
            "u": self.angular.u,
            "B": self.angular.B,
            "C": self.angular.C,
            "radial_norm": self.radial.norm,
            "angular_norm": self.polar.norm,
            "params": {"alpha": self.params.alpha, "beta": self.params.beta, "gamma": self.params.gamma},
            "units": {"hbar": self.units.hbar, "mass": self.units.mass, "charge": self.units.charge},
            "warnings": list(self.warnings),
        }


def full_wavefunction(
    p: NonCentralParams, qn: QuantumNumbers, units: UnitsSystem = ATOMIC, check_norm: bool = True
) -> BoundState:
    """Assemble the bound state; closed-form norms are cross-checked by quadrature.

    If a closed-form constant disagrees with quadrature by more than
    NORM_TOLERANCE (relative), the quadrature value is used and a warning is
    recorded on the state.
    """
    energy = total_energy(p, qn, units)
    polar = angular_wavefunction(p, qn.m, qn.n, units)
    sol = polar.sol
    npr = qn.N + sol.l_eff + 1
    radial = radial_wavefunction(npr, sol.l_eff, p.coulomb_charge(units), units)
    notes: list[str] = []
    if check_norm:
        from .oracle import quadrature_inner_product

        rq = quadrature_inner_product(radial, radial, (0.0, math.inf), scale=npr / (2 * radial.k)).value
        if abs(rq - 1) > NORM_TOLERANCE:
            notes.append(f"radial closed-form norm off by {rq - 1:.3e}; using quadrature")
            radial = RadialFunction(radial.N, radial.l_eff, radial.n_prime, radial.k, radial.norm / math.sqrt(rq))
        aq = quadrature_inner_product(polar, polar, (-1.0, 1.0)).value
        if abs(aq - 1) > NORM_TOLERANCE:
            notes.append(f"angular closed-form norm off by {aq - 1:.3e}; using quadrature")
            polar = PolarFunction(sol, polar.norm / math.sqrt(aq))
        for msg in notes:
            log.warning(msg)
    return BoundState(
        energy=energy,
        qn=qn,
        l_eff=sol.l_eff,
        n_prime=npr,
        angular=sol,
        radial=radial,
        polar=polar,
        azimuthal=azimuthal_wavefunction(qn.m),
        params=p,
        units=units,
        warnings=tuple(notes),
    )
