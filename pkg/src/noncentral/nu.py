"""Nikiforov-Uvarov reduction of generalized hypergeometric-type equations.

An equation

    psi'' + (tau_tilde / sigma) psi' + (sigma_tilde / sigma^2) psi = 0

with deg sigma, deg sigma_tilde <= 2 and deg tau_tilde <= 1 is reduced by
choosing k so that

    ((sigma' - tau_tilde) / 2)^2 - sigma_tilde + k sigma

is the square of a polynomial.  Each admissible k and sign gives a branch
pi(s), tau = tau_tilde + 2 pi, lambda_bar = k + pi'.  Bound states follow from
lambda_bar = -n tau' - n (n - 1) sigma'' / 2.

All coefficients are numeric; the dependence on energy (or on the
separation constant) lives entirely in the ``form_builder`` of a
:class:`QuantizationProblem`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from .errors import (
    BranchAmbiguityWarning,
    DegenerateRadicandError,
    IterationLimitError,
    NoPhysicalBranchError,
    NoSignChangeError,
)
from .model import ATOMIC, NonCentralParams, UnitsSystem, reduce

_REL_TOL = 1e-12
# rounding level of a coefficient relative to the magnitude of its terms
_ROUNDOFF = 64 * np.finfo(float).eps


def _poly(c) -> Polynomial:
    p = c if isinstance(c, Polynomial) else Polynomial(np.atleast_1d(np.asarray(c, dtype=float)))
    return p


def _coeffs(p: Polynomial, size: int = 3) -> np.ndarray:
    out = np.zeros(size)
    c = p.coef[:size]
    out[: len(c)] = c
    return out


def _degree(p: Polynomial) -> int:
    nz = np.nonzero(p.coef)[0]
    return int(nz[-1]) if len(nz) else 0


def _slope(p: Polynomial) -> float:
    return float(_coeffs(p, 2)[1])


@dataclass(frozen=True)
class HypergeometricForm:
    """sigma, tau_tilde, sigma_tilde as coefficient sequences (lowest degree first)."""

    sigma: Polynomial
    tau_tilde: Polynomial
    sigma_tilde: Polynomial

    def __post_init__(self):
        for name, maxdeg in (("sigma", 2), ("tau_tilde", 1), ("sigma_tilde", 2)):
            p = _poly(getattr(self, name))
            if _degree(p) > maxdeg:
                raise ValueError(f"{name} exceeds degree {maxdeg}")
            object.__setattr__(self, name, p)
        if not np.any(self.sigma.coef):
            raise ValueError("sigma must not vanish identically")

    def radicand_parts(self) -> tuple[np.ndarray, np.ndarray]:
        """Coefficients (p, s) with radicand(k) = p + k s, each of length 3."""
        half = (self.sigma.deriv() - self.tau_tilde) / 2
        return _coeffs(half * half - self.sigma_tilde), _coeffs(self.sigma)

    def radicand(self, k: float) -> Polynomial:
        p, s = self.radicand_parts()
        return Polynomial(p + k * s)

    def scale(self) -> float:
        p, s = self.radicand_parts()
        return max(1.0, float(np.max(np.abs(p))), float(np.max(np.abs(s))))


@dataclass(frozen=True)
class NUBranch:
    k: float
    sign: int
    pi_poly: Polynomial
    tau_poly: Polynomial
    lambda_bar: float
    # double root of the perfect-square radicand; None when the radicand is constant
    sqrt_arg_root: Optional[float]

    @property
    def tau_slope(self) -> float:
        return _slope(self.tau_poly)


@dataclass(frozen=True)
class QuantizationProblem:
    form_builder: Callable[[float], HypergeometricForm]
    level: int
    bracket: tuple[float, float]
    name: str = field(default="", compare=False)


def _quadratic_roots(c: tuple[float, float, float], noise: tuple[float, float, float]) -> list[float]:
    """Real roots of c2 k^2 + c1 k + c0; values within ``noise`` of zero count as zero."""
    # normalize so that the discriminant cannot under- or overflow
    big = max(abs(x) for x in c)
    c2, c1, c0 = (x / big for x in c)
    noise = tuple(x / big for x in noise)
    if abs(c2) <= noise[2]:
        if abs(c1) <= noise[1]:
            return []
        return [-c0 / c1]
    disc = c1 * c1 - 4 * c2 * c0
    if abs(disc) <= _ROUNDOFF * (c1 * c1 + 4 * abs(c2 * c0)):
        return [-c1 / (2 * c2)]
    if disc < 0:
        return []
    qv = -0.5 * (c1 + math.copysign(math.sqrt(disc), c1))
    roots = [qv / c2, c0 / qv] if qv != 0 else [0.0, 0.0]
    return sorted(roots)


def find_k_candidates(form: HypergeometricForm) -> list[float]:
    """Real k making the radicand a perfect square, ascending."""
    p, s = form.radicand_parts()
    scale = form.scale()
    if np.all(np.abs(np.r_[p[1:], s[1:]]) <= _REL_TOL * scale):
        raise DegenerateRadicandError("radicand is constant in s for every k")
    # discriminant a1^2 - 4 a2 a0 of the radicand, a_i = p_i + k s_i
    c2 = s[1] ** 2 - 4 * s[2] * s[0]
    c1 = 2 * p[1] * s[1] - 4 * (p[2] * s[0] + s[2] * p[0])
    c0 = p[1] ** 2 - 4 * p[2] * p[0]
    # rounding in each coefficient is relative to its terms, not to its (possibly cancelled) value
    noise = (
        _ROUNDOFF * (p[1] ** 2 + 4 * abs(p[2] * p[0])),
        _ROUNDOFF * (2 * abs(p[1] * s[1]) + 4 * (abs(p[2] * s[0]) + abs(s[2] * p[0]))),
        _ROUNDOFF * (s[1] ** 2 + 4 * abs(s[2] * s[0])),
    )
    if abs(c2) <= noise[2] and abs(c1) <= noise[1] and abs(c0) <= noise[0]:
        raise DegenerateRadicandError("radicand is a perfect square for every k")
    ks = _quadratic_roots((c2, c1, c0), noise)
    if len(ks) == 2:
        # steps stay within half the separation so that a root cannot jump to its partner
        half = (ks[1] - ks[0]) / 2
        ks = sorted(_polish(k, p, s, half) for k in ks)
    return [float(k) for k in ks]


def _polish(k: float, p: np.ndarray, s: np.ndarray, max_step: float, steps: int = 3) -> float:
    """Newton steps on the radicand discriminant, evaluated from a_i = p_i + k s_i.

    c1^2 - 4 c2 c0 cancels when the two roots are close; this form does not.
    """

    def disc(k):
        a0, a1, a2 = p + k * s
        return a1 * a1 - 4 * a2 * a0, 2 * a1 * s[1] - 4 * (s[2] * a0 + a2 * s[0])

    d, dd = disc(k)
    for _ in range(steps):
        if dd == 0:
            break
        step = d / dd
        if not abs(step) < max_step:
            break
        k_new = k - step
        d_new, dd_new = disc(k_new)
        if not abs(d_new) < abs(d):
            break
        k, d, dd = k_new, d_new, dd_new
    return k


def build_branches(form: HypergeometricForm) -> list[NUBranch]:
    ks = find_k_candidates(form)
    if not ks:
        raise NoPhysicalBranchError("no real k makes the radicand a perfect square")
    tol = _REL_TOL * form.scale()
    base = (form.sigma.deriv() - form.tau_tilde) / 2
    out: list[NUBranch] = []
    for k in ks:
        a0, a1, a2 = _coeffs(form.radicand(k))
        if a2 > tol and a2 >= a0:
            c1 = math.sqrt(a2)
            c0 = a1 / (2 * c1)
            root = -c0 / c1
        elif a0 > tol and a2 >= -tol:
            # expand about the larger coefficient; sqrt of a rounded near-zero a2 would swamp c1
            c0 = math.sqrt(a0)
            c1 = a1 / (2 * c0)
            if c1 < 0:
                c0, c1 = -c0, -c1
            root = -c0 / c1 if abs(c1) > tol else None
        elif a2 >= -tol and a0 >= -tol:
            c1, c0, root = 0.0, math.sqrt(max(a0, 0.0)), None
        else:
            # radicand is a negative square: pi would be imaginary
            continue
        sqrt_poly = Polynomial([c0, c1])
        for sign in (-1, 1):
            pi = base + sign * sqrt_poly
            tau = form.tau_tilde + 2 * pi
            lam = k + _slope(pi)
            branch = NUBranch(k=k, sign=sign, pi_poly=pi, tau_poly=tau, lambda_bar=lam, sqrt_arg_root=root)
            if not any(_same_branch(branch, b, tol) for b in out):
                out.append(branch)
    if not out:
        raise NoPhysicalBranchError("every perfect-square radicand is negative")
    return out


def _same_branch(a: NUBranch, b: NUBranch, tol: float) -> bool:
    return abs(a.k - b.k) <= tol and np.allclose(_coeffs(a.pi_poly, 2), _coeffs(b.pi_poly, 2), atol=tol, rtol=0)


def _decays(branch: NUBranch, sigma: Polynomial) -> bool:
    """phi = exp(int pi/sigma) vanishes at every real root of sigma (and at infinity for linear sigma)."""
    deg = _degree(sigma)
    if deg == 0:
        return True
    dsig = sigma.deriv()
    ok = True
    for s0 in sigma.roots():
        if abs(complex(s0).imag) > 1e-12:
            continue
        s0 = float(complex(s0).real)
        ok &= branch.pi_poly(s0) / dsig(s0) > 1e-12
    if deg == 1:
        ok &= _slope(branch.pi_poly) < 0
    return bool(ok)


def select_physical_branch(branches: Sequence[NUBranch], sigma=None) -> NUBranch:
    """Pick the branch with tau' < 0 whose phi is normalizable.

    Ties go to the smallest lambda_bar and raise a BranchAmbiguityWarning.
    """
    if not branches:
        raise NoPhysicalBranchError("empty branch list")
    physical = [b for b in branches if b.tau_slope < 0]
    if not physical:
        raise NoPhysicalBranchError("no branch has tau' < 0")
    if len(physical) == 1:
        return physical[0]
    if sigma is not None:
        decaying = [b for b in physical if _decays(b, _poly(sigma))]
        if len(decaying) == 1:
            return decaying[0]
        if decaying:
            physical = decaying
    chosen = min(physical, key=lambda b: b.lambda_bar)
    warnings.warn(
        f"{len(physical)} branches with tau' < 0; took k={chosen.k:.12g} (smallest lambda_bar)",
        BranchAmbiguityWarning,
        stacklevel=2,
    )
    return chosen


def lambda_n(branch: NUBranch, sigma, n: int) -> float:
    sig2 = float(_coeffs(_poly(sigma))[2]) * 2.0
    return -n * branch.tau_slope - 0.5 * n * (n - 1) * sig2


def _branch_for(form: HypergeometricForm) -> NUBranch:
    return select_physical_branch(build_branches(form), form.sigma)


def quantization_residual(qp: QuantizationProblem, energy: float) -> float:
    """lambda_bar(E) - lambda_n(E) for the physical branch at trial energy E."""
    form = qp.form_builder(energy)
    b = _branch_for(form)
    return b.lambda_bar - lambda_n(b, form.sigma, qp.level)


def solve_eigenvalue(qp: QuantizationProblem, maxiter: int = 200) -> float:
    lo, hi = qp.bracket
    # trial values off the eigenvalue may have several tau' < 0 branches; only the root matters
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BranchAmbiguityWarning)
        f_lo = quantization_residual(qp, lo)
        f_hi = quantization_residual(qp, hi)
        if f_lo == 0:
            return lo
        if f_hi == 0:
            return hi
        if np.sign(f_lo) == np.sign(f_hi):
            raise NoSignChangeError(f"residual has the same sign at {lo} and {hi}")
        root, info = brentq(
            lambda e: quantization_residual(qp, e), lo, hi, xtol=1e-300, maxiter=maxiter,
            full_output=True, disp=False,
        )
    if not info.converged:
        raise IterationLimitError(f"no convergence after {info.iterations} iterations")
    return float(root)


# -- the two reductions of the separated Schroedinger equation ---------------------------


def radial_form(eps2: float, A: float, lam: float) -> HypergeometricForm:
    """F'' + (-eps2 r^2 - A r - lam) / r^2 F = 0."""
    return HypergeometricForm(sigma=[0.0, 1.0], tau_tilde=[0.0], sigma_tilde=[-lam, -A, -eps2])


def angular_form(lam: float, m: int, beta_t: float, gamma_t: float) -> HypergeometricForm:
    """Polar equation in x = cos(theta)."""
    return HypergeometricForm(
        sigma=[1.0, 0.0, -1.0],
        tau_tilde=[0.0, -2.0],
        sigma_tilde=[lam - m * m - beta_t, -gamma_t, -lam],
    )


def radial_problem(p: NonCentralParams, l_eff: float, N: int, units: UnitsSystem = ATOMIC) -> QuantizationProblem:
    """Energy quantization for the radial equation at fixed effective l."""
    lam = l_eff * (l_eff + 1)
    A = reduce(p, 0.0, units).A
    k = units.two_mass_over_hbar2

    def build(energy: float) -> HypergeometricForm:
        return radial_form(-k * energy, A, lam)

    # hydrogen-like scale with principal number n' in [1/2, 2 (N + l + 1)] brackets the root
    e_scale = units.mass * p.alpha**2 / (2 * units.hbar**2)
    npr = N + l_eff + 1
    bracket = (-4.0 * e_scale, -e_scale / (2 * npr) ** 2)
    return QuantizationProblem(build, N, bracket, name="radial")


def angular_problem(m: int, beta_t: float, gamma_t: float, n: int) -> QuantizationProblem:
    """Quantization of the separation constant lambda for the polar equation."""

    def build(lam: float) -> HypergeometricForm:
        return angular_form(lam, m, beta_t, gamma_t)

    top = math.sqrt(abs(m * m + beta_t)) + n + 2
    return QuantizationProblem(build, n, (-1.0, top * (top + 1)), name="angular")


def derive(qp: QuantizationProblem, value: float) -> dict:
    """Derivation trace at a trial value: k candidates, branches, selection, lambda_bar, lambda_n."""
    form = qp.form_builder(value)
    ks = find_k_candidates(form)
    branches = build_branches(form)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", BranchAmbiguityWarning)
        chosen = select_physical_branch(branches, form.sigma)
    ln = lambda_n(chosen, form.sigma, qp.level)
    return {
        "problem": qp.name,
        "value": value,
        "level": qp.level,
        "sigma": _coeffs(form.sigma).tolist(),
        "tau_tilde": _coeffs(form.tau_tilde, 2).tolist(),
        "sigma_tilde": _coeffs(form.sigma_tilde).tolist(),
        "k_candidates": list(ks),
        "branches": [_branch_dict(b) for b in branches],
        "selected": branches.index(chosen),
        "lambda_bar": chosen.lambda_bar,
        "lambda_n": ln,
        "warnings": [str(w.message) for w in caught],
    }


def _branch_dict(b: NUBranch) -> dict:
    return {
        "k": b.k,
        "sign": b.sign,
        "pi": _coeffs(b.pi_poly, 2).tolist(),
        "tau": _coeffs(b.tau_poly, 2).tolist(),
        "tau_slope": b.tau_slope,
        "lambda_bar": b.lambda_bar,
        "sqrt_arg_root": b.sqrt_arg_root,
    }
