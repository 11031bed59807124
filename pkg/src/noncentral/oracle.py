"""Independent numerical checks: finite-difference eigensolvers, ODE residuals, quadrature.

Nothing here uses the closed forms; the radial and polar equations are
discretized directly.

Radial (atomic units), Dirichlet at both ends::

    -F''/2 + (l(l+1)/(2 r^2) - Z/r) F = E F

Polar, Sturm-Liouville in the separation constant lambda::

    -(sin t H')' + (m^2 + beta_t + gamma_t cos t) / sin t H = lambda sin t H

discretized on half-step offset nodes in t = theta (default) or x = cos theta.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import GridTooSmallError, QuadratureError
from .model import ATOMIC, UnitsSystem


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of ``points`` interior nodes on [lower, upper].

    A closed end is a Dirichlet boundary one full step from the first node;
    an open end sits half a step from it.
    """

    lower: float
    upper: float
    points: int
    closed_lower: bool = True
    closed_upper: bool = True

    def __post_init__(self):
        if self.points < 64:
            raise ValueError("a grid needs at least 64 interior points")
        if not self.upper > self.lower:
            raise ValueError("upper bound must exceed lower bound")

    @property
    def _offsets(self) -> tuple[float, float]:
        return (1.0 if self.closed_lower else 0.5, 1.0 if self.closed_upper else 0.5)

    @property
    def spacing(self) -> float:
        lo, hi = self._offsets
        return (self.upper - self.lower) / (self.points - 1 + lo + hi)

    @property
    def nodes(self) -> np.ndarray:
        h = self.spacing
        return self.lower + (self._offsets[0] + np.arange(self.points)) * h

    def refined(self) -> "Grid1D":
        """Same interval and end types, half the spacing."""
        if self.closed_lower != self.closed_upper:
            raise ValueError("halving a mixed open/closed grid does not keep the node layout")
        lo, hi = self._offsets
        pts = int(2 * self.points - 1 + lo + hi)
        return Grid1D(self.lower, self.upper, pts, self.closed_lower, self.closed_upper)

    @classmethod
    def open(cls, lower: float, upper: float, points: int) -> "Grid1D":
        return cls(lower, upper, points, False, False)


@dataclass(frozen=True)
class OracleResult:
    """Richardson-extrapolated eigenvalues with |fine - coarse| / 3 as error estimate."""

    eigenvalues: np.ndarray
    errors: np.ndarray
    coarse: np.ndarray
    fine: np.ndarray


def lowest_eigenvalues(diag: np.ndarray, off: np.ndarray, count: int) -> np.ndarray:
    """Lowest ``count`` eigenvalues of a symmetric tridiagonal matrix (Sturm bisection, LAPACK stebz)."""
    return eigh_tridiagonal(
        diag, off, eigvals_only=True, select="i", select_range=(0, count - 1), lapack_driver="stebz"
    )


def sturm_count(diag: np.ndarray, off: np.ndarray, x: float) -> int:
    """Number of eigenvalues below x, from the sign changes of the LDL^T pivots."""
    count = 0
    q = diag[0] - x
    # zero pivots are nudged to a small negative value scaled like LAPACK's pivmin
    pivmin = np.finfo(float).eps * max(1.0, float(np.max(np.abs(off), initial=0.0)) ** 2)
    for i in range(len(diag)):
        if i:
            q = diag[i] - x - off[i - 1] ** 2 / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


def _richardson(coarse: np.ndarray, fine: np.ndarray) -> OracleResult:
    diff = fine - coarse
    return OracleResult(eigenvalues=fine + diff / 3, errors=np.abs(diff) / 3, coarse=coarse, fine=fine)


def radial_matrix(Z: float, l_eff: float, grid: Grid1D) -> tuple[np.ndarray, np.ndarray]:
    h = grid.spacing
    r = grid.nodes
    diag = 1 / h**2 + 0.5 * l_eff * (l_eff + 1) / r**2 - Z / r
    off = np.full(grid.points - 1, -0.5 / h**2)
    return diag, off


def radial_grid(Z: float, n_prime_max: float, spacing: float = 0.01, min_box: float = 60.0) -> Grid1D:
    """Grid on (0, R] with R = max(min_box, 10 n'^2 / Z) and the given spacing."""
    box = max(min_box, 10 * n_prime_max**2 / Z)
    points = int(math.ceil(box / spacing)) - 1
    return Grid1D(0.0, (points + 1) * spacing, points)


def radial_fd_spectrum(Z: float, l_eff: float, grid: Grid1D, count: int, richardson: bool = True) -> OracleResult:
    """Lowest ``count`` radial energies (hartree) on ``grid`` and on its refinement."""
    vals = lowest_eigenvalues(*radial_matrix(Z, l_eff, grid), count)
    if vals[-1] >= 0:
        raise GridTooSmallError(f"eigenvalue {count - 1} is {vals[-1]:.3g} >= 0; enlarge the box")
    if not richardson:
        return OracleResult(vals, np.full(count, np.nan), vals, vals)
    fine = lowest_eigenvalues(*radial_matrix(Z, l_eff, grid.refined()), count)
    return _richardson(vals, fine)


def polar_matrix(
    beta_t: float, gamma_t: float, m: int, grid: Grid1D, coordinate: str = "theta"
) -> tuple[np.ndarray, np.ndarray]:
    h = grid.spacing
    c = m * m + beta_t
    if coordinate == "theta":
        t = grid.nodes
        faces = t[:-1] + h / 2
        p = np.sin(faces) / h**2
        s = np.sin(t)
        diag = np.zeros(grid.points)
        diag[:-1] += p
        diag[1:] += p
        diag += (c + gamma_t * np.cos(t)) / s
        # symmetric form of A v = lambda S v with S = diag(sin t)
        w = 1 / np.sqrt(s)
        return diag * w * w, -p * w[:-1] * w[1:]
    if coordinate == "x":
        x = grid.nodes
        faces = x[:-1] + h / 2
        p = (1 - faces**2) / h**2
        diag = np.zeros(grid.points)
        diag[:-1] += p
        diag[1:] += p
        diag += (c + gamma_t * x) / (1 - x**2)
        return diag, -p
    raise ValueError(f"unknown coordinate {coordinate!r}")


def polar_grid(points: int = 2000, coordinate: str = "theta") -> Grid1D:
    if coordinate == "theta":
        return Grid1D.open(0.0, math.pi, points)
    return Grid1D.open(-1.0, 1.0, points)


def polar_fd_spectrum(
    beta_t: float,
    gamma_t: float,
    m: int,
    grid: Optional[Grid1D] = None,
    count: int = 1,
    coordinate: str = "theta",
    richardson: bool = True,
) -> OracleResult:
    """Lowest ``count`` separation constants lambda of the polar equation.

    ``grid`` must be an open grid on (0, pi) for coordinate="theta" or on
    (-1, 1) for coordinate="x".
    """
    grid = grid or polar_grid(coordinate=coordinate)
    vals = lowest_eigenvalues(*polar_matrix(beta_t, gamma_t, m, grid, coordinate), count)
    if not richardson:
        return OracleResult(vals, np.full(count, np.nan), vals, vals)
    fine = lowest_eigenvalues(*polar_matrix(beta_t, gamma_t, m, grid.refined(), coordinate), count)
    return _richardson(vals, fine)


def l_from_lambda(lam: float) -> float:
    """Nonnegative root of l (l + 1) = lambda."""
    return max(0.0, 0.5 * (math.sqrt(1 + 4 * lam) - 1))


@dataclass(frozen=True)
class ProductOracle:
    lam: float
    lam_error: float
    l_eff: float
    energy: float
    energy_error: float


def product_oracle_energy(
    Z: float,
    beta_t: float,
    gamma_t: float,
    m: int,
    n: int,
    N: int,
    polar_points: int = 2000,
    radial_spacing: float = 0.01,
) -> ProductOracle:
    """Energy (hartree) of level (N, n, m): polar FD gives lambda, radial FD at that l gives E."""
    pol = polar_fd_spectrum(beta_t, gamma_t, m, polar_grid(polar_points), count=n + 1)
    lam = float(pol.eigenvalues[n])
    ell = l_from_lambda(lam)
    grid = radial_grid(Z, N + ell + 1, spacing=radial_spacing / Z)
    rad = radial_fd_spectrum(Z, ell, grid, count=N + 1)
    # propagate the polar error through dE/dlambda = Z^2 / (n'^3 (2l + 1))
    npr = N + ell + 1
    dE = Z**2 / (npr**3 * (2 * ell + 1)) * float(pol.errors[n])
    return ProductOracle(
        lam=lam,
        lam_error=float(pol.errors[n]),
        l_eff=ell,
        energy=float(rad.eigenvalues[N]),
        energy_error=float(rad.errors[N]) + dE,
    )


# -- ODE residuals ----------------------------------------------------------------------


@dataclass(frozen=True)
class RadialEquation:
    """F'' + (2 mu E / hbar^2 + 2 mu Z e^2 / (hbar^2 r) - l(l+1)/r^2) F = 0."""

    Z: float
    l_eff: float
    energy: float
    units: UnitsSystem = ATOMIC

    def terms(self, r: np.ndarray):
        """Coefficients of f'', f', f and the magnitude scale of the f coefficient."""
        k = self.units.two_mass_over_hbar2
        parts = (k * self.energy, k * self.Z * self.units.charge**2 / r, -self.l_eff * (self.l_eff + 1) / r**2)
        return np.ones_like(r), np.zeros_like(r), sum(parts), sum(np.abs(x) for x in parts)


@dataclass(frozen=True)
class PolarEquation:
    """(1 - x^2) H'' - 2 x H' + (lambda - (m^2 + beta_t + gamma_t x) / (1 - x^2)) H = 0."""

    beta_t: float
    gamma_t: float
    m: int
    lam: float

    def terms(self, x: np.ndarray):
        w = 1 - x**2
        q = (self.m**2 + self.beta_t + self.gamma_t * x) / w
        return w, -2 * x, self.lam - q, abs(self.lam) + np.abs(q)


def ode_residual(
    f: Callable,
    equation: Union[RadialEquation, PolarEquation],
    grid: Grid1D,
    step: float = 1e-3,
) -> float:
    """Max over nodes of |LHS| / (1 + |f| * coefficient scale), 5-point central differences.

    Nodes whose stencil would leave [grid.lower, grid.upper] are skipped.
    """
    x = grid.nodes
    x = x[(x - 2 * step > grid.lower) & (x + 2 * step < grid.upper)]
    fm2, fm1, f0, fp1, fp2 = (np.asarray(f(x + j * step), dtype=float) for j in (-2, -1, 0, 1, 2))
    d2 = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * step**2)
    d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * step)
    a2, a1, a0, scale = equation.terms(x)
    lhs = a2 * d2 + a1 * d1 + a0 * f0
    return float(np.max(np.abs(lhs) / (1 + np.abs(f0) * scale)))


# -- quadrature -------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    intervals: int


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def adaptive_gauss_legendre(
    func: Callable,
    a: float,
    b: float,
    abs_tol: float = 1e-14,
    rel_tol: float = 1e-13,
    order: int = 20,
    max_depth: int = 60,
    max_intervals: int = 4000,
) -> QuadratureResult:
    """Globally adaptive composite Gauss-Legendre.

    The interval with the largest estimate |Q(parent) - Q(children)| is
    bisected until the summed estimate meets max(abs_tol, rel_tol |I|).
    """
    x, w = _gauss_legendre(order)

    def rule(lo, hi):
        half = 0.5 * (hi - lo)
        return half * float(np.dot(w, func(lo + half * (x + 1))))

    def split(lo, hi, q, depth):
        mid = 0.5 * (lo + hi)
        ql, qr = rule(lo, mid), rule(mid, hi)
        err = abs(ql + qr - q)
        if not math.isfinite(err):
            raise QuadratureError(f"non-finite integrand on [{lo:.3g}, {hi:.3g}]")
        return [(ql, lo, mid, depth + 1), (qr, mid, hi, depth + 1)], err

    # heap entries: (-error, lo, hi, depth, children)
    children, err = split(a, b, rule(a, b), 0)
    heap = [(-err, a, b, 0, children)]
    total = sum(c[0] for c in children)
    total_err = err
    while total_err > max(abs_tol, rel_tol * abs(total)):
        neg_err, lo, hi, depth, kids = heapq.heappop(heap)
        if -neg_err <= 1e-15 * sum(abs(c[0]) for c in kids):
            heapq.heappush(heap, (neg_err, lo, hi, depth, kids))
            break  # the worst remaining interval is at roundoff level
        if depth >= max_depth or len(heap) >= max_intervals:
            raise QuadratureError(
                f"no convergence: error {total_err:.3g} near [{lo:.3g}, {hi:.3g}] after {len(heap)} intervals"
            )
        total_err += neg_err
        for q, clo, chi, cdepth in kids:
            grand, cerr = split(clo, chi, q, cdepth)
            heapq.heappush(heap, (-cerr, clo, chi, cdepth, grand))
            total += sum(g[0] for g in grand) - q
            total_err += cerr
    return QuadratureResult(total, total_err, 2 * len(heap))


def quadrature_inner_product(
    f: Callable,
    g: Callable,
    domain: tuple[float, float],
    weight: Optional[Callable] = None,
    scale: float = 1.0,
    abs_tol: float = 1e-14,
    rel_tol: float = 1e-13,
) -> QuadratureResult:
    """<f, g>_w over a finite interval or [a, inf).

    Finite intervals use x = a + (b - a)(1 - cos(pi t))/2, which flattens
    algebraic endpoint behavior such as the Jacobi weight; [a, inf) uses
    x = a + scale * t / (1 - t).
    """
    lo, hi = domain

    def integrand(x):
        val = np.conj(np.asarray(f(x))) * np.asarray(g(x))
        if weight is not None:
            val = val * np.asarray(weight(x))
        return np.real(val)

    if math.isinf(hi):

        def mapped(t):
            one_minus = 1 - t
            x = lo + scale * t / one_minus
            with np.errstate(over="ignore", invalid="ignore"):
                v = integrand(x) * scale / one_minus**2
            return np.nan_to_num(v, nan=0.0, posinf=0.0, neginf=0.0)

        return adaptive_gauss_legendre(mapped, 0.0, 1.0, abs_tol, rel_tol)

    half = 0.5 * (hi - lo)

    def smoothed(t):
        x = lo + half * (1 - np.cos(np.pi * t))
        return integrand(x) * half * np.pi * np.sin(np.pi * t)

    return adaptive_gauss_legendre(smoothed, 0.0, 1.0, abs_tol, rel_tol)
