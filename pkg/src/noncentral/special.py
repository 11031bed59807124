"""Gamma function and the classical orthogonal polynomials used by the wavefunctions.

All polynomials are evaluated by forward three-term recurrence, which is
O(n), stable in the orthogonality interval and works for real (irrational)
parameters.  Arguments may be scalars or numpy arrays.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError


def ln_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def _check_degree(n: int) -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"degree must be a nonnegative integer, got {n}")
    return int(n)


def _result(y):
    return y[()] if isinstance(y, np.ndarray) and y.ndim == 0 else y


def assoc_laguerre(n: int, a: float, x):
    """Generalized Laguerre polynomial L_n^a(x)."""
    n = _check_degree(n)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return _result(prev)
    cur = 1.0 + a - x
    for k in range(2, n + 1):
        prev, cur = cur, ((2 * k - 1 + a - x) * cur - (k - 1 + a) * prev) / k
    return _result(cur)


def jacobi(n: int, a: float, b: float, x):
    """Jacobi polynomial P_n^(a, b)(x) for real a, b > -1."""
    n = _check_degree(n)
    if not (a > -1 and b > -1):
        raise DomainError("Jacobi parameters must exceed -1")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return _result(prev)
    cur = (a + 1) + 0.5 * (a + b + 2) * (x - 1)
    ab = a + b
    for k in range(2, n + 1):
        c = 2 * k + ab
        denom = 2 * k * (k + ab) * (c - 2)
        lin = (c - 1) * (c * (c - 2) * x + a * a - b * b)
        back = 2 * (k + a - 1) * (k + b - 1) * c
        prev, cur = cur, (lin * cur - back * prev) / denom
    return _result(cur)


def gegenbauer_coefficient(n: int, mprime: float) -> float:
    """Factor relating P_n^(m', m') to the ultraspherical polynomial of index m' + 1/2.

    Gamma(2m'+1) Gamma(n+m'+1) / (Gamma(m'+1) Gamma(n+2m'+1)).
    """
    return math.exp(
        math.lgamma(2 * mprime + 1)
        + math.lgamma(n + mprime + 1)
        - math.lgamma(mprime + 1)
        - math.lgamma(n + 2 * mprime + 1)
    )


def gegenbauer_from_jacobi(n: int, mprime: float, x):
    """Ultraspherical polynomial C_n^(m'+1/2)(x), obtained from P_n^(m', m')."""
    n = _check_degree(n)
    if mprime < 0:
        raise DomainError("mprime must be nonnegative")
    return _result(jacobi(n, mprime, mprime, x) / gegenbauer_coefficient(n, mprime))
