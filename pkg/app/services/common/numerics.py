"""
Special functions and quadrature primitives used by the closed-form engines.

All functions are pure; they validate their domain and raise the planner
error types from ``app.core.errors``.
"""
import cmath
import logging
import math
from functools import lru_cache
from typing import List, Literal, Union

import numpy as np
from scipy import special

from app.core.errors import AccuracyError, DomainError, ParameterError
from app.schemas.analysis import QuadratureRule

logger = logging.getLogger(__name__)

Number = Union[float, complex]

MAX_LAGUERRE_ORDER = 64
# |z| at or beyond which the 2F1 series hands over to the transformed evaluator
HYP2F1_SERIES_RADIUS = 0.9
REAL_ROOT_TOL = 1e-7


# ---------------------------------------------------------------------------
# Gauss-Laguerre quadrature
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None, typed=True)
def gauss_laguerre(order: int) -> QuadratureRule:
    """
    Gauss-Laguerre rule for int_0^inf f(x) e^-x dx.

    Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix of the
    Laguerre recurrence (Golub-Welsch, Newton-polished by scipy); weights are
    the squared first eigenvector components.
    """
    if not isinstance(order, (int, np.integer)) or isinstance(order, bool):
        raise ParameterError(f"Quadrature order must be an integer, got {order!r}")
    if not 1 <= order <= MAX_LAGUERRE_ORDER:
        raise ParameterError(f"Quadrature order must lie in [1, {MAX_LAGUERRE_ORDER}], got {order}")

    nodes, weights = special.roots_laguerre(int(order))
    return QuadratureRule(
        order=int(order),
        nodes=tuple(float(x) for x in nodes),
        weights=tuple(float(w) for w in weights),
    )


# ---------------------------------------------------------------------------
# Incomplete gamma
# ---------------------------------------------------------------------------

def upper_incomplete_gamma(s: float, x: float) -> float:
    """Gamma(s, x) = int_x^inf t^(s-1) e^-t dt for s > 0, x >= 0"""
    if s <= 0:
        raise ParameterError(f"Incomplete gamma shape must be positive, got {s}")
    if x < 0:
        raise ParameterError(f"Incomplete gamma argument must be nonnegative, got {x}")
    return float(special.gammaincc(s, x) * special.gamma(s))


def upper_incomplete_gamma_integer(n: int, x: float) -> float:
    """Finite-sum identity Gamma(n, x) = (n-1)! e^-x sum_{k<n} x^k / k! for integer n >= 1"""
    if int(n) != n or n < 1:
        raise ParameterError(f"Finite-sum form needs a positive integer shape, got {n}")
    if x < 0:
        raise ParameterError(f"Incomplete gamma argument must be nonnegative, got {x}")
    n = int(n)
    term = 1.0
    total = 1.0
    for k in range(1, n):
        term *= x / k
        total += term
    return math.factorial(n - 1) * math.exp(-x) * total


def upper_incomplete_gamma_array(s: float, x: np.ndarray) -> np.ndarray:
    """Vectorized Gamma(s, x) for the quadrature kernels"""
    x = np.asarray(x, dtype=float)
    if s <= 0:
        raise ParameterError(f"Incomplete gamma shape must be positive, got {s}")
    if np.any(x < 0):
        raise ParameterError("Incomplete gamma argument must be nonnegative")
    return special.gammaincc(s, x) * special.gamma(s)


# ---------------------------------------------------------------------------
# Gauss hypergeometric 2F1
# ---------------------------------------------------------------------------

def _check_2f1_parameters(c: float) -> None:
    if c <= 0 and float(c).is_integer():
        raise DomainError(f"2F1 undefined for nonpositive integer c = {c}")


def hyp2f1_series(a: float, b: float, c: float, z: Number, tol: float = 1e-16, max_terms: int = 20000) -> Number:
    """Direct power series of 2F1(a, b; c; z), valid for |z| < 1"""
    _check_2f1_parameters(c)
    if abs(z) >= 1:
        raise DomainError(f"2F1 power series diverges for |z| = {abs(z):.6g} >= 1")

    term: Number = 1.0
    total: Number = 1.0
    quiet = 0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if term == 0:
            return total
        if abs(term) <= tol * abs(total):
            quiet += 1
            # three consecutive negligible terms guard against accidental cancellation
            if quiet >= 3:
                return total
        else:
            quiet = 0
    raise AccuracyError(
        f"2F1({a}, {b}; {c}; {z}) series did not settle within {max_terms} terms",
        estimate=abs(term),
    )


def gauss_2f1(a: float, b: float, c: float, z: Number) -> Number:
    """
    Gauss hypergeometric function 2F1(a, b; c; z).

    The power series is used for |z| < 0.9. Beyond that the value comes from
    scipy's evaluator, which applies the linear transformations (1/z, 1-z,
    z/(z-1)) that continue the function to z <= -1 and to complex arguments
    off the cut [1, inf).
    """
    _check_2f1_parameters(c)
    if z == 0:
        return 1.0
    is_complex = isinstance(z, complex) and z.imag != 0.0
    if not is_complex:
        z = float(z.real if isinstance(z, complex) else z)
        if z >= 1:
            raise DomainError(f"2F1 is not defined on the branch cut, z = {z}")

    if abs(z) < HYP2F1_SERIES_RADIUS:
        return hyp2f1_series(a, b, c, z)

    value = special.hyp2f1(a, b, c, complex(z) if is_complex else z)
    if not np.isfinite(value):
        raise DomainError(f"2F1({a}, {b}; {c}; {z}) has no finite value")
    return complex(value) if is_complex else float(value)


# ---------------------------------------------------------------------------
# Cubic roots
# ---------------------------------------------------------------------------

def _polish_root(coefficients: np.ndarray, x: float, steps: int = 3) -> float:
    derivative = np.polyder(coefficients)
    for _ in range(steps):
        slope = np.polyval(derivative, x)
        if slope == 0:
            break
        step = np.polyval(coefficients, x) / slope
        if not np.isfinite(step):
            break
        x_new = x - step
        if abs(np.polyval(coefficients, x_new)) > abs(np.polyval(coefficients, x)):
            break
        x = x_new
    return float(x)


def _radical_cubic_roots(a3: float, a2: float, a1: float, a0: float) -> List[complex]:
    """Cardano/radical form in complex arithmetic with principal cube roots"""
    delta0 = a2 * a2 - 3.0 * a3 * a1
    delta1 = 2.0 * a2 ** 3 - 9.0 * a3 * a2 * a1 + 27.0 * a3 * a3 * a0
    if delta0 == 0 and delta1 == 0:
        root = -a2 / (3.0 * a3)
        return [complex(root)] * 3

    discriminant = cmath.sqrt(delta1 * delta1 - 4.0 * delta0 ** 3)
    # pick the sign that keeps C away from zero
    big = delta1 + discriminant if abs(delta1 + discriminant) >= abs(delta1 - discriminant) else delta1 - discriminant
    c_root = (big / 2.0) ** (1.0 / 3.0)
    xi = complex(-0.5, math.sqrt(3.0) / 2.0)
    roots = []
    for k in range(3):
        ck = c_root * xi ** k
        roots.append(-(a2 + ck + delta0 / ck) / (3.0 * a3))
    return roots


def solve_cubic(
    a3: float,
    a2: float,
    a1: float,
    a0: float,
    method: Literal["radical", "companion"] = "radical",
) -> List[float]:
    """
    Real roots of a3 x^3 + a2 x^2 + a1 x + a0 = 0, sorted ascending with multiplicity.

    ``radical`` evaluates the closed-form cube-root expressions; ``companion``
    takes the eigenvalues of the companion matrix. Complex roots whose
    imaginary part is below 1e-7 (1 + |re|) are accepted as real, and every
    accepted root is Newton-polished on the original polynomial.
    """
    if a3 == 0:
        raise ParameterError("Leading coefficient a3 is zero; use a quadratic solver")
    if not all(math.isfinite(v) for v in (a3, a2, a1, a0)):
        raise ParameterError("Cubic coefficients must be finite")

    if method == "radical":
        candidates = _radical_cubic_roots(float(a3), float(a2), float(a1), float(a0))
    elif method == "companion":
        candidates = [complex(r) for r in np.roots([a3, a2, a1, a0])]
    else:
        raise ParameterError(f"Unknown cubic method '{method}'")

    coefficients = np.array([a3, a2, a1, a0], dtype=float)
    real_roots = [
        _polish_root(coefficients, root.real)
        for root in candidates
        if abs(root.imag) < REAL_ROOT_TOL * (1.0 + abs(root.real))
    ]
    return sorted(real_roots)


def cubic_residual(a3: float, a2: float, a1: float, a0: float, x: float) -> float:
    return float(abs(np.polyval([a3, a2, a1, a0], x)))


__all__ = [
    "gauss_laguerre",
    "upper_incomplete_gamma",
    "upper_incomplete_gamma_integer",
    "upper_incomplete_gamma_array",
    "hyp2f1_series",
    "gauss_2f1",
    "solve_cubic",
    "cubic_residual",
]
