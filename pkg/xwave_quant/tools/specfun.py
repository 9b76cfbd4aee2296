"""
Special functions and quadrature rules used by the X-wave basis.
"""

import logging
import math
from typing import Callable, Union

import numpy as np
from scipy import special

from ..errors import DomainError, NumericError, UnsupportedOrderError
from ..models.basis import QuadratureKind, QuadratureRule

logger = logging.getLogger("xwave_quant.tools.specfun")

LAGUERRE_MAX_ORDER = 200

ArrayLike = Union[float, np.ndarray]


def bessel_j0(x: ArrayLike) -> ArrayLike:
    """Bessel function of the first kind, order zero, for real arguments."""
    values = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError("bessel_j0 requires finite arguments")
    result = special.j0(values)
    return float(result) if result.ndim == 0 else result


def _check_order(p: int, a: int) -> None:
    if int(p) != p or p < 0:
        raise DomainError(f"Laguerre order must be a non-negative integer, got {p}")
    if int(a) != a or a < 0:
        raise DomainError(f"Laguerre parameter must be a non-negative integer, got {a}")
    if p > LAGUERRE_MAX_ORDER:
        raise UnsupportedOrderError(f"Laguerre order {p} exceeds the supported maximum {LAGUERRE_MAX_ORDER}")


def laguerre_table(p_max: int, a: int, x: ArrayLike) -> np.ndarray:
    """
    Generalized Laguerre polynomials L_0^(a) .. L_pmax^(a) at x.

    Returns an array of shape (p_max + 1,) + shape(x). Uses the three-term
    recurrence, which is stable in the forward direction for x >= 0.
    """
    _check_order(p_max, a)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("Laguerre polynomials require finite arguments")

    table = np.empty((p_max + 1,) + x.shape)
    table[0] = 1.0
    if p_max >= 1:
        table[1] = 1.0 + a - x
    for k in range(1, p_max):
        table[k + 1] = ((2 * k + 1 + a - x) * table[k] - (k + a) * table[k - 1]) / (k + 1)
    return table


def laguerre_gen(p: int, a: int, x: ArrayLike) -> ArrayLike:
    """Generalized Laguerre polynomial L_p^(a)(x)."""
    value = laguerre_table(p, a, x)[p]
    return float(value) if value.ndim == 0 else value


def gauss_legendre(n: int, lower: float, upper: float) -> QuadratureRule:
    """n-point Gauss-Legendre rule mapped onto [lower, upper]."""
    if n < 1 or not upper > lower:
        raise DomainError(f"invalid Gauss-Legendre rule: n={n}, interval=[{lower}, {upper}]")
    x, w = special.roots_legendre(n)
    half = 0.5 * (upper - lower)
    return QuadratureRule(
        kind=QuadratureKind.GAUSS_LEGENDRE,
        order=n,
        nodes=lower + half * (x + 1.0),
        weights=half * w,
        lower=lower,
        upper=upper,
    )


def gauss_laguerre(n: int, scale: float = 1.0) -> QuadratureRule:
    """
    n-point Gauss-Laguerre rule for integrals of f(alpha) over [0, inf).

    Nodes are x_i / scale, so the rule is exact for polynomials times
    exp(-scale * alpha). The factor exp(x_i) is folded into the weights.
    Nodes whose classical weight underflows are dropped.
    """
    if n < 1 or not scale > 0:
        raise DomainError(f"invalid Gauss-Laguerre rule: n={n}, scale={scale}")
    x, w = special.roots_laguerre(n)
    keep = w > 0
    x, w = x[keep], w[keep]
    if keep.sum() < n:
        logger.debug("Gauss-Laguerre n=%d: dropped %d underflowing nodes", n, n - keep.sum())
    return QuadratureRule(
        kind=QuadratureKind.GAUSS_LAGUERRE,
        order=n,
        nodes=x / scale,
        weights=np.exp(np.log(w) + x) / scale,
        lower=0.0,
        upper=math.inf,
        scale=scale,
    )


def trapezoid_rule(lower: float, upper: float, n: int) -> QuadratureRule:
    """Composite trapezoid rule on n uniform points."""
    if n < 2 or not upper > lower:
        raise DomainError(f"invalid trapezoid rule: n={n}, interval=[{lower}, {upper}]")
    nodes = np.linspace(lower, upper, n)
    weights = np.full(n, (upper - lower) / (n - 1))
    weights[[0, -1]] *= 0.5
    return QuadratureRule(
        kind=QuadratureKind.TRAPEZOID, order=n, nodes=nodes, weights=weights, lower=lower, upper=upper
    )


def trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    """Trapezoid weights for an arbitrary increasing grid."""
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2:
        raise DomainError("trapezoid weights need at least two grid points")
    spacing = np.diff(grid)
    weights = np.zeros_like(grid)
    weights[:-1] += 0.5 * spacing
    weights[1:] += 0.5 * spacing
    return weights


def refine_rule(rule: QuadratureRule) -> QuadratureRule:
    """Same family and interval with half as many nodes again."""
    order = rule.order + max(rule.order // 2, 1)
    if rule.kind == QuadratureKind.GAUSS_LEGENDRE:
        return gauss_legendre(order, rule.lower, rule.upper)
    if rule.kind == QuadratureKind.GAUSS_LAGUERRE:
        return gauss_laguerre(order, rule.scale)
    return trapezoid_rule(rule.lower, rule.upper, 2 * rule.order - 1)


def _evaluate_at_nodes(f: Callable, nodes: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(f(nodes), dtype=complex)
        if values.shape == nodes.shape:
            return values
    except (TypeError, ValueError):
        pass
    return np.array([complex(f(x)) for x in nodes])


def integrate(f: Callable[[np.ndarray], np.ndarray], rule: QuadratureRule) -> complex:
    """
    Apply a quadrature rule to f.

    f may be vectorized or scalar. The weighted sum uses exactly rounded
    summation so the result does not depend on node order.
    """
    values = _evaluate_at_nodes(f, rule.nodes)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        index = int(bad[0])
        raise NumericError(
            f"integrand is not finite at node {index} (x={rule.nodes[index]!r})", node_index=index
        )
    terms = rule.weights * values
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def laplace_hankel_j0(s: ArrayLike, b: ArrayLike) -> ArrayLike:
    """
    Closed form of the integral of alpha * exp(-s alpha) * J0(b alpha) over [0, inf).

    Valid for Re(s) > 0; the principal branch of the square root is continuous
    there.
    """
    s = np.asarray(s, dtype=complex)
    if np.any(s.real <= 0):
        raise DomainError("laplace_hankel_j0 requires Re(s) > 0")
    root = np.sqrt(s * s + np.asarray(b, dtype=float) ** 2)
    return s / root**3
