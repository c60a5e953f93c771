"""
The weighted-derivation action of the positive modes on relation indices.

The mode Omega_{a,b}(a+b-w) sends d^l beta to lambda_{a,b,w,l} d^{l+w} beta
(and likewise gamma and phi). On index lists of relations it acts by
raising one slot at a time.
"""

from fractions import Fraction
from math import factorial
from typing import Dict, Sequence, Tuple

from ..arith import RationalMatrix, add_scaled, solve_linear, solve_sparse, sort_with_sign
from ..freefield import circle
from .families import BaseFamily
from .omega import WPoly, am_basis


def _inverse_factorial(k: int) -> Fraction:
    if k < 0:
        return Fraction(0)
    return Fraction(1, factorial(k))


def pplus_lambda(a: int, b: int, w: int, l: int) -> Fraction:
    """
    lambda_{a,b,w,l}; reciprocal factorials of negative integers are zero.
    """
    if l + w - a < 0:
        return Fraction(0)
    first = (-1) ** (b + 1) * factorial(b + l) * _inverse_factorial(l + w - a) / 2
    second = (-1) ** (a + 1) * factorial(a + l) * _inverse_factorial(l + w - b) / 2
    return first - second


def pplus_act_indices(op: Tuple[int, int, int], indices: Sequence[int]) -> Dict[Tuple[int, ...], Fraction]:
    """
    Act on a strictly increasing index list I by raising one slot.

    Each slot i_r goes to i_r + w with weight lambda_{a,b,w,i_r}, the new
    list is re-sorted with the sign of the permutation, and a raised entry
    that collides with an existing one contributes nothing.
    """
    a, b, w = op
    result: Dict[Tuple[int, ...], Fraction] = {}
    present = set(indices)
    for r, i in enumerate(indices):
        raised = i + w
        if raised in present:
            continue
        coeff = pplus_lambda(a, b, w, i)
        if not coeff:
            continue
        sign, key = sort_with_sign(list(indices[:r]) + [raised] + list(indices[r + 1:]))
        add_scaled(result, {key: Fraction(sign)}, coeff)
    return result


def pplus_act_orth(
    op: Tuple[int, int, int], first: Sequence[int], second: Sequence[int]
) -> Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Fraction]:
    """The (I, J) variant for the orthogonal family: no signs, collisions allowed."""
    a, b, w = op
    result: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Fraction] = {}
    for r, i in enumerate(first):
        coeff = pplus_lambda(a, b, w, i)
        if coeff:
            raised = tuple(sorted(list(first[:r]) + [i + w] + list(first[r + 1:])))
            add_scaled(result, {(raised, tuple(second)): Fraction(1)}, coeff)
    for r, j in enumerate(second):
        coeff = pplus_lambda(a, b, w, j)
        if coeff:
            raised = tuple(sorted(list(second[:r]) + [j + w] + list(second[r + 1:])))
            add_scaled(result, {(tuple(first), raised): Fraction(1)}, coeff)
    return result


def mw_matrix(m: int, w: int) -> RationalMatrix:
    """
    The (m+1)x(m+1) matrix with entries lambda_{0, 2k_j+1, w, i}.

    k_j = j + w/2 for even w and j + (w-1)/2 for odd w.
    """
    if m < 0 or w < 1:
        raise ValueError(f"mw_matrix needs m >= 0 and w >= 1, got ({m}, {w})")
    shift = w // 2
    return RationalMatrix([
        [pplus_lambda(0, 2 * (j + shift) + 1, w, i) for j in range(m + 1)]
        for i in range(m + 1)
    ])


def express_weight_map(target: Sequence[Fraction], w: int) -> Tuple[Fraction, ...]:
    """
    Coefficients t with M^w t = target.

    The combination sum_j t_j w^{2k_j+1}(...) acts on beta_0..beta_m as the
    weight-w map beta_i -> target_i beta_{i+w}.
    """
    matrix = mw_matrix(len(target) - 1, w)
    return solve_linear(matrix, list(target)).particular


def raising_residual(family: BaseFamily, m: int) -> Tuple[Fraction, WPoly]:
    """
    Decompose w^3 (1) w^{2m+1} in the realization.

    Returns:
        (coefficient of W^{2m+3}, the remaining combination of d^{2k} W^{2m+3-2k}, k >= 1)
    """
    product = circle(family.w(3), 1, family.w(2 * m + 1))
    top = 2 * m + 3
    basis = am_basis(top)
    columns = {}
    for s, (j, k) in enumerate(basis):
        element = WPoly.w(j, k)
        columns[s] = family.realize(element).terms
    solution = solve_sparse(columns, product.terms)
    if solution is None:
        raise ValueError(f"w3(1)w{2 * m + 1} does not lie in A_{top} for {family.name}")
    residual = WPoly.zero()
    for s, coeff in solution.items():
        if s:
            j, k = basis[s]
            residual = residual + WPoly.w(j, k, coeff)
    return solution.get(0, Fraction(0)), residual
