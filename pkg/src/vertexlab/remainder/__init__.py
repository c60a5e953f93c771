"""
Remainder calculus for the Pfaffian and determinant-analogue relations.

The symplectic remainder R_n(I) is an alternating function of the index
list: the closed formula is stated for the interleaving
(i_0, j_0, i_1, j_1, ...) of the even entries i_k and odd entries j_k, and
any other order picks up the sign of the permutation. Lists with repeated
entries have remainder zero.
"""

import logging
import threading
from fractions import Fraction
from math import factorial, prod
from typing import Dict, Sequence, Tuple

from ..arith import leading_ratio_at_infinity, rational_interpolation, sort_with_sign

logger = logging.getLogger(__name__)

_lock = threading.Lock()
_SYM_MEMO: Dict[Tuple[int, ...], Fraction] = {}
_ORTH_MEMO: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Fraction] = {}


def clear_memo() -> None:
    with _lock:
        _SYM_MEMO.clear()
        _ORTH_MEMO.clear()


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def is_balanced(indices: Sequence[int]) -> bool:
    """Equal numbers of even and odd entries."""
    evens = sum(1 for i in indices if i % 2 == 0)
    return 2 * evens == len(indices)


def _check_sym(n: int, indices: Sequence[int]) -> Tuple[int, ...]:
    indices = tuple(indices)
    if n < 1:
        raise ValueError(f"Remainders are defined for n >= 1, got {n}")
    if len(indices) != 2 * n + 2:
        raise ValueError(f"R_{n} needs {2 * n + 2} indices, got {len(indices)}")
    if any(i < 0 for i in indices):
        raise ValueError(f"Indices must be non-negative: {indices}")
    if (n + 1 + sum(indices)) % 2:
        raise ValueError(f"Odd relation weight for {indices}; no remainder is defined")
    return indices


# -- symplectic ----------------------------------------------------------


def _r1_formula(i0: int, i1: int, i2: int, i3: int) -> Fraction:
    s = _sign
    total = (
        Fraction(s(i0 + i2) - s(i1 + i2) - s(i0 + i3) + s(i1 + i3), 1 + i0 + i1)
        + Fraction(-s(i0 + i1) + s(i1 + i2) + s(i0 + i3) - s(i2 + i3), 1 + i0 + i2)
        + Fraction(s(i0 + i1) - s(i0 + i2) - s(i1 + i3) + s(i2 + i3), 1 + i0 + i3)
        + Fraction(-s(i0 + i2) + s(i0 + i1) - s(i1 + i3) + s(i2 + i3), 1 + i1 + i2)
        + Fraction(s(i1 + i2) + s(i0 + i3) - s(i2 + i3) - s(i0 + i1), 1 + i1 + i3)
        + Fraction(-s(i1 + i2) + s(i1 + i3) - s(i0 + i3) + s(i0 + i2), 1 + i2 + i3)
    )
    return total / 4


def r1_sym(indices: Sequence[int]) -> Fraction:
    """
    R_1(I) from the six-fraction base formula.

    Raises:
        ValueError: Unless I has four entries with n + 1 + sum(I) even
    """
    i0, i1, i2, i3 = _check_sym(1, indices)
    return _r1_formula(i0, i1, i2, i3)


def r1_sym_closed(indices: Sequence[int]) -> Fraction:
    """The n = 1 closed expression (2 + sum)(i0 - i1)(j0 - j1) / prod(1 + i + j)."""
    return rn_sym_closed(1, indices)


def _interleave(indices: Tuple[int, ...]) -> Tuple[int, Tuple[int, ...], Tuple[int, ...]]:
    """Sign of the permutation to the interleaved order, evens and odds."""
    evens = sorted(i for i in indices if i % 2 == 0)
    odds = sorted(i for i in indices if i % 2)
    interleaved = [x for pair in zip(evens, odds) for x in pair]
    # sign(perm to interleaved) = sign(perm to sorted) * sign(sorted to interleaved)
    s_in, _ = sort_with_sign(list(indices))
    s_out, _ = sort_with_sign(interleaved)
    return s_in * s_out, tuple(evens), tuple(odds)


def rn_sym_closed(n: int, indices: Sequence[int]) -> Fraction:
    """
    Closed formula for R_n(I).

    n! (n + 1 + sum I) prod_{k<l} (i_k - i_l)(j_k - j_l) / prod_{k,l} (1 + i_k + j_l),
    evaluated on the interleaving and multiplied by the permutation sign.
    Unbalanced lists give zero.
    """
    indices = _check_sym(n, indices)
    if not is_balanced(indices) or len(set(indices)) < len(indices):
        return Fraction(0)
    sign, evens, odds = _interleave(indices)
    numerator = factorial(n) * (n + 1 + sum(indices))
    for k in range(n + 1):
        for l in range(k + 1, n + 1):
            numerator *= (evens[k] - evens[l]) * (odds[k] - odds[l])
    denominator = prod(1 + i + j for i in evens for j in odds)
    return sign * Fraction(numerator, denominator)


def minimal_sym_remainder(n: int) -> Fraction:
    """R_n(0, 1, ..., 2n+1): the remainder of the minimal Pfaffian relation."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    numerator = factorial(n) * (n + 1) ** 2
    for k in range(n + 1):
        for l in range(k + 1, n + 1):
            numerator *= (k - l) ** 2
    denominator = 2 ** n * prod(1 + k + l for k in range(n + 1) for l in range(n + 1))
    return Fraction(numerator, denominator)


def _rn_sym(indices: Tuple[int, ...]) -> Fraction:
    """Alternating extension of R on an arbitrary list."""
    if len(set(indices)) < len(indices) or not is_balanced(indices):
        return Fraction(0)
    sign, key = sort_with_sign(list(indices))
    cached = _SYM_MEMO.get(key)
    if cached is None:
        cached = _rn_sym_sorted(key)
        with _lock:
            _SYM_MEMO[key] = cached
    return sign * cached


def _rn_sym_sorted(indices: Tuple[int, ...]) -> Fraction:
    if len(indices) == 4:
        return _r1_formula(*indices)
    i0 = indices[0]
    total = Fraction(0)
    for r in range(1, len(indices)):
        ir = indices[r]
        rest = indices[1:r] + indices[r + 1:]
        inner = Fraction(0)
        for a, ia in enumerate(rest):
            sub = rest[:a] + (ia + i0 + ir + 1,) + rest[a + 1:]
            value = _rn_sym(sub)
            if value:
                inner += _sign(i0) * value / (i0 + ia + 1)
                inner += _sign(ir + 1) * value / (ir + ia + 1)
        total += _sign(r + 1) * inner
    return -total / 2


def rn_sym_recursive(n: int, indices: Sequence[int]) -> Fraction:
    """
    R_n(I) by the recursion over first-index expansions of the Pfaffian.

    Each step removes i_0 and i_r and raises one remaining entry i_a to
    i_a + i_0 + i_r + 1; sublists with a repeated entry contribute zero.
    """
    indices = _check_sym(n, indices)
    return _rn_sym(indices)


def limit_remainder(n: int, front: Sequence[int]) -> Fraction:
    """
    The x -> infinity limit of R_n(I, x, x+1) over even x.

    R_n(I_x) is a rational function of x with numerator and denominator of
    degree at most 2n+2; it is sampled past max(I), interpolated and the
    leading coefficients divided.

    Args:
        n: At least 2
        front: The 2n entries (i_0, j_0, ..., i_{n-1}, j_{n-1})
    """
    front = tuple(front)
    if n < 2:
        raise ValueError("limit_remainder needs n >= 2")
    if len(front) != 2 * n:
        raise ValueError(f"Expected {2 * n} leading indices, got {len(front)}")
    if (n + sum(front)) % 2:
        raise ValueError(f"Odd relation weight for {front}; no remainder is defined")
    degree = 2 * n + 2
    start = max(front) + 2
    start += start % 2
    samples = []
    for s in range(2 * degree + 2):
        x = start + 2 * s
        samples.append((x, _rn_sym(front + (x, x + 1))))
    numerator, denominator = rational_interpolation(samples, degree)
    return leading_ratio_at_infinity(numerator, denominator)


def constant_term_prediction(n: int, front: Sequence[int]) -> Fraction:
    """n / (n + sum I) * R_{n-1}(I), the predicted value of ``limit_remainder``."""
    front = tuple(front)
    return Fraction(n, n + sum(front)) * _rn_sym(front)


# -- orthogonal ----------------------------------------------------------


def r1_orth(first: Sequence[int], second: Sequence[int]) -> Fraction:
    """Base value R_1(I, J) for two even entries I and two odd entries J."""
    (i0, i1), (j0, j1) = tuple(first), tuple(second)
    return (
        Fraction(1, 1 + i0 + i1)
        + Fraction(1, 2 * (1 + i0 + j0))
        + Fraction(1, 2 * (1 + i1 + j0))
        + Fraction(1, 2 * (1 + i0 + j1))
        + Fraction(1, 2 * (1 + i1 + j1))
        + Fraction(1, 1 + j0 + j1)
    )


def _rn_orth(first: Tuple[int, ...], second: Tuple[int, ...]) -> Fraction:
    key = (tuple(sorted(first)), tuple(sorted(second)))
    cached = _ORTH_MEMO.get(key)
    if cached is not None:
        return cached
    first, second = key
    if len(first) == 2:
        value = r1_orth(first, second)
    else:
        j0 = second[0]
        rest_second = second[1:]
        value = Fraction(0)
        for r, ir in enumerate(first):
            rest_first = first[:r] + first[r + 1:]
            shift = ir + j0 + 1
            for k, ik in enumerate(rest_first):
                sub = _rn_orth(rest_first[:k] + (ik + shift,) + rest_first[k + 1:], rest_second)
                value += _sign(ir) * sub / (ik + ir + 1)
                value += _sign(j0 + 1) * sub / (ik + j0 + 1)
            for l, jl in enumerate(rest_second):
                sub = _rn_orth(rest_first, rest_second[:l] + (jl + shift,) + rest_second[l + 1:])
                value += _sign(ir) * sub / (jl + ir + 1)
                value += _sign(j0 + 1) * sub / (jl + j0 + 1)
    with _lock:
        _ORTH_MEMO[key] = value
    return value


def rn_orth_recursive(n: int, first: Sequence[int], second: Sequence[int]) -> Fraction:
    """
    R_n(I, J) for the determinant analogues, all terms taken positive.

    Args:
        n: Rank, at least 1
        first: n+1 even entries
        second: n+1 odd entries

    Raises:
        ValueError: On wrong lengths or parities
    """
    first, second = tuple(first), tuple(second)
    if n < 1 or len(first) != n + 1 or len(second) != n + 1:
        raise ValueError(f"R_{n}(I, J) needs two lists of {n + 1} entries")
    if any(i % 2 for i in first) or not all(j % 2 for j in second):
        raise ValueError("I must hold even entries and J odd entries")
    return _rn_orth(first, second)


def orth_remainder(n: int, first: Sequence[int], second: Sequence[int]) -> Fraction:
    """Remainder of D_{I,J} as realized in F(n): (-1)^n R_n(I, J) / 2^(n-1)."""
    return _sign(n) * rn_orth_recursive(n, first, second) / 2 ** (n - 1)


__all__ = [
    "clear_memo",
    "constant_term_prediction",
    "is_balanced",
    "limit_remainder",
    "minimal_sym_remainder",
    "orth_remainder",
    "r1_orth",
    "r1_sym",
    "r1_sym_closed",
    "rn_orth_recursive",
    "rn_sym_closed",
    "rn_sym_recursive",
]
