"""
The generators Omega_{a,b} of the vacuum module and the spaces A_m.

``Omega(m, a)`` stands for Omega_{a, m-a} with ``a < m - a``. Ordering by
``(m, a)`` is the canonical word order. The odd generators are
``W^m = Omega_{0,m}``, and every ``d^k W^j`` is a combination of Omegas:

    d Omega_{a,b} = Omega_{a+1,b} + Omega_{a,b+1},    Omega_{b,a} = -Omega_{a,b}
"""

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, NamedTuple, Tuple

from ..arith import RationalMatrix, add_scaled, solve_linear
from ..freefield.engine import EngineError
from ..freefield.poly import Poly

ONE = Fraction(1)


class Omega(NamedTuple):
    """Omega_{a,b} with b = m - a > a."""

    m: int
    a: int

    @property
    def b(self) -> int:
        return self.m - self.a

    @property
    def is_odd(self) -> bool:
        return False

    @property
    def weight2(self) -> int:
        return 2 * (self.m + 1)

    @property
    def weight(self) -> int:
        return self.m + 1

    def token(self) -> str:
        return f"Om{self.a},{self.b}"


def omega(a: int, b: int) -> Dict[Omega, Fraction]:
    """Omega_{a,b} as a normalized linear combination (antisymmetry applied)."""
    if a < 0 or b < 0:
        raise ValueError(f"Omega indices must be non-negative, got ({a}, {b})")
    if a == b:
        return {}
    if a > b:
        return {Omega(a + b, b): -ONE}
    return {Omega(a + b, a): ONE}


def derive_omega(g: Omega) -> Dict[Omega, Fraction]:
    result = dict(omega(g.a + 1, g.b))
    add_scaled(result, omega(g.a, g.b + 1))
    return result


def w_generator(m: int) -> Omega:
    """W^m for odd m."""
    if m < 1 or m % 2 == 0:
        raise ValueError(f"W^m needs an odd positive index, got {m}")
    return Omega(m, 0)


@lru_cache(maxsize=None)
def derived_w(j: int, k: int) -> Tuple[Tuple[Omega, Fraction], ...]:
    """d^k W^j = sum_t C(k,t) Omega_{t, j+k-t}, as sorted (Omega, coeff) pairs."""
    result: Dict[Omega, Fraction] = {}
    for t in range(k + 1):
        add_scaled(result, omega(t, j + k - t), Fraction(comb(k, t)))
    return tuple(sorted(result.items()))


def am_dimension(m: int) -> int:
    return (m + 1) // 2


def am_basis(m: int) -> List[Tuple[int, int]]:
    """
    Basis of A_m as ``(j, k)`` pairs meaning d^k W^j.

    The first entry is W^m itself when m is odd.
    """
    if m < 1:
        return []
    if m % 2:
        return [(m - 2 * i, 2 * i) for i in range((m + 1) // 2)]
    return [(m - 1 - 2 * i, 2 * i + 1) for i in range(m // 2)]


def am_generators(m: int) -> List[Omega]:
    """The Omegas spanning A_m, in canonical order."""
    return [Omega(m, a) for a in range((m + 1) // 2)]


@lru_cache(maxsize=None)
def _coordinate_table(m: int) -> Dict[Omega, Tuple[Fraction, ...]]:
    gens = am_generators(m)
    basis = am_basis(m)
    index = {g: i for i, g in enumerate(gens)}
    # column s holds the Omega expansion of basis element s
    rows = [[Fraction(0)] * len(basis) for _ in gens]
    for s, (j, k) in enumerate(basis):
        for g, c in derived_w(j, k):
            rows[index[g]][s] = c
    matrix = RationalMatrix(rows)
    table = {}
    for g in gens:
        unit = [1 if h == g else 0 for h in gens]
        solution = solve_linear(matrix, unit)
        if solution.nullspace:
            raise EngineError(f"Derivative basis of A_{m} is degenerate")
        table[g] = solution.particular
    return table


def omega_coords(a: int, b: int) -> Tuple[Fraction, ...]:
    """
    Coordinates of Omega_{a,b} in ``am_basis(a + b)``.

    Raises:
        ValueError: Unless 0 <= a < b
    """
    if not 0 <= a < b:
        raise ValueError(f"omega_coords needs 0 <= a < b, got ({a}, {b})")
    return _coordinate_table(a + b)[Omega(a + b, a)]


def generator_coords(g: Omega) -> Dict[Tuple[int, int], Fraction]:
    """Nonzero coordinates of one generator as ``{(j, k): coeff}``."""
    coords = _coordinate_table(g.m)[g]
    return {jk: c for jk, c in zip(am_basis(g.m), coords) if c}


class WPoly(Poly):
    """Element of the vacuum module: words of ``Omega`` generators."""

    __slots__ = ()

    @classmethod
    def omega(cls, a: int, b: int, coeff=1) -> "WPoly":
        return cls({(g,): c * coeff for g, c in omega(a, b).items()})

    @classmethod
    def w(cls, m: int, deriv: int = 0, coeff=1) -> "WPoly":
        """d^deriv W^m."""
        w_generator(m)
        return cls({(g,): c * coeff for g, c in derived_w(m, deriv)})


def pr(m: int, x: WPoly) -> Fraction:
    """
    Coefficient of W^m in the A_m-basis expansion of x.

    Args:
        m: Odd index
        x: Combination of single Omegas with a + b == m

    Raises:
        ValueError: If m is not odd and positive
        EngineError: If x has a term outside A_m
    """
    if m < 1 or m % 2 == 0:
        raise ValueError(f"pr_m is defined for odd m, got {m}")
    total = Fraction(0)
    table = _coordinate_table(m)
    for word, coeff in x.terms.items():
        if len(word) != 1 or word[0].m != m:
            raise EngineError(f"Term {word} does not lie in A_{m}")
        total += coeff * table[word[0]][0]
    return total


def a_component(x: WPoly) -> Dict[Tuple[int, int], Fraction]:
    """Expand the degree-1 part of x in the d^k W^j basis."""
    result: Dict[Tuple[int, int], Fraction] = {}
    for word, coeff in x.terms.items():
        if len(word) == 1:
            add_scaled(result, generator_coords(word[0]), coeff)
    return result
