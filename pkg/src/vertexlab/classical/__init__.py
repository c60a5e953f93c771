"""
Classical invariant theory: polynomials in the quadratics Q_{a,b}.

The classical relations among the Q_{a,b} are the Pfaffians p_I (symplectic),
the determinant analogues d_{I,J} (orthogonal) and the weight 16 relation of
the orthosymplectic case. ``eval_classical`` substitutes the realization
symbols and is the oracle for kernel membership.
"""

import logging
from collections import Counter
from fractions import Fraction
from typing import Dict, NamedTuple, Sequence

from ..arith import add_scaled
from ..freefield import VPoly
from ..freefield.engine import Element, Word
from ..freefield.fields import sort_monomial
from ..freefield.poly import Poly
from ..wbasis.omega import Omega

logger = logging.getLogger(__name__)


class QVar(NamedTuple):
    """The indeterminate Q_{a,b} with a < b."""

    a: int
    b: int

    @property
    def is_odd(self) -> bool:
        return False

    @property
    def weight2(self) -> int:
        return 2 * (self.a + self.b + 1)

    def token(self) -> str:
        return f"Q({self.a},{self.b})"

    def to_omega(self) -> Omega:
        return Omega(self.a + self.b, self.a)


class QPoly(Poly):
    """Commutative polynomial in the Q_{a,b}; monomials are sorted QVar tuples."""

    __slots__ = ()

    @classmethod
    def q(cls, a: int, b: int, coeff=1) -> "QPoly":
        if a < 0 or b < 0:
            raise ValueError(f"Q indices must be non-negative, got ({a}, {b})")
        if a == b:
            return cls.zero()
        if a > b:
            return cls({(QVar(b, a),): -Fraction(coeff)})
        return cls({(QVar(a, b),): coeff})

    @staticmethod
    def format_word(word: Word) -> str:
        if not word:
            return "1"
        return "".join(v.token() for v in word)

    def multiply(self, other: "QPoly") -> "QPoly":
        self._check(other)
        result: Element = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                _, word = sort_monomial(wa + wb)
                add_scaled(result, {word: ca * cb})
        return self._wrap(result)

    def indices(self) -> set:
        return {i for word in self.terms for v in word for i in (v.a, v.b)}


def q(a: int, b: int, coeff=1) -> QPoly:
    """Q_{a,b}, normalized by antisymmetry."""
    return QPoly.q(a, b, coeff)


def pfaffian(indices: Sequence[int], n: int) -> QPoly:
    """
    The degree n+1 Pfaffian p_I.

    Expanded along the first index:
    p_I = sum_r (-1)^(r+1) Q_{i_0,i_r} p_{I minus {i_0, i_r}}.

    Args:
        indices: Strictly increasing list of 2n+2 indices
        n: Rank of the symplectic family

    Raises:
        ValueError: On a wrong length or a repeated/unsorted index
    """
    indices = tuple(indices)
    if len(indices) != 2 * n + 2:
        raise ValueError(f"pfaffian needs {2 * n + 2} indices, got {len(indices)}")
    if any(x >= y for x, y in zip(indices, indices[1:])):
        raise ValueError(f"pfaffian indices must be strictly increasing: {indices}")
    return _pfaffian(indices)


def _pfaffian(indices: tuple) -> QPoly:
    if len(indices) == 2:
        return q(indices[0], indices[1])
    head = indices[0]
    result = QPoly.zero()
    for r in range(1, len(indices)):
        rest = indices[1:r] + indices[r + 1:]
        term = q(head, indices[r]).multiply(_pfaffian(rest))
        result = result + term if r % 2 else result - term
    return result


def det_analog(first: Sequence[int], second: Sequence[int], n: int) -> QPoly:
    """
    The orthogonal relation d_{I,J}: a determinant expansion with all plus signs.

    d_{I,J} = sum_r Q_{i_r,j_0} d_{I minus i_r, J minus j_0}, with d = Q_{i_0,j_0}
    for single-entry lists. The result may be zero.

    Raises:
        ValueError: If either list does not have n+1 entries
    """
    first, second = tuple(first), tuple(second)
    if len(first) != n + 1 or len(second) != n + 1:
        raise ValueError(f"det_analog needs two lists of {n + 1} indices")
    return _det_analog(first, second)


def _det_analog(first: tuple, second: tuple) -> QPoly:
    if len(first) == 1:
        return q(first[0], second[0])
    result = QPoly.zero()
    rest_second = second[1:]
    for r, i in enumerate(first):
        rest_first = first[:r] + first[r + 1:]
        result = result + q(i, second[0]).multiply(_det_analog(rest_first, rest_second))
    return result


def det_analog_nontrivial(first: Sequence[int], second: Sequence[int], n: int) -> bool:
    """False when some index occurs more than n+1 times in I and J together."""
    counts = Counter(list(first) + list(second))
    return max(counts.values(), default=0) <= n + 1


def sergeev_minimal() -> QPoly:
    """The degree 4 relation of minimal weight for Osp(1,2)."""
    terms = [
        (1, [(0, 1), (0, 1), (2, 3), (2, 3)]),
        (1, [(0, 2), (0, 2), (1, 3), (1, 3)]),
        (1, [(0, 3), (0, 3), (1, 2), (1, 2)]),
        (-2, [(0, 2), (0, 3), (1, 2), (1, 3)]),
        (2, [(0, 1), (0, 3), (1, 2), (2, 3)]),
        (-2, [(0, 1), (0, 2), (1, 3), (2, 3)]),
    ]
    return QPoly({tuple(sorted(QVar(a, b) for a, b in pairs)): c for c, pairs in terms})


def eval_classical(p: QPoly, family, bound: int) -> VPoly:
    """
    Image of p in the (super)symmetric algebra on the truncated jet variables.

    Each Q_{a,b} goes to the symbol of the family's realization of
    Omega_{a,b}; products are supercommutative.

    Args:
        p: Classical polynomial
        family: A realization family
        bound: Truncation K; derivative orders above K are not available

    Raises:
        ValueError: If an index of p exceeds the truncation bound
    """
    used = p.indices()
    if used and max(used) > bound:
        raise ValueError(f"Index {max(used)} exceeds the truncation bound {bound}")
    result: Dict = {}
    for word, coeff in p.terms.items():
        add_scaled(result, family.symbol(tuple(v.to_omega() for v in word)), coeff)
    return VPoly._wrap(result)


__all__ = [
    "QPoly",
    "QVar",
    "det_analog",
    "det_analog_nontrivial",
    "eval_classical",
    "pfaffian",
    "q",
    "sergeev_minimal",
]
