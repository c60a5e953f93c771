"""
The vacuum module M^+_c as an abstract vertex algebra on the Omegas.

Circle products of two generators are family independent up to the
central term: the linear part is read off the beta-gamma realization S(1)
and the vacuum coefficient scales with c (S(1) has c = -1).
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

from ..arith import add_scaled, to_rational
from ..freefield import get_engine
from ..freefield.engine import EngineError, Element, Linear, WickEngine, Word
from ..freefield.fields import BETA, GAMMA
from .families import get_family
from .omega import Omega, WPoly, derive_omega, omega

logger = logging.getLogger(__name__)

# (g, j, x) -> (linear part, vacuum coefficient in S(1))
_OPE_TABLE: Dict[Tuple[Omega, int, Omega], Tuple[Linear, Fraction]] = {}


def generator_product(g: Omega, j: int, x: Omega) -> Tuple[Linear, Fraction]:
    """
    ``g_(j) x`` in S(1), split into an Omega combination and a vacuum coefficient.

    Raises:
        EngineError: If the bilinear part is not antisymmetric, i.e. not a
            combination of Omegas
    """
    key = (g, j, x)
    cached = _OPE_TABLE.get(key)
    if cached is not None:
        return cached
    s1 = get_family("sp", 1)
    product = get_engine().circle(s1.image(g), j, s1.image(x))

    pairs: Dict[Tuple[int, int], Fraction] = {}
    const = Fraction(0)
    for word, coeff in product.items():
        if not word:
            const = coeff
        elif len(word) == 2 and word[0].kind == BETA and word[1].kind == GAMMA:
            pairs[(word[0].deriv, word[1].deriv)] = coeff
        else:
            raise EngineError(f"Unexpected term {word} in {g}({j}){x}")

    lin: Linear = {}
    for (p, q), s in pairs.items():
        if pairs.get((q, p), 0) != -s:
            raise EngineError(f"{g}({j}){x} is not a combination of Omegas")
        if p < q:
            add_scaled(lin, omega(p, q), 2 * s)
    _OPE_TABLE[key] = (lin, const)
    return lin, const


class WAlgebraEngine(WickEngine):
    """Normal ordering in M^+_c on canonical words of Omegas."""

    name = "walgebra"

    def __init__(self, central_charge: Fraction, memo_limit: int = 2_000_000):
        super().__init__(memo_limit=memo_limit)
        self.central_charge = central_charge

    def generator_ope(self, g: Omega, j: int, x: Omega) -> Tuple[Linear, Fraction]:
        lin, const = generator_product(g, j, x)
        # S(1) has c = -1
        return lin, -self.central_charge * const

    def derive_generator(self, g: Omega) -> Linear:
        return derive_omega(g)


class WAlgebra:
    """WPoly-level operations in M^+_c."""

    def __init__(self, central_charge: Fraction, memo_limit: int = 2_000_000):
        self.central_charge = central_charge
        self.engine = WAlgebraEngine(central_charge, memo_limit=memo_limit)

    def __repr__(self) -> str:
        return f"WAlgebra(c={self.central_charge})"

    def circle(self, a: WPoly, n: int, b: WPoly) -> WPoly:
        return WPoly._wrap(self.engine.circle(a.terms, n, b.terms))

    def wick(self, a: WPoly, b: WPoly) -> WPoly:
        return self.circle(a, -1, b)

    def derive(self, a: WPoly, times: int = 1) -> WPoly:
        return WPoly._wrap(self.engine.derive(a.terms, times))

    def wick_all(self, *factors: WPoly) -> WPoly:
        """Right-nested :f1 :f2 ... fk::."""
        result = WPoly.one()
        for factor in reversed(factors):
            result = self.wick(factor, result)
        return result

    def canonicalize(self, ordered: Dict[Word, Fraction]) -> WPoly:
        """
        Rewrite right-nested products written in any factor order in the canonical basis.

        Args:
            ordered: Map from Omega sequences (any order) to coefficients
        """
        result: Element = {}
        for word, coeff in ordered.items():
            add_scaled(result, self.engine.order_word(tuple(word)), to_rational(coeff))
        return WPoly._wrap(result)


@lru_cache(maxsize=None)
def walgebra(central_charge) -> WAlgebra:
    """Shared M^+_c instance for a central charge."""
    return WAlgebra(to_rational(central_charge))
