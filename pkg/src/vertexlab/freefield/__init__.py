"""
OPE engine for the free field algebras S(n), F(n) and S(n) tensor F(1).
"""

import logging
from typing import Optional

from .engine import EngineError, WickEngine, word_parity, word_weight2
from .fields import BETA, GAMMA, PHI, FreeFieldEngine, GenSym, beta, gamma, phi, sort_monomial
from .poly import OpeTable, Poly, VPoly, supercommutative_product as _product

logger = logging.getLogger(__name__)

_engine: Optional[FreeFieldEngine] = None


def get_engine() -> FreeFieldEngine:
    """Return the shared free field engine, creating it on first use."""
    global _engine
    if _engine is None:
        _engine = FreeFieldEngine()
    return _engine


def configure_engine(memo_limit: int) -> FreeFieldEngine:
    """Replace the shared engine with one using the given memo budget."""
    global _engine
    _engine = FreeFieldEngine(memo_limit=memo_limit)
    logger.debug("Free field engine reset with memo_limit=%d", memo_limit)
    return _engine


def circle(a: VPoly, n: int, b: VPoly) -> VPoly:
    """The n-th circle product a(n)b."""
    return VPoly._wrap(get_engine().circle(a.terms, n, b.terms))


def wick(a: VPoly, b: VPoly) -> VPoly:
    """Wick product :ab:, the (-1)-st circle product."""
    return circle(a, -1, b)


def wick_all(*factors: VPoly) -> VPoly:
    """Right-nested iterated Wick product :a1 :a2 ... ak::."""
    result = VPoly.one()
    for factor in reversed(factors):
        result = wick(factor, result)
    return result


def derive(a: VPoly, times: int = 1) -> VPoly:
    return VPoly._wrap(get_engine().derive(a.terms, times))


def parity(a: VPoly) -> int:
    """Parity of a homogeneous element (0 for zero)."""
    parities = {word_parity(w) for w in a.terms}
    if len(parities) > 1:
        raise EngineError("Element mixes even and odd terms")
    return parities.pop() if parities else 0


def ope_all(a: VPoly, b: VPoly) -> OpeTable:
    """All non-negative circle products of a with b."""
    if not a or not b:
        return OpeTable({})
    top_a = max(word_weight2(w) for w in a.terms)
    top_b = max(word_weight2(w) for w in b.terms)
    bound = (top_a + top_b - 2) // 2
    return OpeTable({n: circle(a, n, b) for n in range(bound + 1)})


def supercommutative_product(a: VPoly, b: VPoly) -> VPoly:
    return VPoly._wrap(_product(a.terms, b.terms))


def generator(g: GenSym, coeff=1) -> VPoly:
    return VPoly.generator(g, coeff)


__all__ = [
    "BETA", "GAMMA", "PHI",
    "EngineError",
    "FreeFieldEngine",
    "GenSym",
    "OpeTable",
    "Poly",
    "VPoly",
    "WickEngine",
    "beta", "gamma", "phi",
    "circle", "wick", "wick_all", "derive", "ope_all", "parity",
    "configure_engine", "get_engine", "generator",
    "sort_monomial", "supercommutative_product",
]
