"""
Decoupling relations W^m = (normally ordered polynomial in lower generators).

The first one comes from the minimal relation divided by its remainder.
Higher ones come from acting with W^3 (1) on the previous relation: a
nonzero W^{m+2} coefficient there means W^{m+2} decouples as well, and its
expression through the minimal generators is solved for exactly.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Set, Tuple

from ..arith import solve_sparse
from ..freefield import VPoly, wick_all as ff_wick_all
from ..wbasis import BaseFamily, WPoly, a_component, get_family, walgebra
from ..wbasis.walgebra import WAlgebra

logger = logging.getLogger(__name__)

Monomial = Tuple[Tuple[int, int], ...]


class DecouplingError(ValueError):
    """No decoupling can be produced from the given input."""


@dataclass(frozen=True)
class Decoupling:
    """W^m expressed through lower generators: ``relation() = W^m - expression``."""

    family: str
    n: int
    m: int
    expression: WPoly

    def relation(self) -> WPoly:
        return WPoly.w(self.m) - self.expression


def _verify(family: BaseFamily, decoupling: Decoupling, threads: int = 1) -> None:
    if family.realize(decoupling.relation(), threads=threads):
        raise DecouplingError(f"W^{decoupling.m} decoupling does not vanish in {family.name}")


def extract_decoupling(result, family: Optional[BaseFamily] = None, threads: int = 1) -> Decoupling:
    """
    Solve a relation with nonzero remainder for its top generator.

    Args:
        result: A RelationResult of even weight
        family: The realization to check against (defaults to the result's)

    Raises:
        DecouplingError: On a zero or undefined remainder, or a failed check
    """
    family = family or get_family(result.family, result.n)
    if (family.key, family.n) != (result.family, result.n):
        raise DecouplingError(f"Relation for {result.family}({result.n}) checked against {family.name}")
    if not result.remainder:
        raise DecouplingError(f"No decoupling at weight {result.weight}: remainder is zero")
    m = result.top_index
    expression = WPoly.w(m) - result.relation / result.remainder
    decoupling = Decoupling(family=family.key, n=family.n, m=m, expression=expression)
    _verify(family, decoupling, threads)
    logger.info("Decoupled W^%d in %s (%d terms)", m, family.name, len(expression))
    return decoupling


def kept_monomials(generators: Iterable[int], weight: int) -> Iterator[Monomial]:
    """
    Normally ordered monomials in the d^k W^j, j in ``generators``, of the given weight.

    A monomial is a nondecreasing tuple of ``(j, k)`` pairs read as the
    right-nested product :d^k1 W^j1 :d^k2 W^j2 ...::.
    """
    factors = sorted((j, k) for j in generators for k in range(max(weight - j, 0)))

    def extend(start: int, remaining: int, prefix: Tuple[Tuple[int, int], ...]) -> Iterator[Monomial]:
        if remaining == 0:
            yield prefix
            return
        for i in range(start, len(factors)):
            j, k = factors[i]
            if j + 1 + k <= remaining:
                yield from extend(i, remaining - j - 1 - k, prefix + ((j, k),))

    if weight > 0:
        yield from extend(0, weight, ())


def _monomial(algebra: WAlgebra, monomial: Monomial) -> WPoly:
    return algebra.wick_all(*[WPoly.w(j, k) for j, k in monomial])


def _eliminate(
    family: BaseFamily,
    algebra: WAlgebra,
    target: int,
    keep: Set[int],
    threads: int = 1,
) -> WPoly:
    """
    Express W^target through the kept generators.

    Every monomial of weight target + 1 in the kept generators is realized
    and the realization of W^target is solved for exactly over them.

    Raises:
        DecouplingError: If W^target is not in the span
    """
    generators = sorted(keep - {target})
    images: Dict[Tuple[int, int], VPoly] = {}

    def image(j: int, k: int) -> VPoly:
        if (j, k) not in images:
            images[(j, k)] = family.realize(WPoly.w(j, k), threads=threads)
        return images[(j, k)]

    columns = {}
    for monomial in kept_monomials(generators, target + 1):
        realized = ff_wick_all(*[image(j, k) for j, k in monomial])
        if realized:
            columns[monomial] = realized.terms
    logger.debug("Solving W^%d over %d monomials in %s", target, len(columns), family.name)
    solution = solve_sparse(columns, family.realize(WPoly.w(target)).terms)
    if solution is None:
        raise DecouplingError(f"W^{target} is not generated by W^{generators} in {family.name}")
    expression = WPoly.zero()
    for monomial, coeff in sorted(solution.items()):
        expression = expression + _monomial(algebra, monomial) * coeff
    return expression


def raise_decoupling(
    decoupling: Decoupling,
    family: Optional[BaseFamily] = None,
    known: Optional[Dict[int, Decoupling]] = None,
    threads: int = 1,
) -> Decoupling:
    """
    The decoupling of W^{m+2} from that of W^m.

    Applies W^3 (1) to the relation. The W^{m+2} coefficient of the result
    does not change under substitution of the known decouplings, so it must
    be nonzero for the next generator to decouple. The decoupled generator is
    then written through the minimal generators by an exact solve in the
    realization.

    Args:
        decoupling: Decoupling of W^m
        family: Realization family (defaults to the decoupling's)
        known: Decouplings of the generators between the first decoupled one and m

    Raises:
        DecouplingError: On a missing prerequisite, an input that does not
            vanish, a vanishing target coefficient, or a failed check
    """
    family = family or get_family(decoupling.family, decoupling.n)
    if (family.key, family.n) != (decoupling.family, decoupling.n):
        raise DecouplingError(f"Decoupling for {decoupling.family}({decoupling.n}) used with {family.name}")
    known = dict(known or {})
    known[decoupling.m] = decoupling
    for j in range(family.first_decoupled(), decoupling.m, 2):
        if j not in known:
            raise DecouplingError(f"Missing decoupling for W^{j} in {family.name}")

    _verify(family, decoupling, threads)

    target = decoupling.m + 2
    keep = set(family.minimal_generators()) | {target}
    algebra = walgebra(family.central_charge)
    current = algebra.circle(WPoly.w(3), 1, decoupling.relation())
    lead = a_component(current).get((target, 0), Fraction(0))
    if not lead:
        raise DecouplingError(f"W^{target} drops out after raising in {family.name}")
    logger.debug("W^3 (1) W^%d carries W^%d with coefficient %s", decoupling.m, target, lead)

    expression = _eliminate(family, algebra, target, keep, threads)
    raised = Decoupling(family=family.key, n=family.n, m=target, expression=expression)
    _verify(family, raised, threads)
    logger.info("Raised decoupling to W^%d in %s (%d terms)", target, family.name, len(expression))
    return raised


def decoupling_chain(
    family: BaseFamily,
    through: int,
    cache=None,
    strategy: str = "canonical",
    threads: int = 1,
    progress: bool = False,
) -> Dict[int, Decoupling]:
    """
    All decouplings from the first decoupled generator up to W^through.

    Relations and decouplings are read from and written to ``cache`` (a
    RelationCache) when one is given.
    """
    from . import build_relation

    first = family.first_decoupled()
    chain: Dict[int, Decoupling] = {}
    if through < first:
        return chain

    current = cache.get_decoupling(family.key, family.n, first) if cache else None
    if current is None:
        classical = family.minimal_relation()
        result = cache.get_relation(family.key, family.n, classical, strategy) if cache else None
        if result is None:
            result = build_relation(
                family, classical, indices=family.minimal_indices(),
                strategy=strategy, threads=threads, progress=progress,
            )
            if cache:
                cache.store_relation(result, classical)
        current = extract_decoupling(result, family, threads=threads)
        if cache:
            cache.store_decoupling(current)
    chain[first] = current

    while current.m + 2 <= through:
        cached = cache.get_decoupling(family.key, family.n, current.m + 2) if cache else None
        current = cached or raise_decoupling(current, family, chain, threads=threads)
        if cache and cached is None:
            cache.store_decoupling(current)
        chain[current.m] = current
    return chain
