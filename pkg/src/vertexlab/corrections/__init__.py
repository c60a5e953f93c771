"""
Quantum corrections: turning classical relations into relations in M^+_c.

A classical relation is normally ordered, realized in free fields, and the
surviving top-degree part of the realization is lifted back to Omega words
and subtracted until the realization vanishes. The remainder is the W^m
coordinate of the degree-1 part.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from tqdm import tqdm

from ..arith import solve_sparse
from ..classical import QPoly
from ..freefield import VPoly
from ..freefield.engine import EngineError, Word
from ..wbasis import BaseFamily, Omega, WPoly, pr, walgebra

logger = logging.getLogger(__name__)

STRATEGIES = ("canonical", "reversed")


class NotLiftableError(EngineError):
    """The top-degree residual is not the symbol of any Omega polynomial."""


class NonTerminationError(EngineError):
    """A correction pass failed to lower the top degree of the residual."""


@dataclass(frozen=True)
class RelationResult:
    """A relation in M^+_c with its remainder."""

    family: str
    n: int
    indices: Tuple[Tuple[int, ...], ...]
    weight: int
    relation: WPoly
    remainder: Optional[Fraction]
    kernel_ok: bool
    passes: int = 0
    strategy: str = "canonical"

    @property
    def by_degree(self) -> Dict[int, WPoly]:
        """Components keyed by free field degree 2k."""
        return {2 * d: self.relation.degree_component(d) for d in self.relation.degrees()}

    @property
    def top_index(self) -> int:
        """Index m of the generator W^m at the relation's weight."""
        return self.weight - 1


def _check_strategy(strategy: str) -> None:
    if strategy not in STRATEGIES:
        raise ValueError(f"Unknown normal ordering strategy: {strategy}. Available: {', '.join(STRATEGIES)}")


def order_words(words: Dict[Word, Fraction], strategy: str = "canonical", central_charge=None) -> WPoly:
    """
    Normally order commutative Omega monomials.

    ``canonical`` reads each sorted monomial as its right-nested Wick word;
    ``reversed`` nests the factors in descending order and rewrites the
    result in the canonical basis of M^+_c.
    """
    _check_strategy(strategy)
    if strategy == "canonical":
        return WPoly({tuple(sorted(w)): c for w, c in words.items()})
    if central_charge is None:
        raise ValueError("The reversed strategy needs a central charge")
    ordered = {tuple(sorted(w, reverse=True)): c for w, c in words.items()}
    return walgebra(central_charge).canonicalize(ordered)


def normal_order(p: QPoly, strategy: str = "canonical", central_charge=None) -> WPoly:
    """Each monomial Q_{a1,b1}...Q_{ak,bk} goes to :Omega_{a1,b1}(...):."""
    words = {tuple(v.to_omega() for v in word): c for word, c in p.terms.items()}
    return order_words(words, strategy, central_charge)


def _omegas_up_to(weight: int) -> List[Omega]:
    return [Omega(m, a) for m in range(1, weight) for a in range((m + 1) // 2)]


def omega_words(degree: int, weight: int) -> Iterator[Word]:
    """All sorted words of ``degree`` Omegas with total weight ``weight``."""
    gens = _omegas_up_to(weight)

    def extend(prefix: Tuple[Omega, ...], start: int, left: int, remaining: int):
        if left == 0:
            if remaining == 0:
                yield prefix
            return
        for idx in range(start, len(gens)):
            g = gens[idx]
            # each further factor weighs at least 2
            if g.weight + 2 * (left - 1) > remaining:
                continue
            yield from extend(prefix + (g,), idx, left - 1, remaining - g.weight)

    yield from extend((), 0, degree, weight)


def lift(e: VPoly, family: BaseFamily, degree: int, progress: bool = False) -> Dict[Word, Fraction]:
    """
    Find Omega words of the given degree whose symbols give e's top component.

    Args:
        e: Homogeneous free field element
        family: Realization family
        degree: Number k of Omega factors; the free field degree is 2k

    Returns:
        Sorted Omega words with coefficients (not yet normally ordered)

    Raises:
        NotLiftableError: If the component is not in the span of the symbols
    """
    target = e.degree_component(2 * degree).terms
    if not target:
        return {}
    weight2 = e.weight2()
    if weight2 is None or weight2 % 2:
        raise NotLiftableError(f"Residual is not homogeneous of integral weight: {e}")
    words = list(omega_words(degree, weight2 // 2))
    columns = {}
    for word in tqdm(words, desc=f"lift deg {degree}", disable=not progress, leave=False):
        symbol = family.symbol(word)
        if symbol:
            columns[word] = symbol
    logger.debug("Lifting %d terms over %d candidate words", len(target), len(columns))
    solution = solve_sparse(columns, target)
    if solution is None:
        raise NotLiftableError(f"Degree {2 * degree} residual does not lift in {family.name}")
    return solution


def build_relation(
    family: BaseFamily,
    classical: QPoly,
    indices: Tuple[Tuple[int, ...], ...] = (),
    strategy: str = "canonical",
    threads: int = 1,
    progress: bool = False,
) -> RelationResult:
    """
    Quantum-correct a classical relation until its realization vanishes.

    Args:
        family: Realization family
        classical: A relation among the Q_{a,b} for this family
        indices: Index lists recorded with the result
        strategy: Normal ordering strategy, ``canonical`` or ``reversed``
        threads: Worker threads for realizations
        progress: Show progress bars

    Raises:
        ValueError: If the input is not homogeneous or not a classical relation
        NotLiftableError: If a residual has no lift
        NonTerminationError: If a pass does not lower the top degree
    """
    _check_strategy(strategy)
    weight2 = classical.weight2()
    if weight2 is None:
        raise ValueError("Classical relation must be nonzero and weight homogeneous")
    weight = weight2 // 2
    charge = family.central_charge

    relation = normal_order(classical, strategy, charge)
    residual = family.realize(relation, threads=threads)
    bound = 2 * relation.max_degree
    if residual and residual.max_degree >= bound:
        raise ValueError(f"{classical} is not a classical relation for {family.name}")

    passes = 0
    with tqdm(total=relation.max_degree, desc=f"{family.name} corrections", disable=not progress) as bar:
        while residual:
            top = residual.max_degree
            if top >= bound or top % 2:
                raise NonTerminationError(f"Residual top degree {top} did not drop below {bound}")
            bound = top
            passes += 1
            words = lift(residual, family, top // 2, progress=progress)
            correction = order_words(words, strategy, charge)
            relation = relation - correction
            residual = residual - family.realize(correction, threads=threads)
            logger.info("%s pass %d: lifted degree %d, %d terms left", family.name, passes, top, len(residual))
            bar.update(1)

    remainder = None
    if weight % 2 == 0:
        remainder = pr(weight - 1, relation.degree_component(1))
    return RelationResult(
        family=family.key,
        n=family.n,
        indices=tuple(tuple(i) for i in indices),
        weight=weight,
        relation=relation,
        remainder=remainder,
        kernel_ok=True,
        passes=passes,
        strategy=strategy,
    )


def minimal_relation(family: BaseFamily, **kwargs) -> RelationResult:
    """The relation of minimal weight, built from ``family.minimal_relation()``."""
    return build_relation(family, family.minimal_relation(), indices=family.minimal_indices(), **kwargs)


from .decoupling import (  # noqa: E402
    Decoupling,
    DecouplingError,
    decoupling_chain,
    extract_decoupling,
    kept_monomials,
    raise_decoupling,
)
from .appendix import appendix_components, appendix_relation, verify_appendix  # noqa: E402

__all__ = [
    "STRATEGIES",
    "Decoupling",
    "DecouplingError",
    "NonTerminationError",
    "NotLiftableError",
    "RelationResult",
    "appendix_components",
    "appendix_relation",
    "build_relation",
    "decoupling_chain",
    "extract_decoupling",
    "kept_monomials",
    "lift",
    "minimal_relation",
    "normal_order",
    "omega_words",
    "order_words",
    "raise_decoupling",
    "verify_appendix",
]
