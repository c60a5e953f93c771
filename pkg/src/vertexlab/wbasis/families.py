"""
Free field realizations of the vacuum module.

Each family maps Omega_{a,b} to a bilinear in free fields:

    Sp(n):       1/2 sum_i (:d^a beta^i d^b gamma^i: - :d^b beta^i d^a gamma^i:)   c = -n
    O(n):       -1/2 sum_i :d^a phi^i d^b phi^i:                                  c = n/2
    Osp(1,2n):   the Sp(n) bilinear - 1/2 :d^a phi d^b phi:                       c = -n + 1/2

so that W^m = Omega_{0,m} realizes as w^m in all three. Words are realized as
right-nested Wick products of the images of their factors.
"""

import logging
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple, Type

from ..arith import add_scaled
from ..freefield import VPoly, get_engine
from ..freefield.engine import Element, Word
from ..freefield.fields import GenSym, beta, gamma, phi
from ..freefield.poly import supercommutative_product
from .omega import Omega, WPoly, w_generator

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class BaseFamily(ABC):
    """
    A realization of the vacuum module in free fields.

    Realized words are memoized per family instance; ``get_family`` hands
    out shared instances so the memo survives across calls.
    """

    key: str = ""
    label: str = ""

    def __init__(self, n: int, memo_limit: int = 500_000):
        if n < 1:
            raise ValueError(f"Family rank must be positive, got {n}")
        self.n = n
        self.memo_limit = memo_limit
        self._images: Dict[Omega, Element] = {}
        self._realized: Dict[Word, Element] = {}

    def __repr__(self) -> str:
        return f"{self.label}({self.n})"

    @property
    def name(self) -> str:
        return f"{self.label}({self.n})"

    @property
    @abstractmethod
    def central_charge(self) -> Fraction:
        pass

    @abstractmethod
    def _bilinear(self, a: int, b: int) -> Element:
        """Image of Omega_{a,b} for a < b."""
        pass

    @property
    @abstractmethod
    def relation_degree(self) -> int:
        """Degree in Omega factors of the generating classical relations."""
        pass

    @property
    @abstractmethod
    def minimal_weight(self) -> int:
        """Weight of the first relation among the generators."""
        pass

    @abstractmethod
    def minimal_relation(self):
        """The classical relation (a QPoly) of minimal weight."""
        pass

    def generator_type(self) -> List[int]:
        """Weights 2, 4, ..., 2N of a minimal strong generating set."""
        return [m + 1 for m in self.minimal_generators()]

    def minimal_generators(self) -> List[int]:
        """Odd indices m of the W^m in the minimal strong generating set."""
        return list(range(1, self.first_decoupled(), 2))

    def first_decoupled(self) -> int:
        """Index of the first W^m expressible through lower generators."""
        return self.minimal_weight - 1

    def minimal_indices(self) -> Tuple[Tuple[int, ...], ...]:
        """Index lists of the minimal classical relation."""
        return ()

    def orthogonal_flavor(self) -> bool:
        return False

    def free_fields(self) -> List[GenSym]:
        """Underived free fields of the realization, in canonical order."""
        return sorted({GenSym(g.kind, g.color) for word in self.image(w_generator(1)) for g in word})

    # -- realization ------------------------------------------------------

    def image(self, g: Omega) -> Element:
        cached = self._images.get(g)
        if cached is None:
            cached = self._bilinear(g.a, g.b)
            self._images[g] = cached
        return cached

    def realize_word(self, word: Word) -> Element:
        """Right-nested Wick product of the factor images, in the given order."""
        if not word:
            return {(): Fraction(1)}
        cached = self._realized.get(word)
        if cached is not None:
            return cached
        engine = get_engine()
        result = engine.wick(self.image(word[0]), self.realize_word(word[1:]))
        if len(self._realized) >= self.memo_limit:
            self._realized.clear()
        self._realized[word] = result
        return result

    def realize(self, p: WPoly, threads: int = 1) -> VPoly:
        """Image of p under the realization."""
        words = sorted(p.terms)
        if threads > 1 and len(words) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                images = list(pool.map(self.realize_word, words))
        else:
            images = [self.realize_word(w) for w in words]
        result: Element = {}
        for word, image in zip(words, images):
            add_scaled(result, image, p.terms[word])
        return VPoly._wrap(result)

    def symbol(self, word: Word) -> Element:
        """Supercommutative product of the factor images: the top degree of realize_word."""
        result: Element = {(): Fraction(1)}
        for g in word:
            result = supercommutative_product(self.image(g), result)
        return result

    def w(self, m: int) -> VPoly:
        """The realized generator w^m."""
        return VPoly._wrap(dict(self.image(w_generator(m))))


class SymplecticFamily(BaseFamily):
    """Sp(2n) invariants of the beta-gamma system S(n)."""

    key = "sp"
    label = "Sp"

    @property
    def central_charge(self) -> Fraction:
        return Fraction(-self.n)

    def _bilinear(self, a: int, b: int) -> Element:
        result: Element = {}
        for i in range(1, self.n + 1):
            result[(beta(i, a), gamma(i, b))] = HALF
            result[(beta(i, b), gamma(i, a))] = -HALF
        return result

    @property
    def relation_degree(self) -> int:
        return self.n + 1

    @property
    def minimal_weight(self) -> int:
        return 2 * (self.n + 1) ** 2

    def minimal_relation(self):
        from ..classical import pfaffian
        return pfaffian(tuple(range(2 * self.n + 2)), self.n)

    def minimal_indices(self) -> Tuple[Tuple[int, ...], ...]:
        return (tuple(range(2 * self.n + 2)),)


class OrthogonalFamily(BaseFamily):
    """O(n) invariants of the free fermions F(n)."""

    key = "o"
    label = "O"

    @property
    def central_charge(self) -> Fraction:
        return Fraction(self.n, 2)

    def _bilinear(self, a: int, b: int) -> Element:
        return {(phi(i, a), phi(i, b)): -HALF for i in range(1, self.n + 1)}

    @property
    def relation_degree(self) -> int:
        return self.n + 1

    @property
    def minimal_weight(self) -> int:
        return 2 * self.n + 2

    def minimal_relation(self):
        from ..classical import det_analog
        return det_analog((0,) * (self.n + 1), (1,) * (self.n + 1), self.n)

    def minimal_indices(self) -> Tuple[Tuple[int, ...], ...]:
        return ((0,) * (self.n + 1), (1,) * (self.n + 1))

    def orthogonal_flavor(self) -> bool:
        return True


class OrthosymplecticFamily(SymplecticFamily):
    """Osp(1,2n) invariants of S(n) tensor F(1)."""

    key = "osp"
    label = "Osp"

    @property
    def central_charge(self) -> Fraction:
        return Fraction(-2 * self.n + 1, 2)

    def _bilinear(self, a: int, b: int) -> Element:
        result = super()._bilinear(a, b)
        result[(phi(1, a), phi(1, b))] = -HALF
        return result

    @property
    def relation_degree(self) -> int:
        return 2 * self.n + 2

    @property
    def minimal_weight(self) -> int:
        return 4 * self.n ** 2 + 8 * self.n + 4

    def minimal_relation(self):
        if self.n != 1:
            raise NotImplementedError("Only the Osp(1,2) minimal relation has an explicit formula")
        from ..classical import sergeev_minimal
        return sergeev_minimal()

    def minimal_indices(self) -> Tuple[Tuple[int, ...], ...]:
        return ()


FAMILIES: Dict[str, Type[BaseFamily]] = {
    "sp": SymplecticFamily,
    "o": OrthogonalFamily,
    "osp": OrthosymplecticFamily,
}


@lru_cache(maxsize=None)
def get_family(key: str, n: int) -> BaseFamily:
    """
    Shared family instance for ``key`` in {sp, o, osp}.

    Raises:
        ValueError: If the family key is unknown
    """
    family_class = FAMILIES.get(key.lower())
    if family_class is None:
        raise ValueError(f"Unknown family: {key}. Available: {', '.join(FAMILIES)}")
    return family_class(n)


def list_families() -> List[Tuple[str, str]]:
    return [(key, cls.label) for key, cls in FAMILIES.items()]
