"""
Generic normal-ordering engine for freely generated vertex (super)algebras.

An engine knows a totally ordered set of generators, how each generator is
differentiated, and the non-negative circle products between generators
(a linear combination of generators plus a multiple of the vacuum). From
that data it computes circle products of arbitrary normally ordered
monomials.

A *word* is a tuple of generators ``(x1, ..., xk)`` in canonical order,
read as the right-nested Wick product ``:x1 :x2 ... xk::``. Even generators
may repeat; odd generators may not. The empty tuple is the vacuum. Elements
are plain dicts ``word -> Fraction`` with no zero coefficients.

Generators must expose ``is_odd`` and ``weight2`` (twice the conformal
weight, so half-integer weights stay integral).
"""

import logging
from fractions import Fraction
from math import comb, factorial
from typing import Dict, Hashable, Tuple

from ..arith import add_scaled

logger = logging.getLogger(__name__)

Word = Tuple[Hashable, ...]
Element = Dict[Word, Fraction]
Linear = Dict[Hashable, Fraction]

VACUUM: Word = ()
ONE = Fraction(1)


def word_weight2(word: Word) -> int:
    return sum(g.weight2 for g in word)


def word_parity(word: Word) -> int:
    return sum(1 for g in word if g.is_odd) & 1


class EngineError(RuntimeError):
    """Raised when an engine invariant is broken."""


class WickEngine:
    """
    Circle products on normally ordered monomials.

    Subclasses implement ``generator_ope`` and ``derive_generator``. All
    results are memoized per engine; a table is cleared once it holds more
    than ``memo_limit`` entries.
    """

    name = "abstract"

    def __init__(self, memo_limit: int = 2_000_000):
        self.memo_limit = memo_limit
        self._prefix_memo: Dict[Tuple, Element] = {}
        self._action_memo: Dict[Tuple, Element] = {}
        self._circle_memo: Dict[Tuple, Element] = {}
        self._derive_memo: Dict[Tuple, Linear] = {}
        self._word_derive_memo: Dict[Word, Element] = {}

    # -- generator data ---------------------------------------------------

    def generator_ope(self, g, j: int, x) -> Tuple[Linear, Fraction]:
        """Return ``g_(j) x`` for ``j >= 0`` as (linear part, vacuum coefficient)."""
        raise NotImplementedError

    def derive_generator(self, g) -> Linear:
        """Return ``dg`` as a linear combination of generators."""
        raise NotImplementedError

    def derive_generator_k(self, g, k: int) -> Linear:
        """``d^k g / k!`` as a linear combination of generators."""
        if k == 0:
            return {g: ONE}
        key = (g, k)
        cached = self._derive_memo.get(key)
        if cached is not None:
            return cached
        previous = self.derive_generator_k(g, k - 1)
        result: Linear = {}
        for h, c in previous.items():
            add_scaled(result, self.derive_generator(h), c / k)
        self._remember(self._derive_memo, key, result)
        return result

    def derive_linear(self, lin: Linear, k: int) -> Linear:
        """``d^k`` of a linear combination, without the 1/k! factor."""
        result: Linear = {}
        scale = factorial(k)
        for h, c in lin.items():
            add_scaled(result, self.derive_generator_k(h, k), c * scale)
        return result

    # -- memo bookkeeping -------------------------------------------------

    def _remember(self, table: Dict, key, value) -> None:
        if len(table) >= self.memo_limit:
            logger.debug("Clearing %s memo table (%d entries)", self.name, len(table))
            table.clear()
        table[key] = value

    def clear_memo(self) -> None:
        for table in (self._prefix_memo, self._action_memo, self._circle_memo,
                      self._derive_memo, self._word_derive_memo):
            table.clear()

    def memo_stats(self) -> Dict[str, int]:
        return {
            "prefix": len(self._prefix_memo),
            "action": len(self._action_memo),
            "circle": len(self._circle_memo),
            "derive": len(self._derive_memo) + len(self._word_derive_memo),
        }

    # -- normal ordering --------------------------------------------------

    def canon_prefix(self, h, word: Word) -> Element:
        """Express ``:h W:`` for a canonical word W in the canonical basis."""
        if not word or h < word[0]:
            return {(h,) + word: ONE}
        key = (h, word)
        cached = self._prefix_memo.get(key)
        if cached is not None:
            return cached

        x, rest = word[0], word[1:]
        result: Element = {}
        if h == x:
            if not h.is_odd:
                result = {(h,) + word: ONE}
            else:
                # :h :h R:: for odd h is half the commutator term.
                for j, lin in self._linear_products(h, h):
                    coeff = Fraction((-1) ** j, 2 * factorial(j + 1))
                    for y, c in self.derive_linear(lin, j + 1).items():
                        add_scaled(result, self.canon_prefix(y, rest), coeff * c)
        else:
            sign = -1 if (h.is_odd and x.is_odd) else 1
            for w, c in self.canon_prefix(h, rest).items():
                add_scaled(result, self.canon_prefix(x, w), sign * c)
            for j, lin in self._linear_products(h, x):
                coeff = Fraction((-1) ** j, factorial(j + 1))
                for y, c in self.derive_linear(lin, j + 1).items():
                    add_scaled(result, self.canon_prefix(y, rest), coeff * c)

        self._remember(self._prefix_memo, key, result)
        return result

    def prefix(self, h, element: Element) -> Element:
        """``:h A:`` for an element A."""
        result: Element = {}
        for w, c in element.items():
            add_scaled(result, self.canon_prefix(h, w), c)
        return result

    def prefix_linear(self, lin: Linear, element: Element) -> Element:
        result: Element = {}
        for h, c in lin.items():
            add_scaled(result, self.prefix(h, element), c)
        return result

    def _linear_products(self, g, x):
        """Yield ``(j, lin)`` for the nonzero linear parts of ``g_(j) x``."""
        top = (g.weight2 + x.weight2 - 2) // 2
        for j in range(top + 1):
            lin, _ = self.generator_ope(g, j, x)
            if lin:
                yield j, lin

    # -- circle products --------------------------------------------------

    def gen_action(self, g, n: int, word: Word) -> Element:
        """``g_(n) W`` for a generator g and a canonical word W."""
        if n < 0:
            k = -n - 1
            return self.prefix_linear(self.derive_generator_k(g, k), {word: ONE})
        if not word:
            return {}
        if 2 * n > g.weight2 + word_weight2(word) - 2:
            return {}
        key = (g, n, word)
        cached = self._action_memo.get(key)
        if cached is not None:
            return cached

        x, rest = word[0], word[1:]
        rest_elem = {rest: ONE}
        result: Element = {}
        lin, const = self.generator_ope(g, n, x)
        if const:
            add_scaled(result, rest_elem, const)
        if lin:
            add_scaled(result, self.prefix_linear(lin, rest_elem))
        sign = -1 if (g.is_odd and x.is_odd) else 1
        add_scaled(result, self.prefix(x, self.gen_action(g, n, rest)), sign)
        for j in range(n):
            lin_j, _ = self.generator_ope(g, j, x)
            if not lin_j:
                continue
            binom = comb(n, j)
            for y, c in lin_j.items():
                add_scaled(result, self.gen_action(y, n - 1 - j, rest), binom * c)

        self._remember(self._action_memo, key, result)
        return result

    def circle_words(self, a: Word, n: int, b: Word) -> Element:
        """``a_(n) b`` for canonical words a and b."""
        if not a:
            return {b: ONE} if n == -1 else {}
        if len(a) == 1:
            return self.gen_action(a[0], n, b)
        if word_weight2(a) + word_weight2(b) - 2 * n - 2 < 0:
            return {}
        key = (a, n, b)
        cached = self._circle_memo.get(key)
        if cached is not None:
            return cached

        x, rest = a[0], a[1:]
        result: Element = {}
        w_rest, w_b, w_x = word_weight2(rest), word_weight2(b), x.weight2
        # sum_j x_(-1-j) (R_(n+j) b)
        for j in range((w_rest + w_b - 2) // 2 - n + 1):
            inner = self.circle_words(rest, n + j, b)
            if inner:
                add_scaled(result, self.prefix_linear(self.derive_generator_k(x, j), inner))
        # +- sum_j R_(n-1-j) (x_(j) b)
        sign = -1 if (x.is_odd and word_parity(rest)) else 1
        for j in range((w_x + w_b - 2) // 2 + 1):
            acted = self.gen_action(x, j, b)
            for w, c in acted.items():
                add_scaled(result, self.circle_words(rest, n - 1 - j, w), sign * c)

        self._remember(self._circle_memo, key, result)
        return result

    def circle(self, a: Element, n: int, b: Element) -> Element:
        """``A_(n) B`` for elements."""
        result: Element = {}
        for wa, ca in a.items():
            for wb, cb in b.items():
                add_scaled(result, self.circle_words(wa, n, wb), ca * cb)
        return result

    def wick(self, a: Element, b: Element) -> Element:
        return self.circle(a, -1, b)

    # -- derivative -------------------------------------------------------

    def derive_word(self, word: Word) -> Element:
        if not word:
            return {}
        cached = self._word_derive_memo.get(word)
        if cached is not None:
            return cached
        x, rest = word[0], word[1:]
        rest_elem = {rest: ONE}
        result = self.prefix_linear(self.derive_generator(x), rest_elem)
        add_scaled(result, self.prefix(x, self.derive_word(rest)))
        self._remember(self._word_derive_memo, word, result)
        return result

    def derive(self, a: Element, times: int = 1) -> Element:
        result = a
        for _ in range(times):
            step: Element = {}
            for w, c in result.items():
                add_scaled(step, self.derive_word(w), c)
            result = step
        return result

    def order_word(self, word: Word) -> Element:
        """Canonical form of the right-nested product of an arbitrary generator sequence."""
        result: Element = {VACUUM: ONE}
        for g in reversed(word):
            result = self.prefix(g, result)
        return result
