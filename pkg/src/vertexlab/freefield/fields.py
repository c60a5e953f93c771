"""
Free field generators: the beta-gamma system and free fermions.

``GenSym(kind, color, deriv)`` stands for the k-th derivative of
beta^i, gamma^i or phi^i. Generator-level products:

    beta^i (0) gamma^j = delta_ij,  gamma^i (0) beta^j = -delta_ij,
    phi^i (0) phi^j = delta_ij

Differentiating both sides gives the general rule
``(d^k A)_(n) d^l B = (-1)^k (k+l)! <A,B>`` when ``n == k + l``, zero otherwise.
"""

from bisect import bisect_left
from fractions import Fraction
from math import factorial
from typing import Dict, NamedTuple, Tuple

from .engine import ONE, Element, Linear, WickEngine, Word

BETA = 0
GAMMA = 1
PHI = 2

KIND_NAMES = {BETA: "b", GAMMA: "g", PHI: "f"}
KIND_LABELS = {BETA: "beta", GAMMA: "gamma", PHI: "phi"}
KINDS_BY_LABEL = {label: kind for kind, label in KIND_LABELS.items()}

# (left kind, right kind) -> vacuum coefficient of the simple pole
_BASE_PAIRING: Dict[Tuple[int, int], int] = {
    (BETA, GAMMA): 1,
    (GAMMA, BETA): -1,
    (PHI, PHI): 1,
}


class GenSym(NamedTuple):
    """The generator d^deriv of beta, gamma or phi with the given color."""

    kind: int
    color: int
    deriv: int = 0

    @property
    def is_odd(self) -> bool:
        return self.kind == PHI

    @property
    def weight2(self) -> int:
        return 2 * self.deriv + 1

    def raised(self, k: int = 1) -> "GenSym":
        return GenSym(self.kind, self.color, self.deriv + k)

    def token(self) -> str:
        if self.kind == PHI and self.color == 1:
            return f"f[{self.deriv}]"
        return f"{KIND_NAMES[self.kind]}{self.color}[{self.deriv}]"


def beta(color: int = 1, deriv: int = 0) -> GenSym:
    return GenSym(BETA, color, deriv)


def gamma(color: int = 1, deriv: int = 0) -> GenSym:
    return GenSym(GAMMA, color, deriv)


def phi(color: int = 1, deriv: int = 0) -> GenSym:
    return GenSym(PHI, color, deriv)


class FreeFieldEngine(WickEngine):
    """
    Circle products in S(n) tensor F(m).

    Generators only pair to the vacuum, so normal ordering a generator into a
    monomial is a supercommutative insertion with a Koszul sign.
    """

    name = "freefield"

    def generator_ope(self, g: GenSym, j: int, x: GenSym) -> Tuple[Linear, Fraction]:
        if g.color != x.color or j != g.deriv + x.deriv:
            return {}, Fraction(0)
        base = _BASE_PAIRING.get((g.kind, x.kind))
        if not base:
            return {}, Fraction(0)
        sign = -1 if g.deriv % 2 else 1
        return {}, Fraction(sign * base * factorial(j))

    def derive_generator(self, g: GenSym) -> Linear:
        return {g.raised(): ONE}

    def derive_generator_k(self, g: GenSym, k: int) -> Linear:
        return {g.raised(k): Fraction(1, factorial(k))}

    def canon_prefix(self, h: GenSym, word: Word) -> Element:
        pos = bisect_left(word, h)
        if not h.is_odd:
            return {word[:pos] + (h,) + word[pos:]: ONE}
        if pos < len(word) and word[pos] == h:
            return {}
        passed = sum(1 for x in word[:pos] if x.is_odd)
        return {word[:pos] + (h,) + word[pos:]: Fraction(-1 if passed % 2 else 1)}


def sort_monomial(factors) -> Tuple[int, Word]:
    """
    Supercommutative sort of a generator sequence.

    Returns:
        (sign, canonical word); sign is 0 when an odd generator repeats
    """
    items = list(factors)
    sign = 1
    # insertion sort keeps track of odd transpositions
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            if items[j - 1].is_odd and items[j].is_odd:
                sign = -sign
            items[j - 1], items[j] = items[j], items[j - 1]
            j -= 1
    for left, right in zip(items, items[1:]):
        if left == right and left.is_odd:
            return 0, ()
    return sign, tuple(items)
