"""
Sparse polynomial containers over canonical words.
"""

from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from ..arith import add_scaled, format_rational, to_rational
from .engine import VACUUM, Element, Word, word_weight2
from .fields import sort_monomial


class Poly:
    """
    Immutable sparse map from canonical words to Fractions.

    Zero coefficients are never stored. Subclasses fix the generator
    alphabet; arithmetic between different subclasses is an error.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Word, Fraction]] = None):
        clean: Dict[Word, Fraction] = {}
        if terms:
            for word, coeff in terms.items():
                value = to_rational(coeff)
                if value:
                    clean[tuple(word)] = value
        self.terms = clean

    @classmethod
    def _wrap(cls, terms: Element):
        poly = cls.__new__(cls)
        poly.terms = terms
        return poly

    @classmethod
    def zero(cls):
        return cls._wrap({})

    @classmethod
    def one(cls):
        return cls._wrap({VACUUM: Fraction(1)})

    @classmethod
    def generator(cls, g, coeff=1):
        return cls({(g,): coeff})

    # -- container protocol ------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Word, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        return type(other) is type(self) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def coefficient(self, word: Word) -> Fraction:
        return self.terms.get(tuple(word), Fraction(0))

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if type(other) is not type(self):
            raise TypeError(f"Cannot combine {type(self).__name__} with {type(other).__name__}")

    def __add__(self, other: "Poly"):
        self._check(other)
        return self._wrap(add_scaled(dict(self.terms), other.terms))

    def __sub__(self, other: "Poly"):
        self._check(other)
        return self._wrap(add_scaled(dict(self.terms), other.terms, Fraction(-1)))

    def __neg__(self):
        return self._wrap({w: -c for w, c in self.terms.items()})

    def __mul__(self, scalar):
        value = to_rational(scalar)
        if not value:
            return self.zero()
        return self._wrap({w: c * value for w, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / to_rational(scalar))

    # -- grading ---------------------------------------------------------

    def degrees(self) -> List[int]:
        return sorted({len(w) for w in self.terms})

    @property
    def max_degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def degree_component(self, d: int):
        return self._wrap({w: c for w, c in self.terms.items() if len(w) == d})

    def weight2(self) -> Optional[int]:
        """Doubled weight when homogeneous, else None (zero has no weight)."""
        weights = {word_weight2(w) for w in self.terms}
        return weights.pop() if len(weights) == 1 else None

    def weight_component(self, weight2: int):
        return self._wrap({w: c for w, c in self.terms.items() if word_weight2(w) == weight2})

    # -- text ------------------------------------------------------------

    def format(self) -> str:
        """Render as ``c * :g g ...:`` terms in canonical order."""
        if not self.terms:
            return "0"
        pieces = []
        for word, coeff in self:
            pieces.append(_format_term(self.format_word(word), coeff, first=not pieces))
        return " ".join(pieces)

    @staticmethod
    def format_word(word: Word) -> str:
        if not word:
            return "1"
        tokens = " ".join(g.token() for g in word)
        return tokens if len(word) == 1 else f":{tokens}:"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.format()!r})"


def _format_term(text: str, coeff: Fraction, first: bool) -> str:
    sign = "-" if coeff < 0 else "+"
    magnitude = -coeff if coeff < 0 else coeff
    if text == "1":
        body = format_rational(magnitude)
    elif magnitude == 1:
        body = text
    else:
        body = f"{format_rational(magnitude)} * {text}"
    if first:
        return body if sign == "+" else f"-{body}"
    return f"{sign} {body}"


class VPoly(Poly):
    """Element of a free field algebra: words of ``GenSym``."""

    __slots__ = ()

    @classmethod
    def monomial(cls, factors: Iterable, coeff=1) -> "VPoly":
        """Supercommutative monomial; odd factors are reordered with sign."""
        sign, word = sort_monomial(factors)
        if not sign:
            return cls.zero()
        return cls({word: sign * to_rational(coeff)})

    def colors(self) -> List[int]:
        return sorted({g.color for w in self.terms for g in w})


class OpeTable:
    """Poles ``n -> a_(n) b`` for n >= 0; empty poles are not stored."""

    def __init__(self, poles: Dict[int, Poly]):
        self.poles = {n: p for n, p in sorted(poles.items()) if p}

    def __getitem__(self, n: int) -> Poly:
        return self.poles[n]

    def get(self, n: int, default=None):
        return self.poles.get(n, default)

    def __len__(self) -> int:
        return len(self.poles)

    def __bool__(self) -> bool:
        return bool(self.poles)

    @property
    def locality_bound(self) -> int:
        """Smallest N with a_(n) b = 0 for all n >= N."""
        return max(self.poles) + 1 if self.poles else 0

    def __repr__(self) -> str:
        body = ", ".join(f"{n}: {p.format()}" for n, p in self.poles.items())
        return f"OpeTable({{{body}}})"


def supercommutative_product(a: Element, b: Element) -> Element:
    """Product in the associated graded (super)commutative algebra."""
    result: Element = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            sign, word = sort_monomial(wa + wb)
            if sign:
                add_scaled(result, {word: Fraction(sign)}, ca * cb)
    return result
