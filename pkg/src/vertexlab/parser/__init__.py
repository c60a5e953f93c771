"""
Text form of polynomials.

    expr   := ['-'] term (('+' | '-') term)*
    term   := coeff ['*' word] | word
    word   := ':' gen+ ':' | gen+
    gen    := b<i>[k] | g<i>[k] | f[k] | f<i>[k]          free fields
            | W<m>[k] | Om<a>,<b>[k]                       Omega words ([k] optional)
            | Q(a,b)                                       classical
    coeff  := p | p/q

A word whose generators are all free fields is a supercommutative
monomial. Omega words in canonical order are read as they stand; any other
product of Omega expressions is normally ordered in M^+_c and needs the
central charge.
"""

import re
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple, Optional, Union

from ..arith import format_rational, parse_rational
from ..classical import QPoly
from ..freefield import VPoly
from ..freefield.fields import beta, gamma, phi
from ..wbasis import Omega, WPoly, derive_omega, omega, walgebra

AnyPoly = Union[VPoly, WPoly, QPoly]

POLY_TYPES = {"VPoly": VPoly, "WPoly": WPoly, "QPoly": QPoly}


class ParseError(ValueError):
    """Malformed expression text; ``position`` is the offending character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class _Token(NamedTuple):
    kind: str
    value: Any
    position: int


_TOKEN_RE = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<omega>Om(?P<oa>\d+),(?P<ob>\d+)(?:\[(?P<ok>\d+)\])?)
  | (?P<w>W(?P<wm>\d+)(?:\[(?P<wk>\d+)\])?)
  | (?P<q>Q\((?P<qa>\d+),(?P<qb>\d+)\))
  | (?P<bg>(?P<bgk>[bg])(?P<bgi>\d+)\[(?P<bgd>\d+)\])
  | (?P<f>f(?P<fi>\d+)?\[(?P<fd>\d+)\])
  | (?P<num>\d+(?:/\d+)?)
  | (?P<op>[-+*:])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if not match:
            raise ParseError(f"Unknown token {text[pos:pos + 8]!r}", pos)
        if match.group("space"):
            pass
        elif match.group("omega"):
            a, b = int(match.group("oa")), int(match.group("ob"))
            tokens.append(_Token("w", ("om", a, b, int(match.group("ok") or 0)), pos))
        elif match.group("w"):
            tokens.append(_Token("w", ("w", int(match.group("wm")), int(match.group("wk") or 0)), pos))
        elif match.group("q"):
            tokens.append(_Token("q", (int(match.group("qa")), int(match.group("qb"))), pos))
        elif match.group("bg"):
            make = beta if match.group("bgk") == "b" else gamma
            tokens.append(_Token("v", make(int(match.group("bgi")), int(match.group("bgd"))), pos))
        elif match.group("f"):
            tokens.append(_Token("v", phi(int(match.group("fi") or 1), int(match.group("fd"))), pos))
        elif match.group("num"):
            tokens.append(_Token("num", match.group("num"), pos))
        else:
            tokens.append(_Token(match.group("op"), None, pos))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str, central_charge=None):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0
        self.central_charge = central_charge
        self.domain: Optional[str] = None

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def take(self) -> _Token:
        token = self.peek()
        if token is None:
            raise ParseError("Unexpected end of input", len(self.text))
        self.index += 1
        return token

    def _claim(self, domain: str, position: int) -> None:
        if self.domain is None:
            self.domain = domain
        elif self.domain != domain:
            raise ParseError("Expression mixes free fields, Omegas and Q variables", position)

    def parse(self) -> AnyPoly:
        terms = []
        sign = 1
        token = self.peek()
        if token is None:
            raise ParseError("Empty expression", 0)
        if token.kind in "+-":
            sign = -1 if self.take().kind == "-" else 1
        terms.append((sign, self.term()))
        while self.peek() is not None:
            token = self.take()
            if token.kind not in "+-":
                raise ParseError(f"Expected '+' or '-', got {self.text[token.position]!r}", token.position)
            terms.append((-1 if token.kind == "-" else 1, self.term()))
        cls = POLY_TYPES[{"v": "VPoly", "w": "WPoly", "q": "QPoly", None: "WPoly"}[self.domain]]
        result = cls.zero()
        for s, (coeff, word) in terms:
            result = result + self.realize_word(cls, word, s * coeff)
        return result

    def term(self):
        token = self.peek()
        if token is None:
            raise ParseError("Expected a term", len(self.text))
        coeff = Fraction(1)
        if token.kind == "num":
            coeff = parse_rational(self.take().value)
            nxt = self.peek()
            if nxt is None or nxt.kind in "+-":
                return coeff, []
            if nxt.kind == "*":
                self.take()
        return coeff, self.word()

    def word(self) -> List[_Token]:
        token = self.take()
        if token.kind == ":":
            gens = []
            while self.peek() is not None and self.peek().kind in ("v", "w", "q"):
                gens.append(self.take())
            closing = self.take()
            if closing.kind != ":" or not gens:
                raise ParseError("Malformed normally ordered word", closing.position)
        elif token.kind in ("v", "w", "q"):
            gens = [token]
            while self.peek() is not None and self.peek().kind in ("v", "w", "q"):
                gens.append(self.take())
        else:
            raise ParseError("Expected a generator", token.position)
        for g in gens:
            self._claim(g.kind, g.position)
        return gens

    def realize_word(self, cls, gens: List[_Token], coeff: Fraction) -> AnyPoly:
        if not gens:
            return cls({(): coeff})
        if cls is VPoly:
            return VPoly.monomial([g.value for g in gens], coeff)
        if cls is QPoly:
            result = QPoly.one()
            for g in gens:
                result = result.multiply(QPoly.q(*g.value))
            return result * coeff
        factors = [self.omega_factor(g) for g in gens]
        plain = []
        for f in factors:
            if len(f.terms) == 1:
                ((word, c),) = f.terms.items()
                if c == 1 and len(word) == 1:
                    plain.append(word[0])
        if len(plain) == len(factors) and plain == sorted(plain):
            return WPoly({tuple(plain): coeff})
        if len(factors) == 1:
            return factors[0] * coeff
        if self.central_charge is None:
            raise ParseError("Reordering Omega words needs a central charge", gens[0].position)
        return walgebra(self.central_charge).wick_all(*factors) * coeff

    def omega_factor(self, token: _Token) -> WPoly:
        value = token.value
        try:
            if value[0] == "w":
                return WPoly.w(value[1], value[2])
            _, a, b, k = value
            base = WPoly({(g,): c for g, c in omega(a, b).items()})
        except ValueError as exc:
            raise ParseError(str(exc), token.position) from exc
        return _derive_omegas(base, k) if k else base


def _derive_omegas(p: WPoly, k: int) -> WPoly:
    """k-th derivative of a combination of single Omegas."""
    current = dict((w[0], c) for w, c in p.terms.items())
    for _ in range(k):
        nxt: Dict[Omega, Fraction] = {}
        for g, c in current.items():
            for h, d in derive_omega(g).items():
                nxt[h] = nxt.get(h, Fraction(0)) + c * d
        current = {g: c for g, c in nxt.items() if c}
    return WPoly({(g,): c for g, c in current.items()})


def parse_expr(text: str, central_charge=None) -> AnyPoly:
    """
    Parse an expression into a VPoly, WPoly or QPoly.

    Raises:
        ParseError: On malformed input, with the character position
    """
    return _Parser(text, central_charge).parse()


def format_poly(p: AnyPoly) -> str:
    return p.format()


def poly_to_json(p: AnyPoly) -> Dict[str, Any]:
    """Deterministic JSON mirror: type name plus canonical terms."""
    return {
        "type": type(p).__name__,
        "terms": [{"word": p.format_word(word), "coefficient": format_rational(c)} for word, c in p],
    }


def poly_from_json(data: Dict[str, Any], central_charge=None) -> AnyPoly:
    cls = POLY_TYPES.get(data.get("type", ""))
    if cls is None:
        raise ParseError(f"Unknown polynomial type {data.get('type')!r}", 0)
    return terms_to_poly(cls, data.get("terms", []), central_charge)


def terms_to_poly(cls, terms, central_charge=None) -> AnyPoly:
    """Rebuild from ``{word, coefficient}`` items (dicts or TermModels)."""
    result = cls.zero()
    for term in terms:
        word = term["word"] if isinstance(term, dict) else term.word
        coefficient = term["coefficient"] if isinstance(term, dict) else term.coefficient
        coeff = parse_rational(coefficient)
        if word == "1":
            piece = cls({(): coeff})
        else:
            piece = parse_expr(word, central_charge) * coeff
            if type(piece) is not cls:
                raise ParseError(f"Term {word!r} is not a {cls.__name__} word", 0)
        result = result + piece
    return result


__all__ = [
    "ParseError",
    "format_poly",
    "parse_expr",
    "poly_from_json",
    "poly_to_json",
    "terms_to_poly",
]
