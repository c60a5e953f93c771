"""
Vertex algebra identities checked on concrete elements.

Each check returns the list of modes n at which the identity fails, so an
empty list means the engine agrees with the axioms on that pair. Elements
must have a single parity; weight checks also need them homogeneous.

    skew-symmetry:        b(n)a = p sum_j (-1)^(n+j+1)/j! d^j (a(n+j)b)
    quasi-commutativity:  :ab: - p:ba: = sum_j (-1)^j/(j+1)! d^(j+1) (a(j)b)
    locality:             a(n)b = 0 for n >= N(a, b)
    weight:               wt a(n)b = wt a + wt b - n - 1
    filtration:           deg a(n)b <= deg a + deg b - 2 for n >= 0

where p = (-1)^(|a||b|).
"""

import random
from fractions import Fraction
from math import factorial
from typing import Dict, List, Sequence

from . import circle, derive, parity, wick
from .engine import word_weight2
from .fields import GenSym
from .poly import VPoly


def _sign(a: VPoly, b: VPoly) -> int:
    return -1 if parity(a) and parity(b) else 1


def _top_weight2(a: VPoly) -> int:
    return max((word_weight2(w) for w in a.terms), default=0)


def pole_bound(a: VPoly, b: VPoly) -> int:
    """A mode N past which weight alone forces a(n)b = 0 (n >= N)."""
    return (_top_weight2(a) + _top_weight2(b)) // 2


def skew_symmetry_failures(a: VPoly, b: VPoly) -> List[int]:
    bound = pole_bound(a, b)
    sign = _sign(a, b)
    failures = []
    for n in range(-1, bound + 1):
        rhs = VPoly.zero()
        for j in range(max(bound - n, 0)):
            term = circle(a, n + j, b)
            if term:
                scale = Fraction((-1) ** (n + j + 1), factorial(j))
                rhs = rhs + derive(term, j) * scale
        if circle(b, n, a) != rhs * sign:
            failures.append(n)
    return failures


def quasi_commutativity_failures(a: VPoly, b: VPoly) -> List[int]:
    """Returns [-1] when the Wick products disagree, else []."""
    rhs = VPoly.zero()
    for j in range(pole_bound(a, b)):
        term = circle(a, j, b)
        if term:
            rhs = rhs + derive(term, j + 1) * Fraction((-1) ** j, factorial(j + 1))
    lhs = wick(a, b) - wick(b, a) * _sign(a, b)
    return [] if lhs == rhs else [-1]


def locality_failures(a: VPoly, b: VPoly, extra: int = 2) -> List[int]:
    bound = pole_bound(a, b)
    return [n for n in range(bound, bound + extra) if circle(a, n, b)]


def weight_failures(a: VPoly, b: VPoly) -> List[int]:
    wa, wb = a.weight2(), b.weight2()
    if wa is None or wb is None:
        raise ValueError("Weight check needs homogeneous elements")
    failures = []
    for n in range(-1, pole_bound(a, b)):
        product = circle(a, n, b)
        if product and product.weight2() != wa + wb - 2 * n - 2:
            failures.append(n)
    return failures


def filtration_failures(a: VPoly, b: VPoly) -> List[int]:
    top = a.max_degree + b.max_degree
    failures = []
    for n in range(-1, pole_bound(a, b)):
        product = circle(a, n, b)
        if product and product.max_degree > (top if n < 0 else top - 2):
            failures.append(n)
    return failures


def derivation_failures(a: VPoly, b: VPoly) -> List[int]:
    failures = []
    for n in range(-1, pole_bound(a, b)):
        lhs = derive(circle(a, n, b))
        rhs = circle(derive(a), n, b) + circle(a, n, derive(b))
        if lhs != rhs:
            failures.append(n)
    return failures


IDENTITIES = {
    "skew-symmetry": skew_symmetry_failures,
    "quasi-commutativity": quasi_commutativity_failures,
    "locality": locality_failures,
    "weight": weight_failures,
    "filtration": filtration_failures,
    "derivation": derivation_failures,
}


def identity_failures(a: VPoly, b: VPoly) -> Dict[str, List[int]]:
    """Run every identity on the pair; only failing identities are returned."""
    report = {}
    for name, check in IDENTITIES.items():
        failures = check(a, b)
        if failures:
            report[name] = failures
    return report


def random_element(
    rng: random.Random,
    fields: Sequence[GenSym],
    max_degree: int = 3,
    max_deriv: int = 2,
    max_terms: int = 3,
    max_weight2: int = 10,
) -> VPoly:
    """
    A random element of one weight and one parity, of weight at most max_weight2 / 2.

    The first monomial fixes weight and parity; further candidates are kept
    only when they match. Coefficients are small nonzero rationals.
    """
    fields = sorted(fields)

    def monomial() -> VPoly:
        degree = rng.randint(1, max_degree)
        factors = [rng.choice(fields).raised(rng.randint(0, max_deriv)) for _ in range(degree)]
        if sum(g.weight2 for g in factors) > max_weight2:
            return VPoly.zero()
        coeff = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))
        return VPoly.monomial(factors, coeff)

    element = VPoly.zero()
    while not element:
        element = monomial()
    weight2, odd = element.weight2(), parity(element)
    for _ in range(4 * max_terms):
        if len(element) >= max_terms:
            break
        candidate = monomial()
        if candidate and candidate.weight2() == weight2 and parity(candidate) == odd:
            total = element + candidate
            if total:
                element = total
    return element
