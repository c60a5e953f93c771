"""
Reference relation of weight 16 for Osp(1,2), stored by degree.

Each entry is ``coefficient  a,b a,b ...`` for the word
:Omega_{a,b} Omega_{a,b} ...:. The degree-1 part is the second derivative of
a combination of Omegas in A_13 plus a multiple of W^15; that multiple is
not stored.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from tqdm import tqdm

from ..arith import format_rational, parse_rational
from ..freefield import VPoly
from ..models.schemas import AppendixReport
from ..wbasis import Omega, WPoly, canonicalize, get_family, pr, walgebra

logger = logging.getLogger(__name__)

EXPECTED_REMAINDER = Fraction(109, 56000)

_DEGREE_FOUR = """
1 0,1 0,1 2,3 2,3
1 0,2 0,2 1,3 1,3
1 0,3 0,3 1,2 1,2
-2 0,2 0,3 1,2 1,3
2 0,1 0,3 1,2 2,3
-2 0,1 0,2 1,3 2,3
"""

_DEGREE_THREE = """
-13/84 0,1 0,1 2,9
11/60 0,1 0,1 3,8
-2/35 0,1 0,2 2,8
1/12 0,1 0,2 3,7
11/30 0,1 0,3 2,7
-9/20 0,1 0,3 3,6
-11/28 0,1 1,2 2,7
1/2 0,1 1,2 3,6
1/12 0,1 1,3 2,6
-2/15 0,1 1,3 3,5
-5/12 0,1 2,3 1,6
-1/5 0,1 2,3 2,5
11/12 0,1 2,3 3,4
1/35 0,2 0,2 1,8
-1/15 0,2 0,2 3,6
-11/30 0,2 0,3 1,7
7/12 0,2 0,3 3,5
11/28 0,2 1,2 1,7
-7/10 0,2 1,2 3,5
1/3 0,2 1,3 1,6
-1/4 0,2 1,3 2,5
-1/12 0,2 1,3 3,4
9/20 0,2 2,3 1,5
9/40 0,3 0,3 1,6
-7/24 0,3 0,3 2,5
-11/12 0,3 1,2 1,6
19/20 0,3 1,2 2,5
1/3 0,3 1,2 3,4
-11/56 1,2 1,2 0,7
5/8 1,2 1,2 3,4
2/15 0,3 1,3 1,5
-1/4 0,3 1,3 2,4
1/12 1,2 1,3 0,6
-7/12 0,3 1,4 2,3
5/12 0,3 2,3 2,3
-9/20 1,2 0,5 2,3
-3/4 1,2 2,3 2,3
7/12 0,4 1,3 2,3
-1/15 1,3 1,3 0,5
1/3 1,3 1,3 2,3
"""

_DEGREE_TWO = """
19/432 0,1 1,12
-113/6720 0,1 2,11
-569/8640 0,1 3,10
143/1008 0,1 4,9
-23/700 0,1 5,8
-559/2016 0,1 6,7
-151/20160 0,2 1,11
-1/252 0,2 2,10
-55/576 0,2 3,9
1/420 0,2 4,8
851/2400 0,2 5,7
-713/6720 0,3 1,10
-751/20160 0,3 2,9
163/672 0,3 3,8
-73/1440 0,3 4,7
-49/100 0,3 5,6
-163/4032 1,2 0,11
17/336 1,2 1,10
1639/10080 1,2 2,9
-227/2240 1,2 3,8
-55/168 1,2 4,7
7/32 1,2 5,6
1/60 0,4 2,8
-7/288 0,4 3,7
467/60480 1,3 0,10
-13/756 1,3 1,9
31/2240 1,3 2,8
47/1260 1,3 3,7
-1/32 1,3 4,6
-1/525 0,5 1,8
-33/400 0,5 2,7
761/7200 0,5 3,6
11/96 1,4 2,7
-7/48 1,4 3,6
-27/448 2,3 0,9
131/2240 2,3 1,8
-31/84 2,3 2,7
37/72 2,3 3,6
-89/480 2,3 4,5
11/720 0,6 1,7
-7/288 0,6 3,5
-11/420 1,5 1,7
-3/160 1,5 2,6
23/300 1,5 3,5
11/224 2,4 1,7
-7/80 2,4 3,5
-99/2240 0,7 1,6
11/192 0,7 2,5
31/288 1,6 1,6
-109/480 1,6 2,5
35/576 1,6 3,4
151/800 2,5 2,5
-87/320 2,5 3,4
37/288 3,4 3,4
"""

# second-derivative block of the degree-1 part
_DEGREE_ONE_DERIVED = """
36613/26208000 0,13
63901699/6054048000 1,12
-293340107/12108096000 2,11
27769129/1345344000 3,10
-33135533/403603200 4,9
286002151/1210809600 5,8
-195930023/605404800 6,7
"""


def _parse_table(table: str) -> List[Tuple[Fraction, Tuple[Omega, ...]]]:
    rows = []
    for line in table.strip().splitlines():
        coeff, *pairs = line.split()
        word = []
        for pair in pairs:
            a, b = (int(x) for x in pair.split(","))
            word.append(Omega(a + b, a))
        rows.append((parse_rational(coeff), tuple(word)))
    return rows


@lru_cache(maxsize=1)
def appendix_components() -> Dict[int, WPoly]:
    """
    The stored components keyed by Omega degree, in the canonical basis.

    The degree-1 entry holds only the second derivative block; the W^15
    coefficient is what ``verify_appendix`` solves for.
    """
    family = get_family("osp", 1)
    components = {}
    for degree, table in ((4, _DEGREE_FOUR), (3, _DEGREE_THREE), (2, _DEGREE_TWO)):
        components[degree] = canonicalize(family, {word: c for c, word in _parse_table(table)})
    derived = WPoly.zero()
    for coeff, (g,) in _parse_table(_DEGREE_ONE_DERIVED):
        derived = derived + WPoly({(g,): coeff})
    components[1] = walgebra(family.central_charge).derive(derived, 2)
    return components


def appendix_relation(remainder: Fraction = EXPECTED_REMAINDER) -> WPoly:
    """The full relation with the given W^15 coefficient."""
    total = remainder * WPoly.w(15)
    for component in appendix_components().values():
        total = total + component
    return total


def _solve_w15(residual: VPoly, w15: VPoly) -> Fraction:
    """The x with residual + x * w15 vanishing on w15's leading term."""
    lead = max(w15.terms)
    return -residual.terms.get(lead, Fraction(0)) / w15.terms[lead]


def verify_appendix(threads: int = 1, progress: bool = False) -> AppendixReport:
    """
    Realize the reference relation in S(1) tensor F(1) and read its remainder.

    The stored components are realized without their W^15 term, the W^15
    coefficient is solved from the condition that the total vanishes, and
    the relation is in the kernel only if that coefficient clears every
    term. A nonzero realization is reported by free field degree, not raised.
    """
    family = get_family("osp", 1)
    components = appendix_components()
    residual = VPoly.zero()
    for degree in tqdm(sorted(components, reverse=True), desc="appendix", disable=not progress):
        residual = residual + family.realize(components[degree], threads=threads)
        logger.info("Realized degree %d component (%d terms)", degree, len(components[degree]))
    w15 = family.realize(WPoly.w(15))
    coefficient = _solve_w15(residual, w15)
    residual = residual + w15 * coefficient
    remainder = pr(15, components[1] + WPoly.w(15, 0, coefficient))
    offending = {str(2 * d): len(residual.degree_component(2 * d)) for d in range(5) if residual.degree_component(2 * d)}
    return AppendixReport(
        kernel_ok=not residual,
        remainder=format_rational(remainder),
        expected=format_rational(EXPECTED_REMAINDER),
        remainder_ok=remainder == EXPECTED_REMAINDER,
        residual_terms=offending,
        component_terms={str(d): len(p) for d, p in sorted(components.items())},
    )
