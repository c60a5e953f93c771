import pytest
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from vertexlab.classical import det_analog, det_analog_nontrivial, pfaffian, q, sergeev_minimal
from vertexlab.corrections import (
    Decoupling,
    DecouplingError,
    RelationResult,
    appendix_components,
    build_relation,
    decoupling_chain,
    extract_decoupling,
    kept_monomials,
    lift,
    minimal_relation,
    normal_order,
    omega_words,
    order_words,
    raise_decoupling,
    verify_appendix,
)
from vertexlab.remainder import orth_remainder, rn_sym_closed
from vertexlab.wbasis import Omega, WPoly, a_component, get_family, pr

W1 = Omega(1, 0)


def orth_cases(n, max_weight, fast_weight):
    """Nonzero determinant analogues D_{I,J} of O(n) up to the given weight."""
    cases = []
    evens, odds = range(0, max_weight, 2), range(1, max_weight, 2)
    for first in combinations_with_replacement(evens, n + 1):
        for second in combinations_with_replacement(odds, n + 1):
            weight = sum(first) + sum(second) + n + 1
            if weight > max_weight or not det_analog_nontrivial(first, second, n):
                continue
            if not det_analog(first, second, n):
                continue
            marks = [pytest.mark.slow] if weight > fast_weight else []
            cases.append(pytest.param(n, first, second, marks=marks, id=f"O{n}-{first}-{second}"))
    return cases


def pfaffian_cases(max_weight, fast_weight):
    """Index lists of the Sp(2) Pfaffians up to the given weight."""
    return [
        pytest.param(indices, marks=[pytest.mark.slow] if sum(indices) + 2 > fast_weight else [], id=str(indices))
        for indices in combinations(range(max_weight), 4)
        if sum(indices) + 2 <= max_weight
    ]


@pytest.fixture(scope="module")
def o1_relation():
    return build_relation(get_family("o", 1), det_analog((0, 0), (1, 1), 1), indices=((0, 0), (1, 1)))


@pytest.fixture(scope="module")
def sp1_relation():
    return build_relation(get_family("sp", 1), pfaffian((0, 1, 2, 3), 1), indices=((0, 1, 2, 3),))


class TestNormalOrdering:
    """Test the passage from classical monomials to Omega words."""

    def test_canonical(self):
        """Test Q01^2 goes to :Omega01 Omega01:."""
        assert normal_order(q(0, 1).multiply(q(0, 1))) == WPoly({(W1, W1): 1})

    def test_reversed_needs_charge(self):
        """Test the reversed strategy asks for the central charge."""
        with pytest.raises(ValueError):
            order_words({(W1, Omega(3, 0)): Fraction(1)}, "reversed")

    def test_unknown_strategy(self):
        """Test unknown strategies raise."""
        with pytest.raises(ValueError):
            order_words({}, "random")

    def test_reversed_differs_by_lower_degree(self):
        """Test the two strategies agree in top degree."""
        words = {(W1, Omega(3, 0)): Fraction(1)}
        canonical = order_words(words, "canonical")
        reversed_ = order_words(words, "reversed", Fraction(-1))
        assert (canonical - reversed_).max_degree < 2

    def test_omega_words(self):
        """Test enumeration of words by degree and weight."""
        assert list(omega_words(2, 4)) == [(W1, W1)]
        assert list(omega_words(1, 4)) == [(Omega(3, 0),), (Omega(3, 1),)]
        assert list(omega_words(2, 5)) == [(W1, Omega(2, 0))]


class TestLift:
    """Test lifting a free field top component to Omega words."""

    def test_lifts_realized_word(self):
        """Test the top component of :W1 W1: in Sp(2) lifts back to the word."""
        family = get_family("sp", 1)
        realized = family.realize(WPoly({(W1, W1): 1}))
        assert lift(realized, family, 2) == {(W1, W1): 1}

    def test_missing_degree(self):
        """Test an element with nothing in the requested degree lifts to nothing."""
        family = get_family("sp", 1)
        assert lift(family.realize(WPoly.w(1)), family, 2) == {}


class TestOrthogonalRelation:
    """Test the minimal O(1) relation D_0."""

    def test_relation(self, o1_relation):
        """Test D_0 = 2:Omega01 Omega01: + 3/2 Omega12 - 5/6 Omega03."""
        expected = (
            WPoly({(W1, W1): 2})
            + WPoly.omega(1, 2, Fraction(3, 2))
            - WPoly.omega(0, 3, Fraction(5, 6))
        )
        assert o1_relation.relation == expected
        assert o1_relation.kernel_ok
        assert o1_relation.passes == 1

    def test_remainder(self, o1_relation):
        """Test the remainder -7/3 and its projection."""
        assert o1_relation.remainder == Fraction(-7, 3)
        assert pr(3, o1_relation.by_degree[2]) == Fraction(-7, 3)

    def test_shape(self, o1_relation):
        """Test weight, top index and degree keys."""
        assert o1_relation.weight == 4
        assert o1_relation.top_index == 3
        assert sorted(o1_relation.by_degree) == [2, 4]

    def test_realization_vanishes(self, o1_relation):
        """Test the corrected relation lies in the kernel."""
        assert not get_family("o", 1).realize(o1_relation.relation)

    def test_minimal_relation_helper(self, o1_relation):
        """Test the family's minimal relation is D_0."""
        assert minimal_relation(get_family("o", 1)).relation == o1_relation.relation


    @pytest.mark.parametrize("n,first,second", orth_cases(1, 12, 8))
    def test_reversed_strategy(self, n, first, second):
        """Test both orderings give the same O(1) relation up to weight 12."""
        family = get_family("o", n)
        canonical = build_relation(family, det_analog(first, second, n))
        reversed_ = build_relation(family, det_analog(first, second, n), strategy="reversed")
        assert reversed_.remainder == canonical.remainder
        assert reversed_.relation == canonical.relation

    @pytest.mark.parametrize("n,first,second", orth_cases(1, 14, 8) + orth_cases(2, 14, 8))
    def test_remainder_matches_recursion(self, n, first, second):
        """Test the corrected D_{I,J} carries the recursive remainder in F(1) and F(2)."""
        family = get_family("o", n)
        result = build_relation(family, det_analog(first, second, n))
        assert result.remainder == orth_remainder(n, first, second)
        assert not family.realize(result.relation)

class TestSymplecticRelation:
    """Test the Pfaffian relation of Sp(2)."""

    def test_remainder(self, sp1_relation):
        """Test weight 8 and remainder 1/6."""
        assert sp1_relation.weight == 8
        assert sp1_relation.remainder == Fraction(1, 6)
        assert not get_family("sp", 1).realize(sp1_relation.relation)

    def test_top_degree_is_classical(self, sp1_relation):
        """Test the top component is the normally ordered Pfaffian."""
        assert sp1_relation.by_degree[4] == normal_order(pfaffian((0, 1, 2, 3), 1)).degree_component(2)

    def test_reversed_strategy_same_remainder(self):
        """Test the minimal remainder does not depend on the normal ordering."""
        result = build_relation(get_family("sp", 1), pfaffian((0, 1, 2, 3), 1), strategy="reversed")
        assert result.remainder == Fraction(1, 6)
        assert result.strategy == "reversed"

    @pytest.mark.parametrize("indices", pfaffian_cases(12, 9))
    def test_reversed_strategy_all_pfaffians(self, indices):
        """Test both orderings give the same relation for every Pfaffian of weight at most 12."""
        family = get_family("sp", 1)
        canonical = build_relation(family, pfaffian(indices, 1))
        reversed_ = build_relation(family, pfaffian(indices, 1), strategy="reversed")
        assert reversed_.remainder == canonical.remainder
        assert reversed_.relation == canonical.relation
        if canonical.weight % 2 == 0:
            assert canonical.remainder == rn_sym_closed(1, indices)

    def test_odd_weight_has_no_remainder(self):
        """Test odd weight relations report no remainder."""
        result = build_relation(get_family("sp", 1), pfaffian((0, 1, 2, 4), 1))
        assert result.weight == 9
        assert result.remainder is None

    def test_not_classical(self):
        """Test a polynomial outside the classical kernel is rejected."""
        with pytest.raises(ValueError):
            build_relation(get_family("sp", 1), q(0, 1))

    def test_remainder_matches_closed_formula(self):
        """Test relations for other index lists carry R_1(I)."""
        for indices in [(0, 1, 3, 4), (0, 1, 2, 5)]:
            result = build_relation(get_family("sp", 1), pfaffian(indices, 1))
            assert result.remainder == rn_sym_closed(1, indices)


class TestDecoupling:
    """Test decoupling relations."""

    def test_o1_w3(self, o1_relation):
        """Test W^3 = 6/7 :W1 W1: + 9/14 d^2 W^1."""
        decoupling = extract_decoupling(o1_relation)
        assert decoupling.m == 3
        expected = WPoly({(W1, W1): Fraction(6, 7)}) + WPoly.w(1, 2, Fraction(9, 14))
        assert decoupling.expression == expected

    def test_zero_remainder_rejected(self, o1_relation):
        """Test a relation without remainder cannot be solved."""
        flat = RelationResult(
            family="o", n=1, indices=(), weight=4, relation=o1_relation.relation,
            remainder=Fraction(0), kernel_ok=True,
        )
        with pytest.raises(DecouplingError):
            extract_decoupling(flat)

    def test_family_mismatch(self, o1_relation):
        """Test checking against another family raises."""
        with pytest.raises(DecouplingError):
            extract_decoupling(o1_relation, get_family("o", 2))

    def test_wrong_expression_fails_check(self):
        """Test a decoupling that does not vanish is refused when raised."""
        bogus = Decoupling(family="o", n=1, m=3, expression=WPoly.w(1, 2))
        with pytest.raises(DecouplingError):
            raise_decoupling(bogus)

    def test_sp1_w7(self, sp1_relation):
        """Test the Pfaffian relation decouples W^7 in Sp(2)."""
        decoupling = extract_decoupling(sp1_relation)
        assert decoupling.m == 7
        assert not get_family("sp", 1).realize(decoupling.relation())

    def test_o1_chain(self):
        """Test W^3, W^5 and W^7 decouple in O(1)."""
        family = get_family("o", 1)
        chain = decoupling_chain(family, 7)
        assert sorted(chain) == [3, 5, 7]
        for decoupling in chain.values():
            assert not family.realize(decoupling.relation())
            assert (decoupling.m, 0) not in a_component(decoupling.expression)

    def test_chain_below_first(self):
        """Test an empty chain below the first decoupled generator."""
        assert decoupling_chain(get_family("o", 1), 1) == {}

    def test_o2_relation(self):
        """Test the weight 6 relation of O(2) vanishes with a nonzero remainder."""
        family = get_family("o", 2)
        result = minimal_relation(family)
        assert result.weight == 6
        assert result.remainder == Fraction(45, 4) == orth_remainder(2, (0, 0, 0), (1, 1, 1))
        assert not family.realize(result.relation)

    def test_raised_decoupling_realizes_to_zero(self, o1_relation):
        """Test raising the W^3 decoupling gives a W^5 decoupling in the kernel."""
        family = get_family("o", 1)
        raised = raise_decoupling(extract_decoupling(o1_relation))
        assert raised.m == 5
        assert not family.realize(raised.relation())
        assert (5, 0) not in a_component(raised.expression)

    def test_missing_prerequisite(self):
        """Test raising W^5 without the W^3 decoupling raises."""
        with pytest.raises(DecouplingError):
            raise_decoupling(Decoupling(family="o", n=1, m=5, expression=WPoly.zero()))

    def test_kept_monomials(self):
        """Test monomials in derivatives of W^1 by weight."""
        assert list(kept_monomials([1], 4)) == [((1, 0), (1, 0)), ((1, 2),)]
        assert list(kept_monomials([1], 3)) == [((1, 1),)]
        assert list(kept_monomials([1, 3], 0)) == []
        assert ((3, 0),) in list(kept_monomials([1, 3], 4))

    @pytest.mark.slow
    def test_sp1_w9(self):
        """Test raising the W^7 decoupling to W^9 in Sp(2)."""
        family = get_family("sp", 1)
        chain = decoupling_chain(family, 9)
        assert sorted(chain) == [7, 9]
        assert not family.realize(chain[9].relation())


@pytest.mark.slow
class TestOrthosymplectic:
    """Test the weight 16 relation of Osp(1,2)."""

    def test_appendix_components(self):
        """Test the stored relation in the canonical basis."""
        components = appendix_components()
        assert sorted(components) == [1, 2, 3, 4]
        assert components[4] == normal_order(sergeev_minimal())
        word = (W1, W1, Omega(11, 2))
        assert components[3].coefficient(word) == Fraction(-13, 84)
        assert (15, 0) not in a_component(components[1])

    def test_verify_appendix(self):
        """Test the stored relation vanishes with remainder 109/56000."""
        report = verify_appendix()
        assert report.kernel_ok
        assert report.remainder == "109/56000"
        assert report.ok

    def test_minimal_relation(self):
        """Test the correction loop reproduces the remainder."""
        family = get_family("osp", 1)
        result = minimal_relation(family)
        assert result.weight == 16
        assert result.remainder == Fraction(109, 56000)
        assert not family.realize(result.relation)
