import random
from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from vertexlab.freefield import (
    VPoly,
    circle,
    configure_engine,
    derive,
    generator,
    get_engine,
    ope_all,
    parity,
    supercommutative_product,
    wick,
    wick_all,
)
from vertexlab.freefield.engine import EngineError
from vertexlab.freefield.fields import beta, gamma, phi
from vertexlab.freefield.identities import (
    identity_failures,
    locality_failures,
    pole_bound,
    random_element,
    skew_symmetry_failures,
    weight_failures,
)
from vertexlab.wbasis import get_family


def field(g):
    return generator(g)


class TestGeneratorOPEs:
    """Test the basic pairings of beta, gamma and phi."""

    def test_beta_gamma(self):
        """Test beta(0)gamma is the vacuum and gamma(0)beta its negative."""
        assert circle(field(beta()), 0, field(gamma())) == VPoly.one()
        assert circle(field(gamma()), 0, field(beta())) == -VPoly.one()

    def test_phi_phi(self):
        """Test phi(0)phi is the vacuum."""
        assert circle(field(phi()), 0, field(phi())) == VPoly.one()

    def test_colors_do_not_pair(self):
        """Test fields of different colors commute."""
        assert not circle(field(beta(1)), 0, field(gamma(2)))

    def test_derivative_pairing(self):
        """Test (d gamma)(1) beta = 1."""
        assert circle(field(gamma(1, 1)), 1, field(beta())) == VPoly.one()

    def test_ope_table_locality(self):
        """Test beta gamma has a single pole."""
        table = ope_all(field(beta()), field(gamma()))
        assert table.locality_bound == 1
        assert table[0] == VPoly.one()


class TestWickProducts:
    """Test normally ordered products of free fields."""

    def test_wick_of_generators(self):
        """Test :beta gamma: is the supercommutative monomial."""
        assert wick(field(beta()), field(gamma())) == VPoly.monomial([beta(), gamma()])

    def test_fermions_anticommute(self):
        """Test :phi d(phi): = -:d(phi) phi:."""
        left = wick(field(phi(1, 0)), field(phi(1, 1)))
        right = wick(field(phi(1, 1)), field(phi(1, 0)))
        assert left == -right
        assert left

    def test_fermion_square_vanishes(self):
        """Test :phi phi: = 0."""
        assert not wick(field(phi()), field(phi()))

    def test_monomial_repeated_odd_is_zero(self):
        """Test a monomial with a repeated odd factor is zero."""
        assert not VPoly.monomial([phi(1, 2), phi(1, 2)])

    def test_symbol_product(self):
        """Test the graded product signs odd factors and drops contractions."""
        a, b = field(phi(1, 0)), field(phi(1, 1))
        assert supercommutative_product(a, b) == -supercommutative_product(b, a)
        assert not supercommutative_product(a, a)
        product = supercommutative_product(field(beta()), field(gamma()))
        assert product == VPoly.monomial([beta(), gamma()])

    def test_wick_all_nests_right(self):
        """Test iterated products agree with explicit nesting."""
        a, b, c = field(beta(1, 1)), field(gamma(1, 0)), field(beta(1, 0))
        assert wick_all(a, b, c) == wick(a, wick(b, c))


class TestDerivation:
    """Test the translation operator."""

    def test_derive_generator(self):
        """Test d beta = beta[1]."""
        assert derive(field(beta())) == field(beta(1, 1))

    def test_derive_is_derivation_of_circle(self):
        """Test d(a(n)b) = (da)(n)b + a(n)(db)."""
        w1 = get_family("o", 1).w(1)
        for n in range(3):
            left = derive(circle(w1, n, w1))
            right = circle(derive(w1), n, w1) + circle(w1, n, derive(w1))
            assert left == right

    def test_derivative_in_first_slot(self):
        """Test (da)(n)b = -n a(n-1)b."""
        sp1 = get_family("sp", 1)
        a, b = sp1.w(1), sp1.w(3)
        for n in range(1, 5):
            assert circle(derive(a), n, b) == -n * circle(a, n - 1, b)


class TestVirasoro:
    """Test the fourth-order pole of W^1 with itself."""

    @pytest.mark.parametrize("key,expected", [
        ("sp", Fraction(-1, 2)),
        ("o", Fraction(1, 4)),
        ("osp", Fraction(-1, 4)),
    ])
    def test_central_term(self, key, expected):
        """Test w1(3)w1 = c/2 in rank one families."""
        family = get_family(key, 1)
        w1 = family.w(1)
        assert circle(w1, 3, w1) == VPoly.one() * expected
        assert family.central_charge == 2 * expected


class TestParity:
    """Test parity bookkeeping."""

    def test_parity(self):
        """Test even, odd and zero elements."""
        assert parity(VPoly.monomial([beta(), gamma()])) == 0
        assert parity(field(phi())) == 1
        assert parity(VPoly.zero()) == 0

    def test_mixed_parity_raises(self):
        """Test an inhomogeneous element is rejected."""
        with pytest.raises(EngineError):
            parity(field(beta()) + field(phi()))


class TestEngineConfiguration:
    """Test the shared engine instance."""

    def test_configure_engine_replaces_instance(self):
        """Test a new memo budget installs a fresh engine."""
        engine = configure_engine(1000)
        assert get_engine() is engine
        assert engine.memo_limit == 1000
        configure_engine(2_000_000)


FAMILY_KEYS = [("sp", 1), ("sp", 2), ("o", 1), ("o", 2), ("osp", 1)]


class TestIdentities:
    """Test the engine against the vertex algebra axioms on random elements."""

    @pytest.mark.parametrize("key,n", FAMILY_KEYS)
    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_random_free_field_pairs(self, key, n, seed):
        """Test every identity holds for random homogeneous free field elements."""
        rng = random.Random(seed)
        fields = get_family(key, n).free_fields()
        a = random_element(rng, fields)
        b = random_element(rng, fields)
        assert identity_failures(a, b) == {}

    @pytest.mark.slow
    @pytest.mark.parametrize("key,n", FAMILY_KEYS)
    @settings(max_examples=250, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_many_random_free_field_pairs(self, key, n, seed):
        """Test every identity on 500 random elements of weight at most 5 per family."""
        rng = random.Random(seed)
        fields = get_family(key, n).free_fields()
        assert identity_failures(random_element(rng, fields), random_element(rng, fields)) == {}

    @pytest.mark.parametrize("key,n", FAMILY_KEYS)
    @settings(max_examples=20, deadline=None)
    @given(
        m=st.sampled_from([1, 3, 5]),
        k=st.integers(min_value=0, max_value=2),
        other=st.sampled_from([1, 3]),
    )
    def test_realized_generators(self, key, n, m, k, other):
        """Test every identity holds for derivatives of realized generators."""
        family = get_family(key, n)
        a = derive(family.w(m), k)
        b = family.w(other)
        assert identity_failures(a, b) == {}

    def test_odd_pair_sign(self):
        """Test skew-symmetry picks up the sign for two fermions."""
        a, b = field(phi(1, 0)), field(phi(1, 1))
        assert skew_symmetry_failures(a, b) == []
        assert circle(b, 1, a) == -VPoly.one()
        assert circle(a, 1, b) == VPoly.one()

    def test_locality_bound(self):
        """Test beta(n)gamma vanishes from the weight bound on."""
        a, b = field(beta()), field(gamma())
        assert pole_bound(a, b) == 1
        assert locality_failures(a, b) == []

    def test_weight_needs_homogeneous(self):
        """Test the weight check rejects elements mixing weights."""
        mixed = field(beta()) + VPoly.monomial([beta(), gamma()])
        with pytest.raises(ValueError):
            weight_failures(mixed, field(gamma()))

    def test_random_element_is_homogeneous(self):
        """Test random elements carry one weight and one parity."""
        rng = random.Random(7)
        fields = get_family("osp", 1).free_fields()
        for _ in range(20):
            element = random_element(rng, fields)
            assert element
            assert element.weight2() is not None
            assert element.weight2() <= 10
            parity(element)

    def test_free_fields(self):
        """Test the underived free fields of each family."""
        assert get_family("sp", 1).free_fields() == [beta(1), gamma(1)]
        assert get_family("o", 2).free_fields() == [phi(1), phi(2)]
        assert get_family("osp", 1).free_fields() == sorted([beta(1), gamma(1), phi(1)])
