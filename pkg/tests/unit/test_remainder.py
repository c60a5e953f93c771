import pytest
from fractions import Fraction
from itertools import combinations

from hypothesis import given, settings
import hypothesis.strategies as st

from vertexlab.arith import sort_with_sign
from vertexlab.remainder import (
    clear_memo,
    constant_term_prediction,
    is_balanced,
    limit_remainder,
    minimal_sym_remainder,
    orth_remainder,
    r1_orth,
    r1_sym,
    r1_sym_closed,
    rn_orth_recursive,
    rn_sym_closed,
    rn_sym_recursive,
)


def admissible(n, bound):
    """Strictly increasing index lists of length 2n+2 with even relation weight."""
    return [
        indices for indices in combinations(range(bound), 2 * n + 2)
        if (n + 1 + sum(indices)) % 2 == 0
    ]


class TestBaseCase:
    """Test R_1 from the six-fraction formula."""

    def test_known_values(self):
        """Test R_1(0,1,2,3) = 1/6 and R_1(0,1,3,4) = -5/24."""
        assert r1_sym((0, 1, 2, 3)) == Fraction(1, 6)
        assert r1_sym((0, 1, 3, 4)) == Fraction(-5, 24)

    @pytest.mark.parametrize("indices", admissible(1, 9))
    def test_formula_matches_closed_form(self, indices):
        """Test the base formula agrees with the n = 1 closed expression."""
        assert r1_sym(indices) == r1_sym_closed(indices)

    def test_odd_weight_rejected(self):
        """Test lists with n + 1 + sum odd have no remainder."""
        with pytest.raises(ValueError):
            r1_sym((0, 1, 2, 4))

    def test_wrong_length_rejected(self):
        """Test a list of the wrong length raises."""
        with pytest.raises(ValueError):
            rn_sym_closed(1, (0, 1, 2, 3, 4, 5))

    def test_negative_index_rejected(self):
        """Test negative entries raise."""
        with pytest.raises(ValueError):
            rn_sym_recursive(1, (-1, 0, 1, 2))


class TestClosedForm:
    """Test the closed formula against the recursion."""

    def test_minimal_values(self):
        """Test R_1(0..3) = 1/6 and R_2(0..5) = 1/480."""
        assert minimal_sym_remainder(1) == Fraction(1, 6)
        assert minimal_sym_remainder(2) == Fraction(1, 480)
        assert rn_sym_closed(2, range(6)) == Fraction(1, 480)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_minimal_matches_closed(self, n):
        """Test the minimal remainder is the closed formula at 0..2n+1."""
        assert minimal_sym_remainder(n) == rn_sym_closed(n, range(2 * n + 2))

    @pytest.mark.parametrize("indices", admissible(1, 10))
    def test_recursion_n1(self, indices):
        """Test recursion and closed form for n = 1."""
        assert rn_sym_recursive(1, indices) == rn_sym_closed(1, indices)

    @pytest.mark.parametrize("indices", admissible(2, 9))
    def test_recursion_n2(self, indices):
        """Test recursion and closed form for n = 2."""
        assert rn_sym_recursive(2, indices) == rn_sym_closed(2, indices)

    @pytest.mark.slow
    @pytest.mark.parametrize("indices", admissible(3, 10))
    def test_recursion_n3(self, indices):
        """Test recursion and closed form for n = 3."""
        assert rn_sym_recursive(3, indices) == rn_sym_closed(3, indices)

    def test_unbalanced_is_zero(self):
        """Test lists with more even than odd entries vanish."""
        indices = (0, 2, 4, 6)
        assert not is_balanced(indices)
        assert rn_sym_closed(1, indices) == 0
        assert rn_sym_recursive(1, indices) == 0

    def test_repeated_is_zero(self):
        """Test a repeated entry gives zero."""
        assert rn_sym_closed(1, (0, 1, 1, 2)) == 0
        assert rn_sym_recursive(1, (0, 1, 1, 2)) == 0

    @given(st.permutations([0, 1, 2, 3, 4, 5]))
    @settings(max_examples=30, deadline=None)
    def test_alternating(self, order):
        """Test both evaluations change sign with the permutation."""
        sign, _ = sort_with_sign(order)
        expected = sign * Fraction(1, 480)
        assert rn_sym_closed(2, order) == expected
        assert rn_sym_recursive(2, order) == expected

    def test_swap_symmetry(self):
        """Test exchanging each even entry with its odd partner."""
        for n, indices in [(1, (0, 3, 4, 5)), (2, (0, 1, 2, 3, 4, 5)), (2, (0, 1, 2, 5, 6, 7))]:
            swapped = [indices[k ^ 1] for k in range(len(indices))]
            assert rn_sym_recursive(n, swapped) == (-1) ** (n + 1) * rn_sym_recursive(n, indices)

    def test_clear_memo(self):
        """Test values survive a memo reset."""
        before = rn_sym_recursive(2, (0, 1, 2, 3, 6, 7))
        clear_memo()
        assert rn_sym_recursive(2, (0, 1, 2, 3, 6, 7)) == before


class TestLimit:
    """Test the x -> infinity behaviour of R_n(I, x, x+1)."""

    @pytest.mark.parametrize("front,expected", [
        ((0, 1, 2, 3), Fraction(1, 24)),
        ((0, 1, 4, 5), Fraction(2, 45)),
    ])
    def test_limit_values(self, front, expected):
        """Test the limit equals n/(n + sum I) R_{n-1}(I)."""
        assert limit_remainder(2, front) == expected
        assert constant_term_prediction(2, front) == expected

    def test_limit_rejects_small_n(self):
        """Test n = 1 has no lower remainder."""
        with pytest.raises(ValueError):
            limit_remainder(1, (0, 1))

    def test_limit_rejects_odd_weight(self):
        """Test the parity check on the leading entries."""
        with pytest.raises(ValueError):
            limit_remainder(2, (0, 1, 2, 4))


class TestOrthogonal:
    """Test the determinant-analogue remainders."""

    @pytest.mark.parametrize("first,second,expected", [
        ((0, 0), (1, 1), Fraction(7, 3)),
        ((0, 2), (1, 1), Fraction(17, 12)),
        ((0, 0), (1, 3), Fraction(39, 20)),
    ])
    def test_base_values(self, first, second, expected):
        """Test R_1(I, J) on small lists."""
        assert r1_orth(first, second) == expected
        assert rn_orth_recursive(1, first, second) == expected

    def test_rank_two(self):
        """Test R_2(000, 111) = 45/2 and the F(2) normalization."""
        assert rn_orth_recursive(2, (0, 0, 0), (1, 1, 1)) == Fraction(45, 2)
        assert orth_remainder(2, (0, 0, 0), (1, 1, 1)) == Fraction(45, 4)

    def test_rank_one_sign(self):
        """Test the F(1) remainder of D_0 is -7/3."""
        assert orth_remainder(1, (0, 0), (1, 1)) == Fraction(-7, 3)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_positive(self, n):
        """Test every term of the recursion is positive."""
        for shift in (0, 2):
            first = tuple(2 * k + shift for k in range(n + 1))
            second = tuple(2 * k + 1 for k in range(n + 1))
            assert rn_orth_recursive(n, first, second) > 0

    def test_order_does_not_matter(self):
        """Test the value depends only on the multisets I and J."""
        assert rn_orth_recursive(2, (2, 0, 0), (3, 1, 1)) == rn_orth_recursive(2, (0, 0, 2), (1, 1, 3))

    def test_parity_checked(self):
        """Test I must be even and J odd."""
        with pytest.raises(ValueError):
            rn_orth_recursive(1, (0, 1), (1, 1))
        with pytest.raises(ValueError):
            rn_orth_recursive(2, (0, 0), (1, 1))
