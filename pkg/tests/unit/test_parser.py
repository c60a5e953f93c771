import pytest
from fractions import Fraction

from vertexlab.classical import QPoly, pfaffian
from vertexlab.freefield import VPoly
from vertexlab.freefield.fields import beta, gamma, phi
from vertexlab.models.schemas import TermModel
from vertexlab.parser import (
    ParseError,
    format_poly,
    parse_expr,
    poly_from_json,
    poly_to_json,
    terms_to_poly,
)
from vertexlab.wbasis import Omega, WPoly, walgebra

W1 = Omega(1, 0)


class TestFreeFields:
    """Test free field expressions."""

    def test_beta_gamma_monomial(self):
        """Test a product of generators is a monomial."""
        assert parse_expr("b1[0] g1[2]") == VPoly.monomial([beta(1, 0), gamma(1, 2)])

    def test_fermion_sign(self):
        """Test odd factors are sorted with sign."""
        assert parse_expr("f[1] f[0]") == -parse_expr("f[0] f[1]")
        assert parse_expr("f2[0]") == VPoly.generator(phi(2, 0))

    def test_coefficients(self):
        """Test rational coefficients and signs."""
        expected = VPoly.generator(beta(), Fraction(3, 2)) - VPoly.generator(gamma())
        assert parse_expr("3/2 * b1[0] - g1[0]") == expected


class TestOmegaExpressions:
    """Test Omega and W expressions."""

    def test_canonical_word_without_charge(self):
        """Test sorted plain words need no central charge."""
        assert parse_expr("2 * :Om0,1 Om0,1:") == WPoly({(W1, W1): 2})

    def test_antisymmetry(self):
        """Test Om1,0 is -Om0,1."""
        assert parse_expr("Om1,0") == -WPoly.w(1)

    def test_derivatives(self):
        """Test bracketed derivative orders."""
        assert parse_expr("W1[2]") == WPoly.w(1, 2)
        assert parse_expr("Om0,1[1]") == WPoly.omega(0, 2)

    def test_reordering_needs_charge(self):
        """Test an unsorted word without central charge raises."""
        with pytest.raises(ParseError):
            parse_expr("W3 W1")

    def test_reordering_with_charge(self):
        """Test an unsorted word is normally ordered in M^+_c."""
        expected = walgebra(Fraction(-1)).wick(WPoly.w(3), WPoly.w(1))
        assert parse_expr("W3 W1", Fraction(-1)) == expected

    def test_even_w_rejected(self):
        """Test W2 is not a generator."""
        with pytest.raises(ParseError):
            parse_expr("W2")

    def test_constant(self):
        """Test a bare number is a multiple of the vacuum."""
        assert parse_expr("1/2") == WPoly.one() * Fraction(1, 2)


class TestClassical:
    """Test Q expressions."""

    def test_pfaffian(self):
        """Test the degree two Pfaffian parses."""
        text = "Q(0,1)Q(2,3) - Q(0,2)Q(1,3) + Q(0,3)Q(1,2)"
        parsed = parse_expr(text)
        assert isinstance(parsed, QPoly)
        assert parsed == pfaffian((0, 1, 2, 3), 1)


class TestErrors:
    """Test malformed input."""

    def test_unknown_token_position(self):
        """Test the position of an unknown character."""
        with pytest.raises(ParseError) as exc_info:
            parse_expr("W1 + $")
        assert exc_info.value.position == 5

    def test_mixed_domains(self):
        """Test free fields and Omegas cannot be mixed."""
        with pytest.raises(ParseError):
            parse_expr("b1[0] + W1")

    def test_empty(self):
        """Test empty input."""
        with pytest.raises(ParseError):
            parse_expr("   ")

    def test_dangling_operator(self):
        """Test a trailing sign."""
        with pytest.raises(ParseError):
            parse_expr("W1 +")

    def test_unclosed_word(self):
        """Test a normally ordered word without its closing colon."""
        with pytest.raises(ParseError):
            parse_expr(":W1 W3")


class TestPrinting:
    """Test text and JSON output."""

    @pytest.mark.parametrize("text", [
        "2 * :Om0,1 Om0,1: + 3/2 * Om1,2 - 5/6 * W3",
        "b1[0] - :f[0] f[1]:",
        "Q(0,1)Q(0,1)",
    ])
    def test_format_parses_back(self, text):
        """Test printed forms parse to the same element."""
        value = parse_expr(text)
        assert parse_expr(format_poly(value)) == value

    def test_zero_prints(self):
        """Test the zero element."""
        assert format_poly(WPoly.zero()) == "0"

    def test_json(self):
        """Test the JSON mirror carries the type and canonical terms."""
        value = parse_expr("2 * :Om0,1 Om0,1: - 7/3 * W3")
        data = poly_to_json(value)
        assert data["type"] == "WPoly"
        assert {"word": "Om0,3", "coefficient": "-7/3"} in data["terms"]
        assert poly_from_json(data) == value

    def test_json_unknown_type(self):
        """Test an unknown type name is rejected."""
        with pytest.raises(ParseError):
            poly_from_json({"type": "Matrix", "terms": []})

    def test_terms_to_poly_models(self):
        """Test rebuilding from TermModels, including the vacuum."""
        terms = [TermModel(word="Om0,1", coefficient="2"), TermModel(word="1", coefficient="-1/2")]
        assert terms_to_poly(WPoly, terms) == WPoly.w(1, 0, 2) - WPoly.one() * Fraction(1, 2)

    def test_terms_to_poly_type_mismatch(self):
        """Test a free field word in a WPoly document raises."""
        with pytest.raises(ParseError):
            terms_to_poly(WPoly, [{"word": "b1[0]", "coefficient": "1"}])
