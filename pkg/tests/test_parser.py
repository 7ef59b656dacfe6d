"""Tests for the polynomial text syntax."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brmult.errors import InstanceError, InstanceSyntaxError
from brmult.localring import Poly, PolyRing, parse_poly

PLANE = PolyRing(("x", "y"))

polys = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-40, 40), max_size=5
).map(lambda terms: Poly(PLANE, terms))


class TestParsePoly:
    """Tests for well-formed input."""

    def test_operators(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """Sums, products, powers, unary minus and parentheses."""
        x, y = xy
        assert parse_poly(ring, "x^2 - 2*x*y + y^2") == (x - y) ** 2
        assert parse_poly(ring, "-(x + y)^2") == -((x + y) ** 2)
        assert parse_poly(ring, "3") == ring.constant(3)
        assert parse_poly(ring, "  x *  y ") == x * y

    def test_power_binds_tighter_than_unary_minus(self, ring: PolyRing) -> None:
        """-x^2 is -(x^2)."""
        assert parse_poly(ring, "-x^2") == -(ring.gen("x") ** 2)

    def test_ring_parse_shortcut(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """PolyRing.parse delegates to the parser."""
        x, y = xy
        assert ring.parse("x*y + 1") == x * y + 1

    @given(polys)
    def test_canonical_text_round_trip(self, f: Poly) -> None:
        """Printing then parsing gives the same polynomial."""
        assert parse_poly(PLANE, str(f)) == f


class TestParseErrors:
    """Tests for diagnostics and their positions."""

    def test_juxtaposition_is_an_error(self, ring: PolyRing) -> None:
        """2x needs an explicit '*'."""
        with pytest.raises(InstanceSyntaxError, match="juxtaposition") as info:
            parse_poly(ring, "2x", line=4)
        assert (info.value.line, info.value.column) == (4, 2)

    def test_space_separated_factors(self, ring: PolyRing) -> None:
        """x y is not a product either."""
        with pytest.raises(InstanceSyntaxError) as info:
            parse_poly(ring, "x y")
        assert info.value.column == 3

    def test_missing_exponent(self, ring: PolyRing) -> None:
        """The caret is reported."""
        with pytest.raises(InstanceSyntaxError, match="exponent") as info:
            parse_poly(ring, "y^", line=1)
        assert info.value.column == 2

    def test_column_offset(self, ring: PolyRing) -> None:
        """Columns are shifted by where the text starts on its line."""
        with pytest.raises(InstanceSyntaxError) as info:
            parse_poly(ring, "y^", line=6, column=3)
        assert (info.value.line, info.value.column) == (6, 4)
        assert str(info.value).startswith("line 6, column 4:")

    def test_unknown_variable(self, ring: PolyRing) -> None:
        """Undeclared names are input errors, not syntax errors."""
        with pytest.raises(InstanceError, match="unknown variable 'z'") as info:
            parse_poly(ring, "x + z")
        assert not isinstance(info.value, InstanceSyntaxError)
        assert info.value.column == 5

    @pytest.mark.parametrize(
        "text, message",
        [
            ("", "expected a polynomial"),
            ("(x + y", "expected '\\)'"),
            ("x +", "unexpected end"),
            ("x $ y", "unexpected character"),
            ("x )", "unexpected"),
        ],
    )
    def test_malformed(self, ring: PolyRing, text: str, message: str) -> None:
        """Malformed input raises a positioned syntax error."""
        with pytest.raises(InstanceSyntaxError, match=message):
            parse_poly(ring, text)
