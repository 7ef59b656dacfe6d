"""Tests for polynomials, jets and ideals of the local ring."""

from __future__ import annotations

from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brmult.errors import Indeterminate, NotFiniteColength, PreconditionError
from brmult.localring import (
    JetSpace,
    MIdeal,
    Poly,
    PolyRing,
    compress,
    ideal_colength,
    ideal_contains,
    ideal_eq,
    ideal_leq,
    ideal_power,
    mprimary_exponent,
    nakayama_exponent,
    quotient_dimension,
)
from brmult.localring.poly import monomials_of_degree, monomials_up_to

PLANE = PolyRing(("x", "y"))

# Staircase monomial ideals: pure powers plus optional mixed corners.
monomial_ideals = st.tuples(
    st.integers(1, 4),
    st.integers(1, 4),
    st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), max_size=2),
).map(lambda t: MIdeal.monomial(PLANE, [(t[0], 0), (0, t[1]), *t[2]]))


class TestPoly:
    """Tests for polynomial arithmetic and queries."""

    def test_canonical_text(self, xy: tuple[Poly, Poly]) -> None:
        """Terms print highest degree first, negatives with a minus sign."""
        x, y = xy
        assert str((x + y) ** 2) == "x^2 + 2*x*y + y^2"
        assert str(x - y) == "x - y"
        assert str(-x) == "-x"
        assert str(x - x) == "0"

    def test_order_and_degree(self, xy: tuple[Poly, Poly]) -> None:
        """ord is the least total degree of a term."""
        x, y = xy
        f = x**2 + y**3
        assert f.ord == 2
        assert f.degree == 3
        assert (f - f).ord == float("inf")

    def test_truncate(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """Terms above the bound disappear."""
        x, y = xy
        assert ((x + y) ** 3).truncate(2).is_zero()
        assert (ring.one + x + x**2).truncate(1) == ring.one + x

    def test_units(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """Units of the local ring have a nonzero constant term."""
        x, _ = xy
        assert (ring.one + x).is_unit()
        assert not x.is_unit()

    def test_shift_and_monomial(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """Shifting multiplies by a monomial."""
        x, y = xy
        assert (x + y).shift((1, 1)) == x**2 * y + x * y**2
        assert ring.monomial((2, 1), 3) == 3 * x**2 * y
        assert ring.monomial((1, 0)).is_monomial()

    def test_negative_power_rejected(self, xy: tuple[Poly, Poly]) -> None:
        """Negative exponents are not polynomials."""
        with pytest.raises(PreconditionError):
            _ = xy[0] ** -1

    def test_mismatched_rings_rejected(self, ring: PolyRing) -> None:
        """Variable counts must agree."""
        other = PolyRing(("x", "y", "z"))
        with pytest.raises(PreconditionError):
            _ = ring.gen(0) + other.gen(0)

    def test_ring_validation(self) -> None:
        """Rings need distinct variables."""
        with pytest.raises(PreconditionError):
            PolyRing(())
        with pytest.raises(PreconditionError):
            PolyRing(("x", "x"))

    def test_rational_coefficients(self, rational_ring: PolyRing) -> None:
        """Over Q, coefficients stay exact."""
        x, _ = rational_ring.gens()
        assert str(x.scale(3) - x.scale(5)) == "-2*x"


class TestMonomials:
    """Tests for monomial enumeration."""

    def test_counts(self) -> None:
        """There are C(s + d - 1, d - 1) monomials of degree s."""
        for s in range(6):
            assert len(monomials_of_degree(2, s)) == s + 1
            assert len(monomials_of_degree(3, s)) == comb(s + 2, 2)
        assert len(monomials_up_to(2, 3)) == comb(5, 2)


class TestJets:
    """Tests for jet coordinates."""

    def test_dimension(self) -> None:
        """F/m^{s+1}F has dimension r * C(s + d, d)."""
        assert JetSpace(2, 2, 2).dim == 12
        assert JetSpace(2, 1, -1).dim == 0

    def test_coordinates_round_trip(self) -> None:
        """split inverts coordinate."""
        space = JetSpace(2, 3, 2)
        for component in range(3):
            for m in space.monomials:
                assert space.split(space.coordinate(component, m)) == (component, m)

    def test_vector_and_column(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """A jet drops high-degree terms and converts back."""
        x, y = xy
        space = JetSpace(2, 2, 1)
        jet = space.vector((x + x**2, y))
        assert space.to_column(ring, jet) == (x, y)

    def test_quotient_dimension(self, ring: PolyRing) -> None:
        """dim R/m = 1 and dim R/m^2 = 3."""
        m = ring.maximal_ideal()
        assert quotient_dimension(ring, 1, m.columns, 1) == 1
        assert quotient_dimension(ring, 1, (m**2).columns, 2) == 3

    def test_exponent_edge_cases(self, ring: PolyRing) -> None:
        """The zero free module needs no exponent; no generators never certify."""
        assert nakayama_exponent(ring, 0, (), 5) == 0
        assert nakayama_exponent(ring, 1, (), 5) == Indeterminate(5)


class TestIdealColength:
    """Tests for finite-colength certificates of ideals."""

    @pytest.mark.parametrize("s", [1, 2, 3, 4, 5])
    def test_powers_of_maximal_ideal(self, ring: PolyRing, s: int) -> None:
        """lambda(R/m^s) = C(s + 1, 2)."""
        ideal = MIdeal.maximal_power(ring, s)
        assert mprimary_exponent(ideal) == s
        assert ideal_colength(ideal) == comb(s + 1, 2)

    def test_monomial_staircase(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """(x^2, y^3) has exponent 4 and colength 6."""
        x, y = xy
        ideal = MIdeal(ring, (x**2, y**3))
        assert mprimary_exponent(ideal) == 4
        assert ideal_colength(ideal) == 6

    def test_determinant_ideal_of_worked_example(
        self, ring: PolyRing, xy: tuple[Poly, Poly]
    ) -> None:
        """(x, y^2 - x^2) has colength 2."""
        x, y = xy
        assert ideal_colength(MIdeal(ring, (x, y**2 - x**2))) == 2

    def test_unit_ideal(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """A unit generator gives colength zero."""
        x, _ = xy
        ideal = MIdeal(ring, (ring.one + x,))
        assert mprimary_exponent(ideal) == 0
        assert ideal_colength(ideal) == 0
        assert ideal.is_unit_ideal()

    def test_not_m_primary(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """(x) never gets a certificate."""
        x, _ = xy
        ideal = MIdeal(ring, (x,))
        assert mprimary_exponent(ideal, 6) == Indeterminate(6)
        with pytest.raises(NotFiniteColength):
            ideal_colength(ideal, 6)

    def test_zero_generators_dropped(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """Zero and repeated generators are removed."""
        x, y = xy
        assert MIdeal(ring, (x, ring.zero, x, y)).gens == (x, y)

    def test_three_variables(self) -> None:
        """lambda(k[x,y,z]/m^2) = 4."""
        ring = PolyRing(("x", "y", "z"))
        assert ideal_colength(MIdeal.maximal_power(ring, 2)) == 4

    @given(monomial_ideals)
    def test_exponent_certificate_holds(self, ideal: MIdeal) -> None:
        """With s certified, every monomial of degree s lies in the ideal and s is least."""
        s = mprimary_exponent(ideal)
        assert isinstance(s, int)
        assert all(ideal_contains(ideal, PLANE.monomial(m)) for m in monomials_of_degree(2, s))
        if s > 0:
            assert not all(
                ideal_contains(ideal, PLANE.monomial(m)) for m in monomials_of_degree(2, s - 1)
            )

    @given(monomial_ideals)
    def test_monomial_colength_counts_standard_monomials(self, ideal: MIdeal) -> None:
        """lambda(R/I) counts the monomials outside I."""
        exps = ideal.exponents()
        outside = [
            m
            for m in monomials_up_to(2, 8)
            if not any(m[0] >= e[0] and m[1] >= e[1] for e in exps)
        ]
        assert ideal_colength(ideal) == len(outside)

    @given(monomial_ideals, monomial_ideals)
    def test_product_colength_is_superadditive(self, a: MIdeal, b: MIdeal) -> None:
        """lambda(R/IJ) >= lambda(R/I) + lambda(R/J)."""
        assert ideal_colength(a * b) >= ideal_colength(a) + ideal_colength(b)


class TestIdealMembership:
    """Tests for membership, containment and compression."""

    def test_contains(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """Membership in (x^2, y^3)."""
        x, y = xy
        ideal = MIdeal(ring, (x**2, y**3))
        assert ideal_contains(ideal, x**2 * y + y**5)
        assert not ideal_contains(ideal, x * y)
        assert not ideal_contains(ideal, x * y**2)
        assert ideal_contains(ideal, ring.zero)

    def test_non_monomial_membership(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """y^2 lies in (x, y^2 - x^2) while y does not."""
        x, y = xy
        ideal = MIdeal(ring, (x, y**2 - x**2))
        assert ideal_contains(ideal, y**2)
        assert not ideal_contains(ideal, y)

    def test_leq_and_eq(self, ring: PolyRing) -> None:
        """m^3 lies in m^2, and m * m = m^2."""
        m = ring.maximal_ideal()
        assert ideal_leq(MIdeal.maximal_power(ring, 3), m**2)
        assert not ideal_leq(m, m**2)
        assert ideal_eq(m * m, MIdeal.maximal_power(ring, 2))
        assert ideal_power(m, 0).is_unit_ideal()

    def test_compress_keeps_the_ideal(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """Compression preserves the ideal and its colength."""
        x, y = xy
        ideal = MIdeal(ring, (x**2 + y**3, x * y, y**3, x**3 + x * y**2, y**4))
        s = mprimary_exponent(ideal)
        assert isinstance(s, int)
        smaller = compress(ideal, s)
        assert ideal_eq(smaller, ideal)
        assert ideal_colength(smaller) == ideal_colength(ideal)

    def test_exponents_need_monomial_ideal(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """Only monomial ideals report exponents."""
        x, y = xy
        with pytest.raises(PreconditionError):
            MIdeal(ring, (x + y,)).exponents()
        assert MIdeal(ring, (x**2, x**3, y)).exponents() == [(0, 1), (2, 0)]
