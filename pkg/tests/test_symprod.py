"""Tests for symmetric powers, graded products and Buchsbaum-Rim tables."""

from __future__ import annotations

from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brmult.config import Bounds
from brmult.errors import GeneratorOverflow, PreconditionError, WindowTooSmall
from brmult.localring import MIdeal, PolyRing
from brmult.submod import Submodule, colength, min_generators
from brmult.symprod import (
    BRTable,
    SymBasis,
    br_function,
    br_multiplicity,
    br_table,
    degree_check,
    expected_degree,
    finite_difference,
    graded_product,
    layered_product,
    mixed_br,
    mixed_br_stabilized,
    mu_table,
    sym_power,
)

PLANE = PolyRing(("x", "y"))

# (x^a, y^b) with a, b <= 2 as rank-one modules.
diagonal_ideals = st.tuples(st.integers(1, 2), st.integers(1, 2)).map(
    lambda t: Submodule.from_ideal(MIdeal.monomial(PLANE, [(t[0], 0), (0, t[1])]))
)


class TestSymBasis:
    """Tests for the basis of graded products of symmetric powers."""

    def test_ambient_rank(self) -> None:
        """rank S_n(R^r) = C(n + r - 1, r - 1), multiplied across factors."""
        assert SymBasis((2,), (3,)).ambient_rank == 4
        assert SymBasis((2, 1), (2, 3)).ambient_rank == 3
        assert SymBasis((3, 2), (2, 1)).ambient_rank == 12
        assert len(SymBasis((3, 2), (2, 1)).elements) == 12

    def test_mismatched_lengths(self) -> None:
        """One degree per factor."""
        with pytest.raises(PreconditionError):
            SymBasis((2, 2), (1,))


class TestProducts:
    """Tests for symmetric powers and graded products."""

    def test_powers_of_an_ideal(self, m_module: Submodule) -> None:
        """S_n(m) = m^n inside R."""
        for n in range(4):
            power = sym_power(m_module, n)
            assert power.ambient_rank == 1
            assert colength(power) == comb(n + 1, 2)
            assert power.exponent_bound == n

    def test_sym_power_of_direct_sum(self, mm_module: Submodule) -> None:
        """S_2(m + m) = m^2 S_2(R^2) has colength 3 * 3."""
        power = sym_power(mm_module, 2)
        assert power.ambient_rank == 3
        assert colength(power) == 9

    def test_sym_power_of_free_module(self, ring: PolyRing) -> None:
        """S_n(F) is everything."""
        assert colength(sym_power(Submodule.free(ring, 2), 3)) == 0

    def test_graded_product(self, m_module: Submodule) -> None:
        """m * m^2 = m^3 with the summed construction bound."""
        product = graded_product([(m_module, 1), (m_module, 2)])
        assert product.exponent_bound == 3
        assert colength(product) == 6

    def test_graded_product_needs_factors(self) -> None:
        """An empty product is rejected."""
        with pytest.raises(PreconditionError):
            graded_product([])

    def test_generator_cap(self, m_module: Submodule) -> None:
        """Products over the cap raise."""
        with pytest.raises(GeneratorOverflow) as info:
            sym_power(m_module, 5, Bounds(generator_cap=3))
        assert info.value.count == 6

    def test_negative_degree(self, m_module: Submodule) -> None:
        """Symmetric powers need n >= 0."""
        with pytest.raises(PreconditionError):
            sym_power(m_module, -1)

    def test_layered_product_degree_check(self, m_module: Submodule, ring: PolyRing) -> None:
        """Each layer sits one degree below the ambient."""
        x = ring.gen("x")
        with pytest.raises(PreconditionError):
            layered_product([(m_module, 2), (m_module, 2)], [(0, [(x,)], m_module, 0)])

    def test_layered_product(self, m_module: Submodule, ring: PolyRing) -> None:
        """x * m + m * y = m^2 at degree (1, 1)."""
        x, y = ring.gens()
        pairs = [(m_module, 1), (m_module, 1)]
        layers = [(0, [(x,)], m_module, 0), (1, [(y,)], m_module, 0)]
        assert colength(layered_product(pairs, layers)) == 3


class TestBRTable:
    """Tests for joint Buchsbaum-Rim tables and their differences."""

    def test_br_function_of_maximal_ideal(self, m_module: Submodule) -> None:
        """f(n) = lambda(R/m^n)."""
        assert [br_function([m_module], (n,)) for n in range(5)] == [0, 1, 3, 6, 10]

    def test_br_function_arity(self, m_module: Submodule) -> None:
        """One degree per module."""
        with pytest.raises(PreconditionError):
            br_function([m_module], (1, 1))

    def test_joint_table_of_two_maximal_ideals(self, m_module: Submodule) -> None:
        """f(n1, n2) = lambda(R/m^{n1+n2})."""
        table = br_table([m_module, m_module], (3, 3))
        assert table.extents == (4, 4)
        for (n1, n2), value in table.points():
            assert value == comb(n1 + n2 + 1, 2)
        assert table[(2, 1)] == 6
        assert table.top() == 21

    def test_table_of_direct_sum(self, mm_module: Submodule) -> None:
        """f(n) = (n + 1) C(n + 1, 2) for m + m."""
        table = br_table([mm_module], (4,))
        assert [int(v) for v in table.values] == [(n + 1) * comb(n + 1, 2) for n in range(5)]

    def test_window_checks(self, m_module: Submodule) -> None:
        """Windows are per module and non-negative."""
        with pytest.raises(PreconditionError):
            br_table([m_module], (2, 2))
        with pytest.raises(WindowTooSmall):
            br_table([m_module], (-1,))

    def test_parallel_table_matches_serial(self, m_module: Submodule) -> None:
        """Worker processes fill the same table."""
        serial = br_table([m_module, m_module], (2, 2))
        parallel = br_table([m_module, m_module], (2, 2), jobs=2)
        assert serial == parallel

    def test_finite_difference(self) -> None:
        """Backward differences shift the origin."""
        values = np.array([[comb(a + b + 1, 2) for b in range(4)] for a in range(4)])
        table = BRTable(2, (1, 1), (0, 0), values)
        diff = finite_difference(table, (1, 1))
        assert diff.origin == (1, 1)
        assert np.all(diff.values == 1)
        assert diff.stabilized
        with pytest.raises(WindowTooSmall):
            finite_difference(table, (4, 0))
        with pytest.raises(PreconditionError):
            finite_difference(table, (1,))

    def test_index_below_window(self) -> None:
        """Points below the origin are not in the table."""
        table = BRTable(2, (1,), (2,), np.array([1, 1]))
        with pytest.raises(IndexError):
            _ = table[(1,)]


class TestMultiplicities:
    """Tests for Buchsbaum-Rim multiplicities and mixed multiplicities."""

    def test_br_of_maximal_ideal(self, m_module: Submodule) -> None:
        """e(m) = 1, read off a stabilized window."""
        result = br_multiplicity(m_module)
        assert result.value == 1
        assert result.stabilized
        assert result.window == (3,)

    def test_br_of_maximal_ideal_square(self, ring: PolyRing) -> None:
        """e(m^2) = 4."""
        module = Submodule.from_ideal(MIdeal.maximal_power(ring, 2))
        assert br_multiplicity(module).value == 4

    def test_br_of_direct_sum(self, mm_module: Submodule) -> None:
        """br(m + m) = 3! times the leading coefficient 1/2."""
        assert br_multiplicity(mm_module).value == 3

    def test_br_window_too_small(self, m_module: Submodule) -> None:
        """The window must exceed d + r - 1."""
        with pytest.raises(WindowTooSmall):
            br_multiplicity(m_module, window=1)

    def test_mixed_br_of_maximal_ideals(self, m_module: Submodule) -> None:
        """br(m|m) = e(m|m) = 1."""
        result = mixed_br([m_module, m_module])
        assert result.value == 1
        assert result.stabilized
        assert result.window == (3, 3)

    def test_mixed_br_of_direct_sum_and_ideal(
        self, mm_module: Submodule, m_module: Submodule
    ) -> None:
        """br(m + m | m) = e(m^2 | m) = 2."""
        result = mixed_br_stabilized([mm_module, m_module])
        assert result.value == 2
        assert result.stabilized

    def test_mixed_br_arity_and_window(self, m_module: Submodule) -> None:
        """Exactly d modules and a window reaching r_k + 2."""
        with pytest.raises(PreconditionError):
            mixed_br([m_module])
        with pytest.raises(WindowTooSmall):
            mixed_br([m_module, m_module], (2, 3))

    @settings(max_examples=8)
    @given(diagonal_ideals, diagonal_ideals)
    def test_swapping_modules_transposes_the_table(self, a: Submodule, b: Submodule) -> None:
        """f(M2, M1) is f(M1, M2) with its axes swapped, so br(M1|M2) = br(M2|M1)."""
        forward = br_table([a, b], (3, 3))
        backward = br_table([b, a], (3, 3))
        assert np.array_equal(forward.values, backward.values.T)
        assert mixed_br([a, b]).value == mixed_br([b, a]).value


class TestDegree:
    """Tests for the total degree of the joint function."""

    def test_expected_degree(self) -> None:
        """d + sum(r_k) - q; the pair (m + m, m) has degree 3."""
        table = BRTable(2, (2, 1), (0, 0), np.zeros((1, 1), dtype=np.int64))
        assert expected_degree(table) == 3
        assert expected_degree(BRTable(2, (1, 1), (0, 0), np.zeros((1, 1)))) == 2

    def test_degree_check_on_maximal_ideals(self, m_module: Submodule) -> None:
        """lambda(R/m^{n1+n2}) has total degree 2."""
        check = degree_check(br_table([m_module, m_module], (4, 4)))
        assert check.degree == 2
        assert check.vanishing
        assert check.nonvanishing
        assert check

    def test_degree_check_needs_room(self, m_module: Submodule) -> None:
        """Windows below degree + 2 are rejected."""
        with pytest.raises(WindowTooSmall):
            degree_check(br_table([m_module, m_module], (3, 3)))

    @pytest.mark.slow
    def test_degree_check_on_direct_sum_pair(
        self, mm_module: Submodule, m_module: Submodule
    ) -> None:
        """(m + m, m) has total degree 3 on a 0..5 window."""
        check = degree_check(br_table([mm_module, m_module], (5, 5)))
        assert check.degree == 3
        assert check.holds


class TestMuTable:
    """Tests for minimal generator counts of graded products."""

    def test_powers_of_maximal_ideal(self, m_module: Submodule) -> None:
        """mu(m^n) = n + 1, a degree-one sequence."""
        result = mu_table([m_module], 3)
        assert result.values == (1, 2, 3, 4)
        assert result.fitted_degree == 1

    def test_matches_min_generators(self, mm_module: Submodule) -> None:
        """Each entry is mu of the graded product."""
        result = mu_table([mm_module], 2)
        assert result.values[2] == min_generators(sym_power(mm_module, 2))
        assert result.values[2] == 9
