"""Tests for joint reduction candidates and criteria."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brmult.config import Bounds
from brmult.errors import CertificateStatus, NotFound, PreconditionError
from brmult.exactla import DenseMatrix
from brmult.icmod.suites import SuiteSize, degenerate_candidate, random_ic_pair
from brmult.jointred import (
    JointReduction,
    determinantal_ideals,
    freeness_and_minimality_check,
    joint_reduction_number,
    jrn_experiment,
    random_candidate,
    reduction_sweep,
    verify_determinantal,
    verify_equational,
)
from brmult.localring import MIdeal, Poly, PolyRing, ideal_eq
from brmult.submod import Submodule, contains

PLANE = PolyRing(("x", "y"))


class TestCandidates:
    """Tests for random candidates."""

    def test_same_seed_same_candidate(self, m_module: Submodule) -> None:
        """Candidates are reproducible from their seed."""
        a = random_candidate([m_module, m_module], 11)
        b = random_candidate([m_module, m_module], 11)
        c = random_candidate([m_module, m_module], 12)
        assert a.coefficients == b.coefficients
        assert a.columns == b.columns
        assert a.coefficients != c.coefficients

    def test_shapes(self, mm_module: Submodule, m_module: Submodule) -> None:
        """B_k has r_k columns, each inside M_k."""
        b = random_candidate([mm_module, m_module], 3)
        assert b.q == 2
        assert len(b.columns[0]) == 2
        assert len(b.columns[1]) == 1
        assert b.coefficients[0].rows == mm_module.ngens
        assert all(contains(mm_module, column) for column in b.columns[0])
        assert [e.rank for e in b.endos()] == [2, 1]

    def test_coefficient_shape_checked(self, m_module: Submodule) -> None:
        """A_k must be ngens x rank."""
        field = m_module.ring.field
        with pytest.raises(PreconditionError):
            JointReduction.from_coefficients([m_module], [DenseMatrix.identity(field, 3)])
        with pytest.raises(PreconditionError):
            random_candidate([], 0)

    def test_restrict_and_dict(self, m_module: Submodule) -> None:
        """Restriction keeps the chosen factors; the dict carries seed and matrices."""
        b = random_candidate([m_module, m_module, m_module], 5)
        pair = b.restrict((0, 2))
        assert pair.columns == (b.columns[0], b.columns[2])
        payload = b.to_dict()
        assert payload["seed"] == 5
        assert len(payload["B"]) == 3
        assert len(payload["A"][0]) == m_module.ngens


class TestEquational:
    """Tests for the joint reduction equation."""

    def test_generic_pair_of_maximal_ideals(self, m_module: Submodule) -> None:
        """(a, b) generic linear forms give m^2 = a m + b m at n = 0."""
        b = random_candidate([m_module, m_module], 0)
        check = verify_equational([m_module, m_module], b, 0)
        assert check.holds
        assert check.lhs_colength == 3
        assert joint_reduction_number([m_module, m_module], b) == 0

    def test_degenerate_candidate_fails(
        self, m_module: Submodule, small_bounds: Bounds
    ) -> None:
        """A zero column never reduces."""
        b = degenerate_candidate([m_module, m_module], np.random.default_rng(1))
        assert b.endos()[0].det.is_zero()
        check = verify_equational([m_module, m_module], b, 1, small_bounds)
        assert not check.holds
        assert check.deficit > 0
        assert joint_reduction_number([m_module, m_module], b, small_bounds) == NotFound(2)

    def test_shape_mismatch(self, m_module: Submodule, mm_module: Submodule) -> None:
        """Candidates must match the modules."""
        b = random_candidate([m_module, m_module], 0)
        with pytest.raises(PreconditionError):
            verify_equational([mm_module, m_module], b, 0)
        with pytest.raises(PreconditionError):
            verify_equational([m_module], b, 0)

    def test_direct_sum_and_ideal(self, mm_module: Submodule, m_module: Submodule) -> None:
        """A generic candidate for (m + m, m) is a joint reduction."""
        b = random_candidate([mm_module, m_module], 2)
        number = joint_reduction_number([mm_module, m_module], b)
        assert number == 0

    @settings(max_examples=5)
    @given(st.integers(0, 10**6), st.booleans())
    def test_equation_persists_once_it_holds(self, seed: int, degenerate: bool) -> None:
        """Holding at n implies holding at n + 1."""
        rng = np.random.default_rng(seed)
        modules = [spec.realize(PLANE) for spec in random_ic_pair(rng, SuiteSize(max_order=2))]
        if degenerate:
            b = degenerate_candidate(modules, rng)
        else:
            b = random_candidate(modules, seed)
        holds = [verify_equational(modules, b, n).holds for n in range(3)]
        assert all(later for earlier, later in zip(holds, holds[1:]) if earlier)

    def test_generic_candidates_reduce(self, m_module: Submodule, small_bounds: Bounds) -> None:
        """Every seeded candidate for (m, m) is a joint reduction."""
        modules = [m_module, m_module]
        numbers = [
            joint_reduction_number(modules, random_candidate(modules, seed), small_bounds)
            for seed in range(20)
        ]
        assert not any(isinstance(n, NotFound) for n in numbers)

    @pytest.mark.slow
    def test_generic_success_rate(self, mm_module: Submodule, m_module: Submodule) -> None:
        """At least 99 of 100 seeded candidates for (m + m, m) reduce."""
        modules = [mm_module, m_module]
        numbers = [
            joint_reduction_number(modules, random_candidate(modules, seed)) for seed in range(100)
        ]
        successes = sum(not isinstance(n, NotFound) for n in numbers)
        assert successes >= 99


class TestDeterminantal:
    """Tests for the determinantal criterion."""

    def test_ideals(self, m_module: Submodule, ring: PolyRing) -> None:
        """The target is I1 I2 and the candidate sum det(B_k) I_j."""
        b = random_candidate([m_module, m_module], 4)
        target, candidate = determinantal_ideals([m_module, m_module], b)
        assert ideal_eq(target, MIdeal.maximal_power(ring, 2))
        assert ideal_eq(candidate, target)

    def test_generic_candidate_reduces(self, m_module: Submodule) -> None:
        """A generic candidate passes at n = 0."""
        b = random_candidate([m_module, m_module], 4)
        check = verify_determinantal([m_module, m_module], b)
        assert check.holds
        assert check.n == 0
        assert check.status is CertificateStatus.CERTIFIED

    def test_degenerate_candidate_fails(
        self, m_module: Submodule, small_bounds: Bounds
    ) -> None:
        """det(B_1) = 0 leaves only det(B_2) I_1, which is not a reduction."""
        b = degenerate_candidate([m_module, m_module], np.random.default_rng(1))
        check = verify_determinantal([m_module, m_module], b, small_bounds)
        assert not check.holds
        assert check.status is CertificateStatus.NOT_FOUND

    def test_reduction_sweep(self, ring: PolyRing, xy: tuple[Poly, Poly]) -> None:
        """(x^2, y^2) reduces m^2 with reduction number 1."""
        x, y = xy
        target = MIdeal.maximal_power(ring, 2)
        assert reduction_sweep(target, MIdeal(ring, (x**2, y**2))).n == 1
        assert reduction_sweep(target, target).n == 0
        assert not reduction_sweep(target, MIdeal(ring, (x**2,)), Bounds(n_max=2))


class TestFreeness:
    """Tests for the freeness and minimal-generator extension check."""

    def test_generic_candidate(self, m_module: Submodule, mm_module: Submodule) -> None:
        """Generic B_k are free and extend to minimal generators."""
        b = random_candidate([mm_module, m_module], 9)
        report = freeness_and_minimality_check([mm_module, m_module], b)
        assert report.det_nonzero == (True, True)
        assert report.extends_mingen == (True, True)
        assert report.to_dict()["equal"]

    def test_degenerate_candidate(self, m_module: Submodule) -> None:
        """A zero column is neither free nor minimal."""
        b = degenerate_candidate([m_module, m_module], np.random.default_rng(3))
        report = freeness_and_minimality_check([m_module, m_module], b)
        assert report.det_nonzero[0] is False
        assert not report.holds

    def test_needs_proper_modules(self, ring: PolyRing, m_module: Submodule) -> None:
        """Free modules are rejected."""
        free = Submodule.free(ring, 1)
        b = random_candidate([free, m_module], 0)
        with pytest.raises(PreconditionError):
            freeness_and_minimality_check([free, m_module], b)


class TestExperiment:
    """Tests for the joint reduction number experiment on three modules."""

    def test_needs_three_modules(self, m_module: Submodule) -> None:
        """Pairs are rejected."""
        with pytest.raises(PreconditionError):
            jrn_experiment([m_module, m_module], [0])

    def test_records(self, m_module: Submodule) -> None:
        """Each seed records the top level and all three pairs."""
        records = jrn_experiment([m_module, m_module, m_module], [0, 1], Bounds(n_max=2))
        assert [r.seed for r in records] == [0, 1]
        for record in records:
            assert set(record.pairs) == {(0, 1), (0, 2), (1, 2)}
            assert record.all_pairs_reduce
            payload = record.to_dict()
            assert set(payload["pairs"]) == {"1,2", "1,3", "2,3"}
            assert payload["top_level_zero"] is (record.top_level == 0)
            assert payload["all_pairs_reduce"] is True
