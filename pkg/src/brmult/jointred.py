"""Joint reductions: random candidates, equational and determinantal criteria,
joint reduction numbers."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from typing import Any

import numpy as np

from brmult.config import DEFAULT_BOUNDS, Bounds
from brmult.errors import (
    CertificateStatus,
    Indeterminate,
    NotFiniteColength,
    NotFound,
    PreconditionError,
)
from brmult.exactla import DenseMatrix, Field, independent_subset
from brmult.koszul import Endo
from brmult.localring.ideal import (
    MIdeal,
    compress,
    ideal_product,
    ideal_sum,
    mprimary_exponent,
)
from brmult.localring.jets import Column
from brmult.localring.poly import PolyRing
from brmult.submod import (
    Submodule,
    colength,
    fitting_ideal,
    inclusion_deficit,
    residuals_modulo_mm,
)
from brmult.symprod import graded_product, layered_product

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JointReduction:
    """Candidate (B_1, ..., B_q) with B_k = M_k * A_k.

    ``columns[k]`` keeps all r_k columns of B_k, zero columns included, so the
    matrices of the associated endomorphisms stay square.
    """

    ring: PolyRing
    columns: tuple[tuple[Column, ...], ...]
    coefficients: tuple[DenseMatrix, ...] = ()
    seed: int | None = None

    @classmethod
    def from_coefficients(
        cls,
        modules: Sequence[Submodule],
        coefficients: Sequence[DenseMatrix],
        seed: int | None = None,
    ) -> JointReduction:
        if len(modules) != len(coefficients):
            raise PreconditionError("one coefficient matrix per module is required")
        ring = modules[0].ring
        columns = []
        for module, a in zip(modules, coefficients):
            if a.rows != module.ngens or a.cols != module.ambient_rank:
                raise PreconditionError(
                    f"coefficient matrix must be {module.ngens} x {module.ambient_rank}"
                )
            entries = a.tolist()
            b_k = []
            for j in range(a.cols):
                column = []
                for i in range(module.ambient_rank):
                    terms = [module.gens[g][i].scale(entries[g][j]) for g in range(a.rows)]
                    column.append(sum(terms, ring.zero))
                b_k.append(tuple(column))
            columns.append(tuple(b_k))
        return cls(ring, tuple(columns), tuple(coefficients), seed)

    @property
    def q(self) -> int:
        return len(self.columns)

    def reduction(self, k: int) -> Submodule:
        """B_k as a submodule of F_k."""
        rank = len(self.columns[k])
        return Submodule(self.ring, rank, self.columns[k])

    def endos(self) -> tuple[Endo, ...]:
        return tuple(Endo.from_columns(self.ring, cols) for cols in self.columns)

    def restrict(self, indices: Sequence[int]) -> JointReduction:
        return JointReduction(
            self.ring,
            tuple(self.columns[i] for i in indices),
            tuple(self.coefficients[i] for i in indices) if self.coefficients else (),
            self.seed,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "B": [[[str(p) for p in col] for col in cols] for cols in self.columns],
            "A": [a.tolist() for a in self.coefficients],
        }


def random_candidate(
    modules: Sequence[Submodule], seed: int, field: Field | None = None
) -> JointReduction:
    """Draw every A_k entry from the field with a generator seeded by ``seed``."""
    if not modules:
        raise PreconditionError("at least one module is required")
    field = field or modules[0].ring.field
    rng = np.random.default_rng(seed)
    coefficients = []
    for module in modules:
        rows = [
            [field.random(rng) for _ in range(module.ambient_rank)] for _ in range(module.ngens)
        ]
        coefficients.append(DenseMatrix.from_rows(field, rows, module.ambient_rank))
    return JointReduction.from_coefficients(modules, coefficients, seed)


@dataclass(frozen=True)
class EquationCheck:
    """Outcome of the joint reduction equation at one n."""

    n: int
    lhs_colength: int
    deficit: int  # dim LHS / (RHS + m^{s+1}F); zero iff the sides agree
    s: int

    @property
    def holds(self) -> bool:
        return self.deficit == 0

    def __bool__(self) -> bool:
        return self.holds


def _check_shapes(modules: Sequence[Submodule], b: JointReduction) -> None:
    if len(modules) != b.q:
        raise PreconditionError(f"{len(modules)} modules against {b.q} reductions")
    for k, module in enumerate(modules):
        if len(b.columns[k]) != module.ambient_rank:
            raise PreconditionError(f"B_{k + 1} must have exactly {module.ambient_rank} columns")


def verify_equational(
    modules: Sequence[Submodule], b: JointReduction, n: int, bounds: Bounds = DEFAULT_BOUNDS
) -> EquationCheck:
    """S_{n+1}(M_1)...S_{n+1}(M_q) = sum_k S_{n+1}(M_1)...B_k S_n(M_k)...S_{n+1}(M_q)."""
    _check_shapes(modules, b)
    pairs = [(m, n + 1) for m in modules]
    lhs = graded_product(pairs, bounds)
    lhs_colength = colength(lhs, bounds.s_max)
    layers = [(k, b.columns[k], m, n) for k, m in enumerate(modules)]
    rhs = layered_product(pairs, layers, bounds)
    s = lhs.exponent_bound
    if s is None:
        raise NotFiniteColength("joint reduction equation, left side", bounds.s_max)
    check = EquationCheck(n, lhs_colength, inclusion_deficit(lhs, rhs, bounds.s_max), s)
    logger.debug("equation at n=%d: deficit %d", n, check.deficit)
    return check


def joint_reduction_number(
    modules: Sequence[Submodule], b: JointReduction, bounds: Bounds = DEFAULT_BOUNDS
) -> int | NotFound:
    """Smallest n <= n_max at which the joint reduction equation holds."""
    for n in range(bounds.n_max + 1):
        if verify_equational(modules, b, n, bounds).holds:
            return n
    return NotFound(bounds.n_max)


@dataclass(frozen=True)
class ReductionCheck:
    """Outcome of an ideal-level reduction sweep."""

    n: int | None
    n_max: int

    @property
    def holds(self) -> bool:
        return self.n is not None

    @property
    def status(self) -> CertificateStatus:
        return CertificateStatus.CERTIFIED if self.holds else CertificateStatus.NOT_FOUND

    def __bool__(self) -> bool:
        return self.holds


def reduction_sweep(
    target: MIdeal, candidate: MIdeal, bounds: Bounds = DEFAULT_BOUNDS
) -> ReductionCheck:
    """Smallest n <= n_max with target^{n+1} = candidate * target^n.

    ``candidate`` must lie inside ``target``; the powers of ``target`` are kept
    small by compressing against their known exponents.
    """
    s = mprimary_exponent(target, bounds.s_max)
    if isinstance(s, Indeterminate):
        raise NotFiniteColength(f"ideal {target}", bounds.s_max)
    ring = target.ring
    power = MIdeal.unit(ring)  # target^n
    for n in range(bounds.n_max + 1):
        nxt = compress(ideal_product(power, target), (n + 1) * s)
        big = Submodule(ring, 1, nxt.columns, (n + 1) * s)
        small = Submodule(ring, 1, ideal_product(candidate, power).columns)
        if inclusion_deficit(big, small, bounds.s_max) == 0:
            return ReductionCheck(n, bounds.n_max)
        power = nxt
    return ReductionCheck(None, bounds.n_max)


def determinantal_ideals(
    modules: Sequence[Submodule], b: JointReduction
) -> tuple[MIdeal, MIdeal]:
    """(I_1...I_q, sum_k det(B_k) prod_{j != k} I_j)."""
    ring = modules[0].ring
    fittings = [fitting_ideal(m) for m in modules]
    dets = [e.det for e in b.endos()]
    target = reduce(ideal_product, fittings, MIdeal.unit(ring))
    candidate = MIdeal.zero(ring)
    for k, det in enumerate(dets):
        others = reduce(
            ideal_product, (fittings[j] for j in range(len(fittings)) if j != k), MIdeal.unit(ring)
        )
        candidate = ideal_sum(candidate, ideal_product(MIdeal(ring, (det,)), others))
    return target, candidate


def verify_determinantal(
    modules: Sequence[Submodule], b: JointReduction, bounds: Bounds = DEFAULT_BOUNDS
) -> ReductionCheck:
    """Is sum_k det(B_k) prod_{j != k} I_j a reduction of I_1...I_q (n <= n_max)?"""
    _check_shapes(modules, b)
    target, candidate = determinantal_ideals(modules, b)
    return reduction_sweep(target, candidate, bounds)


@dataclass(frozen=True)
class FreenessReport:
    """Per-factor freeness and minimal-generator extension flags."""

    det_nonzero: tuple[bool, ...]
    extends_mingen: tuple[bool, ...]

    @property
    def holds(self) -> bool:
        return all(self.det_nonzero) and all(self.extends_mingen)

    def to_dict(self) -> dict[str, Any]:
        return {
            "det_nonzero": list(self.det_nonzero),
            "extends_mingen": list(self.extends_mingen),
            "equal": self.holds,
        }


def freeness_and_minimality_check(
    modules: Sequence[Submodule], b: JointReduction, bounds: Bounds = DEFAULT_BOUNDS
) -> FreenessReport:
    _check_shapes(modules, b)
    d = modules[0].ring.nvars
    if len(modules) != d:
        raise PreconditionError(f"exactly d = {d} modules are required")
    for k, module in enumerate(modules):
        if fitting_ideal(module).is_unit_ideal():
            raise PreconditionError(f"M_{k + 1} is not a proper submodule")
    det_nonzero = tuple(bool(e.det) for e in b.endos())
    extends = []
    for k, module in enumerate(modules):
        residuals = residuals_modulo_mm(module, b.columns[k], bounds.s_max)
        independent = independent_subset(module.ring.field, residuals)
        extends.append(len(independent) == module.ambient_rank)
    return FreenessReport(det_nonzero, tuple(extends))


@dataclass
class ExperimentRecord:
    """One draw of the top-level joint reduction experiment."""

    seed: int
    top_level: int | NotFound
    pairs: dict[tuple[int, int], int | NotFound] = field(default_factory=dict)

    @property
    def top_level_zero(self) -> bool:
        return self.top_level == 0

    @property
    def all_pairs_reduce(self) -> bool:
        return all(isinstance(v, int) for v in self.pairs.values())

    def to_dict(self) -> dict[str, Any]:
        def show(v: int | NotFound) -> int | str:
            return v if isinstance(v, int) else str(v)

        return {
            "seed": self.seed,
            "top_level_jrn": show(self.top_level),
            "top_level_zero": self.top_level_zero,
            "all_pairs_reduce": self.all_pairs_reduce,
            "pairs": {f"{i + 1},{j + 1}": show(v) for (i, j), v in sorted(self.pairs.items())},
        }


def jrn_experiment(
    modules: Sequence[Submodule], seeds: Sequence[int], bounds: Bounds = DEFAULT_BOUNDS
) -> list[ExperimentRecord]:
    """For q > 2: record joint reduction numbers of the whole tuple and of every pair.

    Nothing is asserted; the records show whether a top-level joint reduction
    alone already has joint reduction number zero.
    """
    if len(modules) < 3:
        raise PreconditionError("the experiment needs at least three modules")
    records = []
    for seed in seeds:
        b = random_candidate(modules, seed)
        record = ExperimentRecord(seed, joint_reduction_number(modules, b, bounds))
        for i, j in combinations(range(len(modules)), 2):
            pair = [modules[i], modules[j]]
            record.pairs[(i, j)] = joint_reduction_number(pair, b.restrict((i, j)), bounds)
        logger.info(
            "experiment seed %d: top level %s, zero=%s", seed, record.top_level,
            record.top_level_zero,
        )
        records.append(record)
    return records
