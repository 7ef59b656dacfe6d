"""Seeded instance generators and suite runners.

Every suite instance is a pure function of (seed, bounds, size); runners hand
out consecutive seeds and return reports in seed order.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from brmult.config import DEFAULT_BOUNDS, Bounds
from brmult.errors import CertificateStatus, GeneratorExhausted, Indeterminate, NotFound
from brmult.exactla import DenseMatrix
from brmult.icmod.closure import FREE, ICModuleSpec, Summand, closure_exponents
from brmult.icmod.verify import (
    confirmed_joint_reduction,
    minors_multiplicativity_check,
    mixed_mult_ideals,
    verify_brpolya,
    verify_ideal_case,
    verify_jrn0,
    verify_local_identity,
    verify_prodlength,
    verify_step1,
)
from brmult.jointred import (
    JointReduction,
    joint_reduction_number,
    random_candidate,
    verify_determinantal,
)
from brmult.koszul import Endo, determinant_ideal, h0_length, verify_comparison
from brmult.localring.ideal import mprimary_exponent
from brmult.localring.poly import Poly, PolyRing, monomials_up_to
from brmult.reports import TheoremReport
from brmult.submod import Submodule
from brmult.symprod import mixed_br_stabilized

logger = logging.getLogger(__name__)

ENDO_ATTEMPTS = 50
CANDIDATE_ATTEMPTS = 3

BRPOLYA_PAIRS: tuple[tuple[ICModuleSpec, ICModuleSpec], ...] = (
    (ICModuleSpec.maximal_powers(1), ICModuleSpec.maximal_powers(1)),
    (ICModuleSpec.maximal_powers(1, 1), ICModuleSpec.maximal_powers(1)),
    (ICModuleSpec.maximal_powers(1, 2), ICModuleSpec.maximal_powers(1)),
    (ICModuleSpec.maximal_powers(1, 1), ICModuleSpec.maximal_powers(1, 1)),
)


@dataclass(frozen=True)
class SuiteSize:
    """Limits on generated instances."""

    max_rank: int = 2
    max_order: int = 3
    endo_rank: int = 3
    endo_degree: int = 2


DEFAULT_SIZE = SuiteSize()

# Suites that draw beyond the default limits.
SUITE_SIZES: dict[str, SuiteSize] = {"jrn0": SuiteSize(max_rank=3)}


def suite_size(name: str, max_rank: int | None = None, max_order: int | None = None) -> SuiteSize:
    """The suite's default limits with any given overrides applied."""
    size = SUITE_SIZES.get(name, DEFAULT_SIZE)
    if max_rank is not None:
        size = replace(size, max_rank=max_rank)
    if max_order is not None:
        size = replace(size, max_order=max_order)
    return size


def plane() -> PolyRing:
    return PolyRing(("x", "y"))


def random_complete_ideal(rng: np.random.Generator, max_order: int = 3) -> Summand:
    """A complete m-primary monomial ideal of k[x, y] with order <= max_order."""
    a = int(rng.integers(1, max_order + 1))
    b = int(rng.integers(1, max_order + 3))
    if rng.random() < 0.5:
        a, b = b, a
    points = [(a, 0), (0, b)]
    for _ in range(int(rng.integers(0, 3))):
        point = (int(rng.integers(0, a + 1)), int(rng.integers(0, b + 1)))
        if any(point):
            points.append(point)
    return Summand(tuple(closure_exponents(points)))


def random_ic_spec(
    rng: np.random.Generator, max_rank: int = 2, max_order: int = 3, proper: bool = True
) -> ICModuleSpec:
    """A direct sum of free summands and complete ideals with total order <= max_order."""
    rank = int(rng.integers(1, max_rank + 1))
    summands: list[Summand] = []
    budget = max_order
    for i in range(rank):
        must_be_proper = proper and i == rank - 1 and all(s.is_free for s in summands)
        if budget > 0 and (must_be_proper or rng.random() < 0.7):
            summand = random_complete_ideal(rng, budget)
            summands.append(summand)
            budget -= summand.order
        else:
            summands.append(FREE)
    if proper and all(s.is_free for s in summands):
        summands[-1] = Summand(((1, 0), (0, 1)))
    return ICModuleSpec(tuple(summands))


def random_ic_pair(
    rng: np.random.Generator, size: SuiteSize = DEFAULT_SIZE
) -> tuple[ICModuleSpec, ICModuleSpec]:
    return (
        random_ic_spec(rng, size.max_rank, size.max_order),
        random_ic_spec(rng, size.max_rank, size.max_order),
    )


def random_poly(ring: PolyRing, rng: np.random.Generator, degree: int, density: float) -> Poly:
    """Random combination of monomials of degree 1..degree."""
    terms: dict[tuple[int, ...], int] = {}
    for mono in monomials_up_to(ring.nvars, degree):
        if sum(mono) and rng.random() < density:
            terms[mono] = ring.field.random(rng)
    return sum((ring.monomial(m, c) for m, c in terms.items()), ring.zero)


def random_endo(ring: PolyRing, rng: np.random.Generator, rank: int, degree: int) -> Endo:
    """Entries in m of degree <= degree; the diagonal is never zero."""
    rows = []
    for i in range(rank):
        row = []
        for j in range(rank):
            entry = random_poly(ring, rng, degree, 0.6 if i == j else 0.3)
            while i == j and entry.is_zero():
                entry = random_poly(ring, rng, degree, 0.6)
            row.append(entry)
        rows.append(row)
    return Endo(ring, tuple(tuple(r) for r in rows))


def random_endo_pair(
    ring: PolyRing,
    rng: np.random.Generator,
    size: SuiteSize = DEFAULT_SIZE,
    bounds: Bounds = DEFAULT_BOUNDS,
) -> tuple[Endo, Endo]:
    """Two endomorphisms whose determinants generate an m-primary ideal."""
    for _ in range(ENDO_ATTEMPTS):
        phis = tuple(
            random_endo(
                ring, rng, int(rng.integers(1, size.endo_rank + 1)), size.endo_degree
            )
            for _ in range(ring.nvars)
        )
        if not isinstance(mprimary_exponent(determinant_ideal(phis), bounds.s_max), Indeterminate):
            return phis[0], phis[1]
    raise GeneratorExhausted("endomorphism pair with m-primary determinants", ENDO_ATTEMPTS)


def degenerate_candidate(
    modules: Sequence[Submodule], rng: np.random.Generator
) -> JointReduction:
    """A candidate whose first reduction has a zero column, so det(B_1) = 0."""
    field = modules[0].ring.field
    coefficients = []
    for k, module in enumerate(modules):
        rows = [
            [field.random(rng) for _ in range(module.ambient_rank)] for _ in range(module.ngens)
        ]
        if k == 0:
            rows = [[0, *row[1:]] for row in rows]
        coefficients.append(DenseMatrix.from_rows(field, rows, module.ambient_rank))
    return JointReduction.from_coefficients(modules, coefficients)


def _realized(specs: Sequence[ICModuleSpec], ring: PolyRing) -> list[Submodule]:
    return [spec.realize(ring) for spec in specs]


def _named(*specs: ICModuleSpec) -> str:
    return " | ".join(str(s) for s in specs)


def comparison_instance(seed: int, bounds: Bounds, size: SuiteSize) -> list[TheoremReport]:
    ring = plane()
    rng = np.random.default_rng(seed)
    phis = random_endo_pair(ring, rng, size, bounds)
    result = verify_comparison(phis, bounds)
    report = TheoremReport(
        "comparison", result.h0, result.det_colength, f"{phis[0]} ; {phis[1]}", seed
    )
    report.certificates.record_exponent("determinant ideal", result.s)
    return [report]


def chain_instance(seed: int, bounds: Bounds, size: SuiteSize) -> list[TheoremReport]:
    """mixed br by differences against h0 of a joint reduction and e(I1|I2)."""
    ring = plane()
    rng = np.random.default_rng(seed)
    specs = random_ic_pair(rng, size)
    modules = _realized(specs, ring)
    mixed = mixed_br_stabilized(modules, None, bounds)
    b = _joint_reduction(modules, seed, bounds)
    h0 = h0_length(b.endos(), bounds)
    ideals = mixed_mult_ideals(
        specs[0].fitting(ring), specs[1].fitting(ring), None, bounds.trials, seed, bounds
    )
    stabilized = mixed.stabilized and ideals.stabilized
    status = CertificateStatus.CERTIFIED if stabilized else CertificateStatus.UNSTABILIZED
    report = TheoremReport("chain", mixed.value, h0, _named(*specs), seed, status)
    report.certificates.record_stabilization("mixed br", mixed.stabilized, mixed.window)
    report.certificates.record_stabilization("e(I1|I2)", ideals.stabilized, ideals.window)
    report.certificates.record_trials("e(I1|I2)", ideals.trials, ideals.successes)
    report.details["e"] = ideals.to_dict()
    report.checks["e = h0"] = ideals.value == h0
    # route A is only a certified value once its window settles
    if ideals.stabilized:
        report.checks["e routes agree"] = ideals.equal
    return [report]


def _joint_reduction(modules: Sequence[Submodule], seed: int, bounds: Bounds) -> JointReduction:
    b, _ = confirmed_joint_reduction(modules, seed, bounds, CANDIDATE_ATTEMPTS)
    return b


def jrn0_instance(seed: int, bounds: Bounds, size: SuiteSize) -> list[TheoremReport]:
    ring = plane()
    rng = np.random.default_rng(seed)
    if seed % 5 == 0:
        # ideal pairs: the Rees case r = s = 1
        specs = (random_ic_spec(rng, 1, size.max_order), random_ic_spec(rng, 1, size.max_order))
    else:
        specs = random_ic_pair(rng, size)
    m1, m2 = _realized(specs, ring)
    return [verify_jrn0(m1, m2, seed, bounds, _named(*specs), CANDIDATE_ATTEMPTS)]


def equivalence_instance(seed: int, bounds: Bounds, size: SuiteSize) -> list[TheoremReport]:
    """Equational and determinantal criteria agree, on generic and degenerate candidates."""
    ring = plane()
    rng = np.random.default_rng(seed)
    specs = random_ic_pair(rng, size)
    modules = _realized(specs, ring)
    if seed % 2:
        b = degenerate_candidate(modules, rng)
    else:
        b = random_candidate(modules, seed)
    equational = not isinstance(joint_reduction_number(modules, b, bounds), NotFound)
    determinantal = verify_determinantal(modules, b, bounds).holds
    report = TheoremReport("equivalence", int(equational), int(determinantal), _named(*specs), seed)
    report.details["degenerate"] = bool(seed % 2)
    return [report]


def prodlength_instance(q: int) -> Callable[[int, Bounds, SuiteSize], list[TheoremReport]]:
    def run(seed: int, bounds: Bounds, size: SuiteSize) -> list[TheoremReport]:
        ring = plane()
        rng = np.random.default_rng(seed)
        specs = [random_ic_spec(rng, size.max_rank, size.max_order) for _ in range(q)]
        return [verify_prodlength(_realized(specs, ring), seed, bounds, _named(*specs))]

    return run


def local_instance(seed: int, bounds: Bounds, size: SuiteSize) -> list[TheoremReport]:
    """Sums of maximal ideal powers: I(M) = m^n."""
    ring = plane()
    rng = np.random.default_rng(seed)
    specs = []
    for _ in range(2):
        rank = int(rng.integers(1, size.max_rank + 1))
        powers = [int(rng.integers(0, 3)) for _ in range(rank)]
        if not any(powers):
            powers[-1] = 1
        specs.append(ICModuleSpec.maximal_powers(*powers))
    m1, m2 = _realized(specs, ring)
    return [verify_local_identity(m1, m2, bounds, _named(*specs))]


def step1_instance(seed: int, bounds: Bounds, size: SuiteSize) -> list[TheoremReport]:
    ring = plane()
    rng = np.random.default_rng(seed)
    specs = random_ic_pair(rng, size)
    m1, m2 = _realized(specs, ring)
    b = _joint_reduction([m1, m2], seed, bounds)
    return [verify_step1(m1, m2, b, bounds, _named(*specs))]


def minors_instance(seed: int, bounds: Bounds, size: SuiteSize) -> list[TheoremReport]:
    ring = plane()
    rng = np.random.default_rng(seed)
    specs = random_ic_pair(rng, size)
    m1, m2 = _realized(specs, ring)
    return [minors_multiplicativity_check(m1, m2, bounds, _named(*specs))]


def brpolya_instance(seed: int, bounds: Bounds, size: SuiteSize) -> list[TheoremReport]:
    """The fixed pairs, cycled by seed; the window is 0..3 on both axes."""
    del size
    ring = plane()
    specs = BRPOLYA_PAIRS[seed % len(BRPOLYA_PAIRS)]
    return [verify_brpolya(_realized(specs, ring), (3, 3), seed, bounds, _named(*specs))]


def ideal_case_instance(seed: int, bounds: Bounds, size: SuiteSize) -> list[TheoremReport]:
    ring = plane()
    rng = np.random.default_rng(seed)
    a = random_complete_ideal(rng, size.max_order).ideal(ring)
    b = random_complete_ideal(rng, size.max_order).ideal(ring)
    return list(verify_ideal_case(a, b, seed, bounds, f"{a} | {b}"))


SuiteFn = Callable[[int, Bounds, SuiteSize], list[TheoremReport]]

SUITES: dict[str, SuiteFn] = {
    "comparison": comparison_instance,
    "chain": chain_instance,
    "jrn0": jrn0_instance,
    "equivalence": equivalence_instance,
    "prodlength2": prodlength_instance(2),
    "prodlength3": prodlength_instance(3),
    "local": local_instance,
    "step1": step1_instance,
    "minors": minors_instance,
    "brpolya": brpolya_instance,
    "ideal-case": ideal_case_instance,
}


def _run_one(args: tuple[str, int, Bounds, SuiteSize]) -> list[TheoremReport]:
    name, seed, bounds, size = args
    return SUITES[name](seed, bounds, size)


def run_suite(
    name: str,
    count: int,
    seed: int = 0,
    jobs: int = 1,
    bounds: Bounds = DEFAULT_BOUNDS,
    size: SuiteSize | None = None,
) -> list[TheoremReport]:
    """Run ``count`` instances with seeds seed, seed + 1, ...; reports in seed order.

    ``size`` defaults to the suite's own limits (see ``suite_size``).
    """
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    size = size if size is not None else suite_size(name)
    tasks = [(name, seed + i, bounds, size) for i in range(count)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(_run_one, tasks))
    else:
        batches = []
        for i, task in enumerate(tasks):
            logger.info("suite %s: instance %d/%d (seed %d)", name, i + 1, count, task[1])
            batches.append(_run_one(task))
    return [report for batch in batches for report in batch]
