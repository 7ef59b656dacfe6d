"""Verifiers for the two-dimensional identities on integrally closed modules."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from math import comb, prod
from typing import Any

import numpy as np

from brmult.certificates import CertificateLog
from brmult.config import DEFAULT_BOUNDS, Bounds
from brmult.errors import (
    CandidateNotJointReduction,
    CertificateStatus,
    Indeterminate,
    NotFiniteColength,
    NotFound,
    NotLocal,
    PreconditionError,
)
from brmult.jointred import JointReduction, joint_reduction_number, random_candidate
from brmult.koszul import h0_length
from brmult.localring.ideal import (
    MIdeal,
    ideal_colength,
    ideal_eq,
    ideal_power,
    ideal_product,
    ideal_sum,
    mprimary_exponent,
)
from brmult.localring.poly import Poly
from brmult.reports import TheoremReport
from brmult.submod import (
    Submodule,
    colength,
    exponent_source,
    fitting_ideal,
    module_exponent,
)
from brmult.symprod import (
    br_multiplicity,
    br_table,
    graded_product,
    layered_product,
    mixed_br_stabilized,
)

logger = logging.getLogger(__name__)

CANDIDATE_STRIDE = 104729


def _require_plane(*modules: Submodule) -> None:
    for m in modules:
        if m.ring.nvars != 2:
            raise PreconditionError("these identities are checked over k[x, y]")


def _record(log: CertificateLog, name: str, module: Submodule, s_max: int) -> None:
    s = module_exponent(module, s_max)
    log.record_exponent(name, None if isinstance(s, Indeterminate) else s, exponent_source(module))


def random_element(ideal: MIdeal, rng: np.random.Generator) -> Poly:
    """A random field combination of the generators."""
    field = ideal.ring.field
    return sum((g.scale(field.random(rng)) for g in ideal.gens), ideal.ring.zero)


@dataclass(frozen=True)
class MixedMultReport:
    """e(I|J) by the difference route and by random joint reductions."""

    route_a: int
    route_b: int | None
    stabilized: bool
    window: tuple[int, ...]
    trials: int
    successes: int

    @property
    def value(self) -> int:
        return self.route_b if self.route_b is not None else self.route_a

    @property
    def equal(self) -> bool:
        return self.route_b is not None and self.route_a == self.route_b

    def to_dict(self) -> dict[str, Any]:
        return {
            "route_a": self.route_a,
            "route_b": self.route_b,
            "equal": self.equal,
            "certificates": {
                "stabilization": {"value": self.stabilized, "window": list(self.window)},
                "trials": {"value": self.successes, "of": self.trials},
            },
        }


def generic_mixed_multiplicity(
    a: MIdeal, b: MIdeal, trials: int, seed: int, s_max: int = DEFAULT_BOUNDS.s_max
) -> tuple[int | None, int]:
    """min over seeded draws of lambda(R/(f, g)) with f in a and g in b; (value, successes)."""
    rng = np.random.default_rng(seed)
    best: int | None = None
    successes = 0
    for _ in range(trials):
        pair = MIdeal(a.ring, (random_element(a, rng), random_element(b, rng)))
        if isinstance(mprimary_exponent(pair, s_max), Indeterminate):
            continue
        successes += 1
        value = ideal_colength(pair, s_max)
        best = value if best is None else min(best, value)
    return best, successes


def mixed_mult_ideals(
    a: MIdeal,
    b: MIdeal,
    window: Sequence[int] | None = None,
    trials: int = DEFAULT_BOUNDS.trials,
    seed: int = 0,
    bounds: Bounds = DEFAULT_BOUNDS,
) -> MixedMultReport:
    """e(I|J) by D_1 D_2 of lambda(R/I^m J^n) and by lambda(R/(a, b)) for random a, b."""
    if a.ring.nvars != 2:
        raise PreconditionError("mixed multiplicities of two ideals need d = 2")
    modules = [Submodule.from_ideal(a), Submodule.from_ideal(b)]
    route_a = mixed_br_stabilized(modules, window, bounds)
    route_b, successes = generic_mixed_multiplicity(a, b, trials, seed, bounds.s_max)
    return MixedMultReport(
        route_a.value, route_b, route_a.stabilized, route_a.window, trials, successes
    )


def confirmed_joint_reduction(
    modules: Sequence[Submodule],
    seed: int,
    bounds: Bounds = DEFAULT_BOUNDS,
    attempts: int = 1,
    log: CertificateLog | None = None,
) -> tuple[JointReduction, int]:
    """First seeded candidate that passes the equational sweep, with its number.

    Attempt k draws from seed + k * CANDIDATE_STRIDE. Raises
    CandidateNotJointReduction when every attempt sweeps to n_max without success.
    """
    for attempt in range(attempts):
        b = random_candidate(modules, seed + CANDIDATE_STRIDE * attempt)
        number = joint_reduction_number(modules, b, bounds)
        if not isinstance(number, NotFound):
            if log is not None:
                log.record_sweep("joint reduction number", number, bounds.n_max)
            return b, number
        logger.info("candidate seed %d is not a joint reduction", b.seed)
    if log is not None:
        log.record_sweep("joint reduction number", None, bounds.n_max)
    raise CandidateNotJointReduction(seed, bounds.n_max)


def verify_jrn0(
    m1: Submodule,
    m2: Submodule,
    seed: int,
    bounds: Bounds = DEFAULT_BOUNDS,
    instance: str = "",
    attempts: int = 1,
) -> TheoremReport:
    """A random joint reduction of an integrally closed pair has number 0: M1M2 = B1M2 + M1B2.

    Up to ``attempts`` candidates are drawn; the accepted one's seed is in
    ``details["candidate_seed"]``.
    """
    _require_plane(m1, m2)
    log = CertificateLog()
    b, number = confirmed_joint_reduction([m1, m2], seed, bounds, attempts, log)
    _record(log, "M1M2", graded_product([(m1, 1), (m2, 1)], bounds), bounds.s_max)
    report = TheoremReport("jrn0", number, 0, instance, seed, certificates=log)
    report.details["B"] = b.to_dict()["B"]
    report.details["candidate_seed"] = b.seed
    return report


def _fittings(modules: Sequence[Submodule]) -> list[MIdeal]:
    return [fitting_ideal(m) for m in modules]


def _pair_multiplicities(
    fittings: Sequence[MIdeal], seed: int, bounds: Bounds, log: CertificateLog
) -> dict[tuple[int, int], int]:
    out: dict[tuple[int, int], int] = {}
    for i in range(len(fittings)):
        for j in range(i + 1, len(fittings)):
            value, successes = generic_mixed_multiplicity(
                fittings[i], fittings[j], bounds.trials, seed + 7919 * (i + 1) + j, bounds.s_max
            )
            log.record_trials(f"e(I{i + 1}|I{j + 1})", bounds.trials, successes)
            if value is None:
                raise PreconditionError(f"no m-primary draw for e(I{i + 1}|I{j + 1})")
            out[(i, j)] = value
    return out


def verify_prodlength(
    modules: Sequence[Submodule], seed: int = 0, bounds: Bounds = DEFAULT_BOUNDS,
    instance: str = "",
) -> TheoremReport:
    """lambda(F_1...F_q / M_1...M_q) = sum s_i lambda(F_i/M_i) + sum t_ij e(I_i|I_j)."""
    if len(modules) < 2:
        raise PreconditionError("at least two modules are required")
    _require_plane(*modules)
    log = CertificateLog()
    ranks = [m.ambient_rank for m in modules]
    product_module = graded_product([(m, 1) for m in modules], bounds)
    _record(log, "M1...Mq", product_module, bounds.s_max)
    lhs = colength(product_module, bounds.s_max)
    lengths = [colength(m, bounds.s_max) for m in modules]
    mixed = _pair_multiplicities(_fittings(modules), seed, bounds, log)
    q = len(modules)
    rhs = sum(prod(ranks[k] for k in range(q) if k != i) * lengths[i] for i in range(q))
    rhs += sum(
        prod(ranks[k] for k in range(q) if k not in (i, j)) * e for (i, j), e in mixed.items()
    )
    report = TheoremReport("prodlength", lhs, rhs, instance, seed, certificates=log)
    report.details["lengths"] = lengths
    report.details["mixed"] = {f"{i + 1},{j + 1}": e for (i, j), e in mixed.items()}
    return report


def local_order(module: Submodule, bounds: Bounds = DEFAULT_BOUNDS) -> int:
    """n with I(M) = m^n; raises NotLocal otherwise."""
    ideal = fitting_ideal(module)
    order = ideal.ord
    if not isinstance(order, int):
        raise NotLocal("the Fitting ideal is zero")
    power = MIdeal.maximal_power(module.ring, order)
    if not ideal_eq(ideal, power, bounds.s_max):
        raise NotLocal(f"I(M) = {ideal} is not m^{order}")
    return order


def verify_local_identity(
    m1: Submodule, m2: Submodule, bounds: Bounds = DEFAULT_BOUNDS, instance: str = ""
) -> TheoremReport:
    """lambda(F1F2/M1M2) = r2 lambda(F1/M1) + r1 lambda(F2/M2) + n1 n2 for local modules."""
    _require_plane(m1, m2)
    n1, n2 = local_order(m1, bounds), local_order(m2, bounds)
    log = CertificateLog()
    product_module = graded_product([(m1, 1), (m2, 1)], bounds)
    _record(log, "M1M2", product_module, bounds.s_max)
    lhs = colength(product_module, bounds.s_max)
    r1, r2 = m1.ambient_rank, m2.ambient_rank
    rhs = r2 * colength(m1, bounds.s_max) + r1 * colength(m2, bounds.s_max) + n1 * n2
    report = TheoremReport("local-identity", lhs, rhs, instance, certificates=log)
    report.details["orders"] = [n1, n2]
    return report


def verify_step1(
    m1: Submodule,
    m2: Submodule,
    b: JointReduction,
    bounds: Bounds = DEFAULT_BOUNDS,
    instance: str = "",
) -> TheoremReport:
    """r1 lambda(F2/M2) + r2 lambda(F1/M1) = lambda((B1F2 + F1B2)/(B1M2 + M1B2))."""
    _require_plane(m1, m2)
    log = CertificateLog()
    number = joint_reduction_number([m1, m2], b, bounds)
    log.record_sweep("joint reduction number", None if isinstance(number, NotFound) else number,
                     bounds.n_max)
    if isinstance(number, NotFound):
        raise CandidateNotJointReduction(b.seed if b.seed is not None else -1, bounds.n_max)
    r1, r2 = m1.ambient_rank, m2.ambient_rank
    lhs = r1 * colength(m2, bounds.s_max) + r2 * colength(m1, bounds.s_max)
    pairs = [(m1, 1), (m2, 1)]
    inner = layered_product(
        pairs, [(0, b.columns[0], m1, 0), (1, b.columns[1], m2, 0)], bounds
    )
    _record(log, "B1M2+M1B2", inner, bounds.s_max)
    rhs = colength(inner, bounds.s_max) - h0_length(b.endos(), bounds)
    return TheoremReport("step1", lhs, rhs, instance, b.seed, certificates=log)


def closed_form(
    n: Sequence[int],
    ranks: Sequence[int],
    br: Sequence[int],
    lengths: Sequence[int],
    mixed: dict[tuple[int, int], int],
) -> int:
    """The explicit joint Buchsbaum-Rim function of integrally closed modules in d = 2."""
    q = len(ranks)

    def free_rank(k: int) -> int:
        return comb(n[k] + ranks[k] - 1, ranks[k] - 1)

    def upper(k: int) -> int:
        return comb(n[k] + ranks[k] - 1, ranks[k])

    total = 0
    for i in range(q):
        s_i = prod(free_rank(k) for k in range(q) if k != i)
        r = ranks[i]
        total += s_i * (
            br[i] * comb(n[i] + r, r + 1) - (br[i] - lengths[i]) * comb(n[i] + r - 1, r)
        )
    for (i, j), e in mixed.items():
        v_ij = upper(i) * upper(j) * prod(free_rank(k) for k in range(q) if k not in (i, j))
        total += v_ij * e
    return total


def verify_brpolya(
    modules: Sequence[Submodule],
    window: Sequence[int] | None = None,
    seed: int = 0,
    bounds: Bounds = DEFAULT_BOUNDS,
    instance: str = "",
) -> TheoremReport:
    """Closed-form joint Buchsbaum-Rim function against computed values on the window."""
    _require_plane(*modules)
    window = tuple(window) if window is not None else (3,) * len(modules)
    log = CertificateLog()
    ranks = [m.ambient_rank for m in modules]
    lengths = [colength(m, bounds.s_max) for m in modules]
    br = []
    for k, module in enumerate(modules):
        single = br_multiplicity(module, bounds=bounds)
        log.record_stabilization(f"br(M{k + 1})", single.stabilized, single.window)
        br.append(single.value)
    mixed = _pair_multiplicities(_fittings(modules), seed, bounds, log)
    table = br_table(modules, window, bounds)
    deviations = {
        n: abs(value - closed_form(n, ranks, br, lengths, mixed)) for n, value in table.points()
    }
    worst = max(deviations.values())
    status = CertificateStatus.CERTIFIED if log.all_stabilized else CertificateStatus.UNSTABILIZED
    report = TheoremReport("brpolya", worst, 0, instance, seed, status, log)
    report.details["br"] = br
    report.details["points"] = len(deviations)
    return report


def minors_multiplicativity_check(
    m1: Submodule, m2: Submodule, bounds: Bounds = DEFAULT_BOUNDS, instance: str = ""
) -> TheoremReport:
    """I(M1M2) = I(M1)^{r2} I(M2)^{r1}, certified by mutual containment.

    lhs and rhs are the colengths of the two ideals; the verdict also needs the
    containments both ways.
    """
    _require_plane(m1, m2)
    i1, i2 = fitting_ideal(m1), fitting_ideal(m2)
    expected = ideal_product(ideal_power(i1, m2.ambient_rank), ideal_power(i2, m1.ambient_rank))
    actual = fitting_ideal(graded_product([(m1, 1), (m2, 1)], bounds))
    return ideal_identity_report("minors", actual, expected, bounds, instance)


def ideal_identity_report(
    theorem: str, actual: MIdeal, expected: MIdeal, bounds: Bounds = DEFAULT_BOUNDS,
    instance: str = "",
) -> TheoremReport:
    """Colengths as the two sides; equal only when the ideals contain each other."""
    lhs, rhs = ideal_colength(actual, bounds.s_max), ideal_colength(expected, bounds.s_max)
    report = TheoremReport(theorem, lhs, rhs, instance)
    report.checks["ideals equal"] = ideal_eq(actual, expected, bounds.s_max)
    return report


def verify_ideal_case(
    a: MIdeal, b: MIdeal, seed: int = 0, bounds: Bounds = DEFAULT_BOUNDS, instance: str = ""
) -> tuple[TheoremReport, TheoremReport]:
    """The rank-one identities for integrally closed I, J and a generic f in I, g in J.

    Returns the product report lambda(R/IJ) = lambda(R/I) + lambda(R/J) + e(I|J) and
    the joint report lambda(R/(fJ + gI)) = lambda(R/(f, g)) + lambda(R/I) + lambda(R/J).
    """
    if a.ring.nvars != 2:
        raise PreconditionError("these identities are checked over k[x, y]")
    rng = np.random.default_rng(seed)
    f, g = random_element(a, rng), random_element(b, rng)
    pair = MIdeal(a.ring, (f, g))
    s = mprimary_exponent(pair, bounds.s_max)
    if isinstance(s, Indeterminate):
        raise NotFiniteColength("(f, g)", bounds.s_max)
    log = CertificateLog()
    log.record_exponent("(f,g)", s)
    e = ideal_colength(pair, bounds.s_max)
    la, lb = ideal_colength(a, bounds.s_max), ideal_colength(b, bounds.s_max)
    product_side = ideal_colength(ideal_product(a, b), bounds.s_max)
    joint_side = ideal_colength(
        ideal_sum(ideal_product(MIdeal(a.ring, (f,)), b), ideal_product(MIdeal(a.ring, (g,)), a)),
        bounds.s_max,
    )
    details = {"lengths": [la, lb], "e": e}
    product_report = TheoremReport(
        "ideal-product", product_side, la + lb + e, instance, seed, certificates=log,
        details=dict(details),
    )
    joint_report = TheoremReport(
        "ideal-joint", joint_side, e + la + lb, instance, seed, certificates=log,
        details=dict(details),
    )
    return product_report, joint_report
