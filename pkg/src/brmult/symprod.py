"""Symmetric powers, multigraded products and the joint Buchsbaum-Rim function."""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement, product
from math import comb, prod

import numpy as np

from brmult.config import DEFAULT_BOUNDS, Bounds
from brmult.errors import (
    CertificateStatus,
    GeneratorOverflow,
    Indeterminate,
    PreconditionError,
    WindowTooSmall,
)
from brmult.localring.jets import Column
from brmult.localring.poly import Monomial, Poly, PolyRing, monomials_of_degree
from brmult.submod import (
    Submodule,
    colength,
    min_generators,
    minimal_generating_subset,
    module_exponent,
)

logger = logging.getLogger(__name__)

# An element of S_n(F): symmetric-tensor exponent -> coefficient.
Form = dict[Monomial, Poly]

# Sym-power factors with more generators than this are cut to a minimal set
# before multiplying factors together.
MINIMALIZE_ABOVE = 24


@dataclass(frozen=True)
class SymBasis:
    """Basis of S_{n_1}(F_1)...S_{n_q}(F_q), lexicographic and factor-major."""

    ranks: tuple[int, ...]
    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.ranks) != len(self.degrees):
            raise PreconditionError("one degree per factor is required")

    @cached_property
    def elements(self) -> tuple[tuple[Monomial, ...], ...]:
        per_factor = [monomials_of_degree(r, n) for r, n in zip(self.ranks, self.degrees)]
        return tuple(product(*per_factor))

    @cached_property
    def index(self) -> dict[tuple[Monomial, ...], int]:
        return {b: i for i, b in enumerate(self.elements)}

    @property
    def ambient_rank(self) -> int:
        return prod(comb(n + r - 1, r - 1) for r, n in zip(self.ranks, self.degrees))


def linear_form(column: Column) -> Form:
    rank = len(column)
    out: Form = {}
    for i, p in enumerate(column):
        if p:
            e = [0] * rank
            e[i] = 1
            out[tuple(e)] = p
    return out


def multiply_forms(a: Form, b: Form) -> Form:
    out: Form = {}
    for ea, pa in a.items():
        for eb, pb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            term = pa * pb
            out[key] = out[key] + term if key in out else term
    return {k: v for k, v in out.items() if v}


def sym_forms(module: Submodule, n: int) -> list[Form]:
    """All degree-n products of generator columns, one per multiset of generators."""
    ring, r = module.ring, module.ambient_rank
    if n == 0:
        return [{(0,) * r: ring.one}]
    linear = [linear_form(c) for c in module.gens]
    level: dict[tuple[int, ...], Form] = {(j,): linear[j] for j in range(len(linear))}
    for _ in range(n - 1):
        level = {
            combo + (j,): multiply_forms(form, linear[j])
            for combo, form in level.items()
            for j in range(combo[-1], len(linear))
        }
    return [level[c] for c in combinations_with_replacement(range(len(linear)), n)]


def _assemble(
    ring: PolyRing, basis: SymBasis, factors: Sequence[Sequence[Form]]
) -> list[Column]:
    index = basis.index
    columns: list[Column] = []
    for choice in product(*factors):
        partial: dict[tuple[Monomial, ...], Poly] = {(): ring.one}
        for form in choice:
            partial = {
                key + (e,): p * q for key, p in partial.items() for e, q in form.items()
            }
        column = [ring.zero] * basis.ambient_rank
        for key, p in partial.items():
            column[index[key]] = p
        columns.append(tuple(column))
    return columns


def _check_cap(counts: Sequence[int], cap: int) -> None:
    total = prod(counts)
    if total > cap:
        raise GeneratorOverflow(total, cap)


def _exponent_or_none(module: Submodule, s_max: int) -> int | None:
    s = module_exponent(module, s_max)
    return None if isinstance(s, Indeterminate) else s


def _checked_forms(module: Submodule, n: int, bounds: Bounds) -> list[Form]:
    if n < 0:
        raise PreconditionError("symmetric powers need n >= 0")
    _check_cap([comb(module.ngens + n - 1, n)], bounds.generator_cap)
    return sym_forms(module, n)


def _power_from_forms(
    module: Submodule, n: int, forms: list[Form], s: int | None
) -> Submodule:
    basis = SymBasis((module.ambient_rank,), (n,))
    gens = _assemble(module.ring, basis, [forms])
    return Submodule(module.ring, basis.ambient_rank, tuple(gens), None if s is None else n * s)


def sym_power(module: Submodule, n: int, bounds: Bounds = DEFAULT_BOUNDS) -> Submodule:
    """S_n(M) inside S_n(F); products of n generator columns, one per multiset."""
    forms = _checked_forms(module, n, bounds)
    s = _exponent_or_none(module, bounds.s_max) if n else 0
    return _power_from_forms(module, n, forms, s)


def _factor_forms(module: Submodule, n: int, bounds: Bounds) -> tuple[list[Form], int | None]:
    forms = _checked_forms(module, n, bounds)
    s = _exponent_or_none(module, bounds.s_max) if n else 0
    if len(forms) > MINIMALIZE_ABOVE and s is not None:
        power = _power_from_forms(module, n, forms, s)
        keep = minimal_generating_subset(power, bounds.s_max)
        logger.debug("sym power %d: %d generators cut to %d", n, len(forms), len(keep))
        forms = [forms[i] for i in keep]
    return forms, None if s is None else n * s


def graded_product(
    pairs: Sequence[tuple[Submodule, int]], bounds: Bounds = DEFAULT_BOUNDS
) -> Submodule:
    """S_{n_1}(M_1)...S_{n_q}(M_q) inside S_{n_1}(F_1)...S_{n_q}(F_q)."""
    if not pairs:
        raise PreconditionError("a graded product needs at least one factor")
    if len(pairs) == 1:
        return sym_power(pairs[0][0], pairs[0][1], bounds)
    ring = pairs[0][0].ring
    basis = SymBasis(tuple(m.ambient_rank for m, _ in pairs), tuple(n for _, n in pairs))
    factors = []
    bound: int | None = 0
    for module, n in pairs:
        forms, s = _factor_forms(module, n, bounds)
        factors.append(forms)
        bound = None if bound is None or s is None else bound + s
    _check_cap([len(f) for f in factors], bounds.generator_cap)
    gens = _assemble(ring, basis, factors)
    return Submodule(ring, basis.ambient_rank, tuple(gens), bound)


def layered_product(
    pairs: Sequence[tuple[Submodule, int]],
    layers: Sequence[tuple[int, Sequence[Column], Submodule, int]],
    bounds: Bounds = DEFAULT_BOUNDS,
) -> Submodule:
    """Sum over layers of products where factor k is replaced by B_k * S_{n'}(N_k).

    ``pairs`` fixes the ambient (ranks and degrees); each layer is
    (k, columns of B_k, N_k, n') and contributes the products of one column of
    B_k, one generator of S_{n'}(N_k), and one generator of S_{n_j}(M_j) for
    every other factor j.
    """
    ring = pairs[0][0].ring
    basis = SymBasis(tuple(m.ambient_rank for m, _ in pairs), tuple(n for _, n in pairs))
    plain = [_factor_forms(m, n, bounds)[0] for m, n in pairs]
    gens: list[Column] = []
    for k, columns, module, n_inner in layers:
        if n_inner + 1 != pairs[k][1]:
            raise PreconditionError("layer degree must be one less than the ambient degree")
        inner = _factor_forms(module, n_inner, bounds)[0]
        replaced = [
            multiply_forms(linear_form(tuple(c)), form) for c in columns for form in inner
        ]
        factors = [replaced if j == k else plain[j] for j in range(len(pairs))]
        _check_cap([len(gens) + prod(len(f) for f in factors)], bounds.generator_cap)
        gens.extend(_assemble(ring, basis, factors))
    return Submodule(ring, basis.ambient_rank, tuple(gens))


def br_function(
    modules: Sequence[Submodule], n: Sequence[int], bounds: Bounds = DEFAULT_BOUNDS
) -> int:
    """f(n_1..n_q) = lambda(S_{n_1}(F_1)...S_{n_q}(F_q) / S_{n_1}(M_1)...S_{n_q}(M_q))."""
    if len(modules) != len(n):
        raise PreconditionError("one degree per module is required")
    value = colength(graded_product(list(zip(modules, n)), bounds), bounds.s_max)
    logger.debug("f%s = %d", tuple(n), value)
    return value


@dataclass(frozen=True, eq=False)
class BRTable:
    """Values of a q-variate function on a box ``origin .. origin + shape - 1``."""

    d: int
    ranks: tuple[int, ...]
    origin: tuple[int, ...]
    values: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return len(self.ranks)

    @property
    def extents(self) -> tuple[int, ...]:
        return tuple(int(e) for e in self.values.shape)

    @property
    def upper(self) -> tuple[int, ...]:
        return tuple(o + e - 1 for o, e in zip(self.origin, self.extents))

    def __getitem__(self, n: Sequence[int]) -> int:
        local = tuple(k - o for k, o in zip(n, self.origin))
        if any(i < 0 for i in local):
            raise IndexError(f"{tuple(n)} lies below the window")
        return int(self.values[local])

    def points(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """(n, value) in row-major order."""
        for local in np.ndindex(*self.extents):
            yield tuple(o + i for o, i in zip(self.origin, local)), int(self.values[local])

    def corner(self) -> np.ndarray:
        """The last two points along every axis."""
        return self.values[tuple(slice(-2, None) for _ in self.extents)]

    @property
    def stabilized(self) -> bool:
        """True iff the table is constant on its last 2 points per axis."""
        if any(e < 2 for e in self.extents):
            return False
        corner = self.corner()
        return bool(np.all(corner == corner.reshape(-1)[0]))

    def top(self) -> int:
        return int(self.values[(-1,) * self.q])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BRTable):
            return NotImplemented
        return (
            (self.d, self.ranks, self.origin) == (other.d, other.ranks, other.origin)
            and self.values.shape == other.values.shape
            and bool(np.all(self.values == other.values))
        )


def _br_cell(args: tuple[Sequence[Submodule], tuple[int, ...], Bounds]) -> int:
    modules, n, bounds = args
    return br_function(modules, n, bounds)


def br_table(
    modules: Sequence[Submodule],
    window: Sequence[int],
    bounds: Bounds = DEFAULT_BOUNDS,
    jobs: int = 1,
) -> BRTable:
    """Fill f on 0 <= n_k <= window[k]; cells run in ``jobs`` processes when jobs > 1."""
    if len(window) != len(modules):
        raise PreconditionError("one window bound per module is required")
    if any(w < 0 for w in window):
        raise WindowTooSmall("window bounds must be non-negative")
    shape = tuple(w + 1 for w in window)
    cells = list(np.ndindex(*shape))
    tasks = [(list(modules), tuple(int(i) for i in cell), bounds) for cell in cells]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_br_cell, tasks))
    else:
        results = [_br_cell(t) for t in tasks]
    values = np.zeros(shape, dtype=np.int64)
    for cell, value in zip(cells, results):
        values[cell] = value
    return BRTable(
        d=modules[0].ring.nvars,
        ranks=tuple(m.ambient_rank for m in modules),
        origin=(0,) * len(modules),
        values=values,
    )


def finite_difference(table: BRTable, orders: Sequence[int]) -> BRTable:
    """Backward differences (D_i f)(n) = f(n) - f(n - e_i), ``orders[i]`` times along axis i."""
    if len(orders) != table.q:
        raise PreconditionError("one order per axis is required")
    values = table.values
    for axis, a in enumerate(orders):
        if a < 0:
            raise PreconditionError("difference orders must be non-negative")
        if a >= values.shape[axis]:
            raise WindowTooSmall(
                f"axis {axis} has {values.shape[axis]} points, too few for {a} differences"
            )
        if a:
            values = np.diff(values, n=a, axis=axis)
    origin = tuple(o + a for o, a in zip(table.origin, orders))
    return BRTable(table.d, table.ranks, origin, values)


@dataclass(frozen=True)
class MixedBR:
    """A top-corner difference value with its stabilization report."""

    value: int
    stabilized: bool
    window: tuple[int, ...]
    differences: BRTable = field(repr=False, compare=False)

    @property
    def status(self) -> CertificateStatus:
        return CertificateStatus.CERTIFIED if self.stabilized else CertificateStatus.UNSTABILIZED


def _top_difference(table: BRTable, orders: Sequence[int]) -> MixedBR:
    diff = finite_difference(table, orders)
    return MixedBR(diff.top(), diff.stabilized, table.upper, diff)


def mixed_br(
    modules: Sequence[Submodule],
    window: Sequence[int] | None = None,
    bounds: Bounds = DEFAULT_BOUNDS,
    jobs: int = 1,
) -> MixedBR:
    """br(M_1|...|M_d) as D_1^{r_1}...D_d^{r_d} f at the window's top corner."""
    d = modules[0].ring.nvars
    if len(modules) != d:
        raise PreconditionError(f"mixed_br needs exactly d = {d} modules, got {len(modules)}")
    ranks = [m.ambient_rank for m in modules]
    window = tuple(window) if window is not None else tuple(r + 2 for r in ranks)
    if any(w < r + 2 for w, r in zip(window, ranks)):
        needed = tuple(r + 2 for r in ranks)
        raise WindowTooSmall(f"window {window} must reach (r_k + 2) = {needed}")
    return _top_difference(br_table(modules, window, bounds, jobs), ranks)


def mixed_br_stabilized(
    modules: Sequence[Submodule],
    window: Sequence[int] | None = None,
    bounds: Bounds = DEFAULT_BOUNDS,
    jobs: int = 1,
) -> MixedBR:
    """mixed_br, enlarging the window while the report stays unstabilized."""
    result = mixed_br(modules, window, bounds, jobs)
    for _ in range(bounds.max_window_growths):
        if result.stabilized:
            break
        grown = tuple(w + bounds.window_growth for w in result.window)
        logger.info("mixed br unstabilized at %s; retrying at %s", result.window, grown)
        result = mixed_br(modules, grown, bounds, jobs)
    return result


def br_multiplicity(
    module: Submodule, window: int | None = None, bounds: Bounds = DEFAULT_BOUNDS
) -> MixedBR:
    """br(M) = D^{d+r-1} of n -> lambda(S_n(F)/S_n(M)), with window growth on failure."""
    order = module.ring.nvars + module.ambient_rank - 1
    n = window if window is not None else order + 1
    if n < order + 1:
        raise WindowTooSmall(f"window {n} is below {order + 1}")
    result = _top_difference(br_table([module], (n,), bounds), (order,))
    for _ in range(bounds.max_window_growths):
        if result.stabilized:
            break
        n += bounds.window_growth
        logger.info("br(M) unstabilized; retrying with window %d", n)
        result = _top_difference(br_table([module], (n,), bounds), (order,))
    return result


def expected_degree(table: BRTable) -> int:
    """Total degree d + r_1 + ... + r_q - q of the joint Buchsbaum-Rim polynomial."""
    return table.d + sum(table.ranks) - table.q


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


@dataclass(frozen=True)
class DegreeCheck:
    """Outcome of the total-degree test on a table."""

    degree: int
    vanishing: bool  # all order-(degree+1) differences vanish on the stabilized corner
    nonvanishing: bool  # some order-degree difference is nonzero at the top corner

    @property
    def holds(self) -> bool:
        return self.vanishing and self.nonvanishing

    def __bool__(self) -> bool:
        return self.holds


def degree_check(table: BRTable) -> DegreeCheck:
    """Confirm that f has total degree d + sum(r_k) - q on the table's top corner."""
    degree = expected_degree(table)
    if any(e - 1 < degree + 2 for e in table.extents):
        raise WindowTooSmall(f"window side must be at least {degree + 2} on every axis")
    vanishing = all(
        not np.any(finite_difference(table, a).corner())
        for a in _compositions(degree + 1, table.q)
    )
    nonvanishing = any(
        finite_difference(table, a).top() != 0 for a in _compositions(degree, table.q)
    )
    return DegreeCheck(degree, vanishing, nonvanishing)


@dataclass(frozen=True)
class MuTable:
    """Minimal generator counts of S_n(M_1)...S_n(M_q) for n = 0..n_max."""

    values: tuple[int, ...]
    fitted_degree: int  # estimate only


def mu_table(
    modules: Sequence[Submodule], n_max: int, bounds: Bounds = DEFAULT_BOUNDS
) -> MuTable:
    values = tuple(
        min_generators(graded_product([(m, n) for m in modules], bounds), bounds.s_max)
        for n in range(n_max + 1)
    )
    array = np.array(values, dtype=np.int64)
    fitted = 0
    for k in range(len(values) - 1, 0, -1):
        if np.diff(array, n=k)[-1] != 0:
            fitted = k
            break
    return MuTable(values, fitted)
