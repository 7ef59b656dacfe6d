"""Finite-colength submodules of free modules over the local ring."""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

from brmult.config import DEFAULT_BOUNDS
from brmult.errors import Indeterminate, NotFiniteColength, PreconditionError
from brmult.exactla import RowSpace, independent_subset
from brmult.localring.ideal import MIdeal, mprimary_exponent
from brmult.localring.jets import Column, JetSpace, nakayama_exponent
from brmult.localring.poly import Poly, PolyRing

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Submodule:
    """M inside F = R^r given by generator columns.

    ``exponent_bound`` is an s with m^s F inside M known from how the module was
    built (products and direct sums of certified modules); when absent the
    exponent is found by search.
    """

    ring: PolyRing
    ambient_rank: int
    gens: tuple[Column, ...]
    exponent_bound: int | None = field(default=None, compare=False)
    _cache: dict[Any, Any] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        kept: list[Column] = []
        for column in self.gens:
            column = tuple(column)
            if len(column) != self.ambient_rank:
                raise PreconditionError(
                    f"generator of length {len(column)} in a module of rank {self.ambient_rank}"
                )
            if any(column):
                kept.append(column)
        object.__setattr__(self, "gens", tuple(kept))

    @classmethod
    def free(cls, ring: PolyRing, rank: int) -> Submodule:
        return cls(ring, rank, tuple(unit_vector(ring, rank, i) for i in range(rank)), 0)

    @classmethod
    def from_ideal(cls, ideal: MIdeal) -> Submodule:
        return cls(ideal.ring, 1, ideal.columns)

    @classmethod
    def from_matrix(cls, ring: PolyRing, rows: Sequence[Sequence[Poly]]) -> Submodule:
        """Columns of a matrix given row by row."""
        rank = len(rows)
        width = len(rows[0]) if rows else 0
        columns = tuple(tuple(rows[i][j] for i in range(rank)) for j in range(width))
        return cls(ring, rank, columns)

    @property
    def ngens(self) -> int:
        return len(self.gens)

    def matrix(self) -> list[list[Poly]]:
        """Generator matrix row by row."""
        return [[column[i] for column in self.gens] for i in range(self.ambient_rank)]

    def __str__(self) -> str:
        cols = ", ".join("(" + ", ".join(str(p) for p in c) + ")" for c in self.gens)
        return f"<{cols}> in R^{self.ambient_rank}"


def unit_vector(ring: PolyRing, rank: int, i: int) -> Column:
    return tuple(ring.one if k == i else ring.zero for k in range(rank))


def cofactor_minors(
    ring: PolyRing, rows: Sequence[Sequence[Poly]]
) -> Callable[[tuple[int, ...]], Poly]:
    """Maximal minors of a matrix with len(rows) rows, keyed by their column tuple.

    Expansion runs along the top row; minors on the lower rows are shared across
    column choices.
    """
    n = len(rows)
    memo: dict[tuple[int, ...], Poly] = {}

    def minor(cols: tuple[int, ...]) -> Poly:
        if not cols:
            return ring.one
        depth = n - len(cols)
        if len(cols) == 1:
            return rows[depth][cols[0]]
        if cols in memo:
            return memo[cols]
        total = ring.zero
        for k, c in enumerate(cols):
            entry = rows[depth][c]
            if entry:
                term = entry * minor(cols[:k] + cols[k + 1 :])
                total = total - term if k % 2 else total + term
        memo[cols] = total
        return total

    return minor


def determinant(ring: PolyRing, rows: Sequence[Sequence[Poly]]) -> Poly:
    """Exact determinant by cofactor expansion along the first row."""
    return cofactor_minors(ring, rows)(tuple(range(len(rows))))


def fitting_ideal(module: Submodule) -> MIdeal:
    """Ideal of maximal minors of the generator matrix."""
    if "fitting" in module._cache:
        cached: MIdeal = module._cache["fitting"]
        return cached
    ring, r = module.ring, module.ambient_rank
    if r == 0:
        ideal = MIdeal.unit(ring)
    elif module.ngens < r:
        ideal = MIdeal.zero(ring)
    else:
        minor = cofactor_minors(ring, module.matrix())
        minors = (minor(cols) for cols in combinations(range(module.ngens), r))
        ideal = MIdeal(ring, tuple(m for m in minors if m))
    module._cache["fitting"] = ideal
    return ideal


def cramer_exponent(module: Submodule, s_max: int = DEFAULT_BOUNDS.s_max) -> int | Indeterminate:
    """s with m^s inside I(M), hence m^s F inside M by the adjugate identity."""
    return mprimary_exponent(fitting_ideal(module), s_max)


def module_exponent(module: Submodule, s_max: int = DEFAULT_BOUNDS.s_max) -> int | Indeterminate:
    """A certified s with m^s F inside M.

    Uses the construction bound when present, else the smallest s found by the
    Nakayama certificate m^s F inside M + m^{s+1} F.
    """
    if module.exponent_bound is not None:
        return module.exponent_bound
    key = ("s", s_max)
    if key not in module._cache:
        module._cache[key] = nakayama_exponent(
            module.ring, module.ambient_rank, module.gens, s_max
        )
    result: int | Indeterminate = module._cache[key]
    return result


def exponent_source(module: Submodule) -> str:
    return "search" if module.exponent_bound is None else "product bound"


def certified_exponent(module: Submodule, s_max: int = DEFAULT_BOUNDS.s_max) -> int:
    s = module_exponent(module, s_max)
    if isinstance(s, Indeterminate):
        raise NotFiniteColength(f"submodule of R^{module.ambient_rank}", s_max)
    return s


def _jets(module: Submodule, degree: int) -> tuple[JetSpace, RowSpace]:
    key = ("rows", degree)
    if key not in module._cache:
        space = JetSpace(module.ring.nvars, module.ambient_rank, degree)
        module._cache[key] = (space, space.row_space(module.ring.field, module.gens))
    result: tuple[JetSpace, RowSpace] = module._cache[key]
    return result


def colength(module: Submodule, s_max: int = DEFAULT_BOUNDS.s_max) -> int:
    """lambda(F/M)."""
    s = certified_exponent(module, s_max)
    if s == 0:
        return 0
    space, rows = _jets(module, s - 1)
    return space.dim - rows.rank


def contains(module: Submodule, vector: Sequence[Poly], s_max: int = DEFAULT_BOUNDS.s_max) -> bool:
    if len(vector) != module.ambient_rank:
        raise PreconditionError(
            f"vector of length {len(vector)} against a module of rank {module.ambient_rank}"
        )
    s = certified_exponent(module, s_max)
    if s == 0 or not any(vector):
        return True
    space, rows = _jets(module, s - 1)
    return rows.contains(space.vector(vector))


def submodule_leq(a: Submodule, b: Submodule, s_max: int = DEFAULT_BOUNDS.s_max) -> bool:
    """True iff every generator of ``a`` lies in ``b``."""
    if a.ambient_rank != b.ambient_rank:
        raise PreconditionError("submodules of different free modules")
    return all(contains(b, g, s_max) for g in a.gens)


def submodule_eq(a: Submodule, b: Submodule, s_max: int = DEFAULT_BOUNDS.s_max) -> bool:
    return submodule_leq(a, b, s_max) and submodule_leq(b, a, s_max)


def maximal_ideal_times(module: Submodule) -> Submodule:
    """mM, generated by x_i * g_j."""
    ring = module.ring
    gens = tuple(
        tuple(x * p for p in column) for column in module.gens for x in ring.gens()
    )
    bound = None if module.exponent_bound is None else module.exponent_bound + 1
    return Submodule(ring, module.ambient_rank, gens, bound)


def residuals_modulo_mm(
    module: Submodule, vectors: Sequence[Column], s_max: int = DEFAULT_BOUNDS.s_max
) -> list[dict[int, Any]]:
    """Images of ``vectors`` (elements of M) in M/mM, as jets reduced modulo mM.

    With m^s F inside M, m^{s+1} F lies inside mM, so jets at degree s see all of M/mM.
    """
    s = certified_exponent(module, s_max)
    space = JetSpace(module.ring.nvars, module.ambient_rank, s)
    mm = maximal_ideal_times(module)
    rows = space.row_space(module.ring.field, mm.gens)
    return [rows.residual(space.vector(v)) for v in vectors]


def minimal_generating_subset(
    module: Submodule, s_max: int = DEFAULT_BOUNDS.s_max
) -> tuple[int, ...]:
    """Indices of generators whose images form a basis of M/mM (earliest first)."""
    key = ("mingens", s_max)
    if key not in module._cache:
        residuals = residuals_modulo_mm(module, module.gens, s_max)
        module._cache[key] = tuple(independent_subset(module.ring.field, residuals))
    result: tuple[int, ...] = module._cache[key]
    return result


def min_generators(module: Submodule, s_max: int = DEFAULT_BOUNDS.s_max) -> int:
    """mu(M) = dim_k M/mM."""
    return len(minimal_generating_subset(module, s_max))


def ord_module(module: Submodule) -> int | float:
    """ord(I(M))."""
    return fitting_ideal(module).ord


def direct_sum(a: Submodule, b: Submodule) -> Submodule:
    """Block generator matrix in R^{r_a + r_b}."""
    if a.ring.nvars != b.ring.nvars:
        raise PreconditionError("direct sum over different rings")
    ring = a.ring
    pad_a = (ring.zero,) * b.ambient_rank
    pad_b = (ring.zero,) * a.ambient_rank
    gens = tuple(c + pad_a for c in a.gens) + tuple(pad_b + c for c in b.gens)
    bound = None
    if a.exponent_bound is not None and b.exponent_bound is not None:
        bound = max(a.exponent_bound, b.exponent_bound)
    return Submodule(ring, a.ambient_rank + b.ambient_rank, gens, bound)


def scalar_extend(ideal: MIdeal, module: Submodule) -> Submodule:
    """IM, generated by f * g over generators f of I and g of M."""
    gens = tuple(tuple(f * p for p in column) for f in ideal.gens for column in module.gens)
    return Submodule(module.ring, module.ambient_rank, gens)


def inclusion_deficit(
    big: Submodule, small: Submodule, s_max: int = DEFAULT_BOUNDS.s_max
) -> int:
    """dim of big/(small + m^{s+1}F) for ``small`` inside ``big`` with m^s F inside big.

    Zero exactly when the modules are equal: m^{s+1}F lies in m*big, so
    big inside small + m*big gives big inside small by Nakayama's lemma.
    """
    if big.ambient_rank != small.ambient_rank:
        raise PreconditionError("submodules of different free modules")
    s = certified_exponent(big, s_max)
    space, big_rows = _jets(big, s)
    small_rows = space.row_space(small.ring.field, small.gens)
    return big_rows.rank - small_rows.rank
