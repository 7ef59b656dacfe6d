"""Tensor products of Koszul-type complexes of endomorphisms: H_0 lengths and the
determinant comparison."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Any

from brmult.config import DEFAULT_BOUNDS, Bounds
from brmult.errors import Indeterminate, NotFiniteColength, PreconditionError
from brmult.localring.ideal import MIdeal, ideal_colength, mprimary_exponent
from brmult.localring.jets import Column
from brmult.localring.poly import Poly, PolyRing
from brmult.submod import Submodule, colength, determinant

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Endo:
    """Endomorphism of F = R^r by its matrix in the standard basis (rows)."""

    ring: PolyRing
    matrix: tuple[tuple[Poly, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(row) for row in self.matrix)
        if any(len(row) != len(rows) for row in rows):
            raise PreconditionError("an endomorphism needs a square matrix")
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def from_columns(cls, ring: PolyRing, columns: Sequence[Column]) -> Endo:
        r = len(columns)
        return cls(ring, tuple(tuple(columns[j][i] for j in range(r)) for i in range(r)))

    @classmethod
    def identity(cls, ring: PolyRing, r: int) -> Endo:
        return cls(
            ring,
            tuple(tuple(ring.one if i == j else ring.zero for j in range(r)) for i in range(r)),
        )

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @cached_property
    def det(self) -> Poly:
        return determinant(self.ring, self.matrix)

    @property
    def columns(self) -> tuple[Column, ...]:
        return tuple(tuple(row[j] for row in self.matrix) for j in range(self.rank))

    def image(self) -> Submodule:
        return Submodule(self.ring, self.rank, self.columns)

    def times(self, other: Endo) -> Endo:
        """Matrix product self * other (column operations by ``other`` on self)."""
        if other.rank != self.rank:
            raise PreconditionError("ranks differ")
        r = self.rank
        ring = self.ring
        rows = tuple(
            tuple(
                sum((self.matrix[i][k] * other.matrix[k][j] for k in range(r)), ring.zero)
                for j in range(r)
            )
            for i in range(r)
        )
        return Endo(ring, rows)

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(str(p) for p in row) for row in self.matrix) + "]"


def block_upper(psi: Endo, theta: Endo, corner: Sequence[Sequence[Poly]] | None = None) -> Endo:
    """The block matrix [[psi, corner], [0, theta]]."""
    ring = psi.ring
    a, b = psi.rank, theta.rank
    if corner is None:
        corner = [[ring.zero] * b for _ in range(a)]
    top = tuple(tuple(psi.matrix[i]) + tuple(corner[i]) for i in range(a))
    bottom = tuple((ring.zero,) * a + tuple(theta.matrix[i]) for i in range(b))
    return Endo(ring, top + bottom)


def determinant_ideal(phis: Sequence[Endo]) -> MIdeal:
    return MIdeal(phis[0].ring, tuple(phi.det for phi in phis))


def layer_sum(phis: Sequence[Endo], exponent_bound: int | None = None) -> Submodule:
    """Sum over k of F_1 x ... x im(phi_k) x ... x F_q inside the tensor product.

    Basis e_{i_1} x ... x e_{i_q} in row-major order.
    """
    ring = phis[0].ring
    ranks = [phi.rank for phi in phis]
    cells = list(product(*(range(r) for r in ranks)))
    index = {cell: i for i, cell in enumerate(cells)}
    gens: list[Column] = []
    for k, phi in enumerate(phis):
        others = [range(r) if j != k else range(1) for j, r in enumerate(ranks)]
        for c in range(phi.rank):
            for rest in product(*others):
                column = [ring.zero] * len(cells)
                for i in range(phi.rank):
                    cell = rest[:k] + (i,) + rest[k + 1 :]
                    column[index[cell]] = phi.matrix[i][c]
                gens.append(tuple(column))
    return Submodule(ring, len(cells), tuple(gens), exponent_bound)


def _determinant_exponent(phis: Sequence[Endo], s_max: int) -> int:
    s = mprimary_exponent(determinant_ideal(phis), s_max)
    if isinstance(s, Indeterminate):
        raise NotFiniteColength("determinant ideal", s_max)
    return s


def h0_length(phis: Sequence[Endo], bounds: Bounds = DEFAULT_BOUNDS) -> int:
    """lambda(F_1/im(phi_1) x ... x F_q/im(phi_q)).

    det(phi_k) F_k lies in im(phi_k), so m^s kills the tensor product once m^s
    lies in the determinant ideal; that s certifies the layer sum.
    """
    if not phis:
        raise PreconditionError("at least one endomorphism is required")
    s = _determinant_exponent(phis, bounds.s_max)
    value = colength(layer_sum(phis, s), bounds.s_max)
    logger.debug("h0 length %d (determinant exponent %d)", value, s)
    return value


def det_koszul_colength(phis: Sequence[Endo], bounds: Bounds = DEFAULT_BOUNDS) -> int:
    """lambda(R/(det phi_1, ..., det phi_d))."""
    d = phis[0].ring.nvars if phis else 0
    if len(phis) != d:
        raise PreconditionError(f"exactly d = {d} endomorphisms are required")
    return ideal_colength(determinant_ideal(phis), bounds.s_max)


@dataclass(frozen=True)
class ComparisonReport:
    """H_0 length against the colength of the determinant ideal."""

    h0: int
    det_colength: int
    s: int

    @property
    def equal(self) -> bool:
        return self.h0 == self.det_colength

    def to_dict(self) -> dict[str, Any]:
        return {
            "h0": self.h0,
            "det_colength": self.det_colength,
            "equal": self.equal,
            "certificates": {"s": {"determinant ideal": self.s}},
        }


def verify_comparison(phis: Sequence[Endo], bounds: Bounds = DEFAULT_BOUNDS) -> ComparisonReport:
    s = _determinant_exponent(phis, bounds.s_max)
    return ComparisonReport(h0_length(phis, bounds), det_koszul_colength(phis, bounds), s)


def endo_from_joint_reduction(b: Submodule) -> Endo:
    """The endomorphism whose matrix is the generator matrix of B."""
    if b.ngens != b.ambient_rank:
        raise PreconditionError(
            f"B has {b.ngens} generators, expected exactly {b.ambient_rank}"
        )
    return Endo.from_columns(b.ring, b.gens)
