"""Truncated coefficient spaces F/m^{D+1}F and the certificates built on them.

A vector of polynomials truncated at total degree D is a "jet". Every
finite-colength question in the package reduces to the row space spanned by
the jets of x^a * g over the generators g of a submodule.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache

from brmult.errors import Indeterminate
from brmult.exactla import Field, RowSpace, Scalar, SparseVector
from brmult.localring.poly import (
    Monomial,
    Poly,
    PolyRing,
    column_ord,
    degree,
    mono_mul,
    monomials_of_degree,
    monomials_up_to,
)

logger = logging.getLogger(__name__)

Column = tuple[Poly, ...]


@lru_cache(maxsize=None)
def _monomial_index(nvars: int, deg: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials_up_to(nvars, deg))}


@dataclass(frozen=True)
class JetSpace:
    """Coordinates of F/m^{degree+1}F for F of the given rank, component-major."""

    nvars: int
    rank: int
    degree: int

    @cached_property
    def monomials(self) -> tuple[Monomial, ...]:
        return monomials_up_to(self.nvars, self.degree) if self.degree >= 0 else ()

    @property
    def index(self) -> dict[Monomial, int]:
        return _monomial_index(self.nvars, self.degree)

    @property
    def dim(self) -> int:
        return self.rank * len(self.monomials)

    def coordinate(self, component: int, m: Monomial) -> int:
        return component * len(self.monomials) + self.index[m]

    def split(self, coordinate: int) -> tuple[int, Monomial]:
        component, k = divmod(coordinate, len(self.monomials))
        return component, self.monomials[k]

    def vector(self, column: Sequence[Poly]) -> dict[int, Scalar]:
        """The jet of ``column``."""
        out: dict[int, Scalar] = {}
        for i, f in enumerate(column):
            for m, c in f.terms.items():
                if degree(m) <= self.degree:
                    out[self.coordinate(i, m)] = c
        return out

    def shifted_rows(self, columns: Sequence[Column]) -> Iterator[dict[int, Scalar]]:
        """Jets of x^a * g for every generator g and every shift that survives truncation."""
        for column in columns:
            low = column_ord(column)
            if low > self.degree:
                continue
            terms = [
                (i, m, c, degree(m))
                for i, f in enumerate(column)
                for m, c in f.terms.items()
                if degree(m) <= self.degree
            ]
            for a in monomials_up_to(self.nvars, self.degree - int(low)):
                da = degree(a)
                row = {
                    self.coordinate(i, mono_mul(m, a)): c
                    for i, m, c, dm in terms
                    if dm + da <= self.degree
                }
                if row:
                    yield row

    def row_space(self, field: Field, columns: Sequence[Column]) -> RowSpace:
        return RowSpace.from_sparse_rows(field, self.dim, self.shifted_rows(columns))

    def to_column(self, ring: PolyRing, vector: SparseVector) -> Column:
        """Turn a jet back into a vector of polynomials."""
        entries: list[dict[Monomial, Scalar]] = [{} for _ in range(self.rank)]
        for coordinate, c in vector.items():
            component, m = self.split(coordinate)
            entries[component][m] = c
        return tuple(Poly(ring, e) for e in entries)


def top_degree_units(space: JetSpace) -> Iterator[dict[int, Scalar]]:
    """Unit jets e_i * x^b with |b| equal to the space's degree."""
    for component in range(space.rank):
        for m in monomials_of_degree(space.nvars, space.degree):
            yield {space.coordinate(component, m): 1}


def nakayama_exponent(
    ring: PolyRing,
    rank: int,
    columns: Sequence[Column],
    s_max: int,
    start: int = 0,
) -> int | Indeterminate:
    """Smallest s >= ``start`` with m^s F inside M + m^{s+1} F, hence inside M.

    M + m^{s+1}F is spanned modulo m^{s+1}F by the jets of x^a * g at degree s;
    the inclusion m^s F within it lifts to m^s F within M by Nakayama's lemma.
    """
    if rank == 0:
        return 0
    if not columns:
        return Indeterminate(s_max)
    lowest = min(column_ord(c) for c in columns)
    s = max(start, int(lowest))
    while s <= s_max:
        space = JetSpace(ring.nvars, rank, s)
        rows = space.row_space(ring.field, columns)
        if all(rows.contains(unit) for unit in top_degree_units(space)):
            logger.debug("exponent certificate s=%d (rank %d, %d gens)", s, rank, len(columns))
            return s
        s += 1
    logger.debug("no exponent certificate up to s=%d", s_max)
    return Indeterminate(s_max)


def quotient_dimension(ring: PolyRing, rank: int, columns: Sequence[Column], s: int) -> int:
    """dim F/M given m^s F inside M."""
    if s <= 0:
        return 0
    space = JetSpace(ring.nvars, rank, s - 1)
    return space.dim - space.row_space(ring.field, columns).rank
