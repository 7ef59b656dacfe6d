"""Ideals of the local ring and their finite-colength certificates."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from brmult.config import DEFAULT_BOUNDS
from brmult.errors import Indeterminate, NotFiniteColength, PreconditionError
from brmult.exactla import RowSpace
from brmult.localring.jets import JetSpace, nakayama_exponent, quotient_dimension
from brmult.localring.poly import (
    ORDER_INFINITY,
    Monomial,
    Poly,
    PolyRing,
    divides,
    monomials_of_degree,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MIdeal:
    """Ideal of R given by generators; zero and repeated generators are dropped."""

    ring: PolyRing
    gens: tuple[Poly, ...]
    _cache: dict[Any, Any] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        kept: list[Poly] = []
        seen: set[Poly] = set()
        for g in self.gens:
            if g and g not in seen:
                seen.add(g)
                kept.append(g)
        object.__setattr__(self, "gens", tuple(kept))

    @classmethod
    def unit(cls, ring: PolyRing) -> MIdeal:
        return cls(ring, (ring.one,))

    @classmethod
    def zero(cls, ring: PolyRing) -> MIdeal:
        return cls(ring, ())

    @classmethod
    def maximal_power(cls, ring: PolyRing, s: int) -> MIdeal:
        return cls(ring, tuple(ring.monomial(m) for m in monomials_of_degree(ring.nvars, s)))

    @classmethod
    def monomial(cls, ring: PolyRing, exponents: Iterable[Sequence[int]]) -> MIdeal:
        return cls(ring, tuple(ring.monomial(e) for e in exponents))

    @property
    def columns(self) -> tuple[tuple[Poly], ...]:
        """Generators as rank-1 vectors."""
        return tuple((g,) for g in self.gens)

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.gens)

    def is_unit_ideal(self) -> bool:
        return any(g.is_unit() for g in self.gens)

    @property
    def ord(self) -> int | float:
        return min((g.ord for g in self.gens), default=ORDER_INFINITY)

    def exponents(self) -> list[Monomial]:
        """Minimal monomial generators (monomial ideals only)."""
        if not self.is_monomial():
            raise PreconditionError("not a monomial ideal")
        return minimal_monomials(next(iter(g.terms)) for g in self.gens)

    def __mul__(self, other: MIdeal) -> MIdeal:
        return ideal_product(self, other)

    def __add__(self, other: MIdeal) -> MIdeal:
        return ideal_sum(self, other)

    def __pow__(self, n: int) -> MIdeal:
        return ideal_power(self, n)

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.gens) + ")"


def minimal_monomials(monomials: Iterable[Monomial]) -> list[Monomial]:
    minimal: list[Monomial] = []
    for m in sorted(set(monomials), key=lambda e: (sum(e), tuple(-x for x in e))):
        if not any(divides(k, m) for k in minimal):
            minimal.append(m)
    return minimal


def _tidy(ring: PolyRing, gens: Iterable[Poly]) -> MIdeal:
    gens = [g for g in gens if g]
    if any(g.is_unit() for g in gens):
        return MIdeal.unit(ring)
    if gens and all(g.is_monomial() for g in gens):
        minimal = minimal_monomials(next(iter(g.terms)) for g in gens)
        return MIdeal(ring, tuple(ring.monomial(m) for m in minimal))
    return MIdeal(ring, tuple(gens))


def ideal_product(a: MIdeal, b: MIdeal) -> MIdeal:
    """Ideal generated by the pairwise products of generators."""
    return _tidy(a.ring, (f * g for f in a.gens for g in b.gens))


def ideal_power(ideal: MIdeal, n: int) -> MIdeal:
    """n-fold product; the zeroth power is the unit ideal."""
    result = MIdeal.unit(ideal.ring)
    for _ in range(n):
        result = ideal_product(result, ideal)
    return result


def ideal_sum(a: MIdeal, b: MIdeal) -> MIdeal:
    return MIdeal(a.ring, a.gens + b.gens)


def mprimary_exponent(ideal: MIdeal, s_max: int = DEFAULT_BOUNDS.s_max) -> int | Indeterminate:
    """Smallest s with m^s inside ``ideal``, or Indeterminate(s_max)."""
    key = ("s", s_max)
    if key not in ideal._cache:
        ideal._cache[key] = nakayama_exponent(ideal.ring, 1, ideal.columns, s_max)
    result: int | Indeterminate = ideal._cache[key]
    return result


def _certified_exponent(ideal: MIdeal, s_max: int) -> int:
    s = mprimary_exponent(ideal, s_max)
    if isinstance(s, Indeterminate):
        raise NotFiniteColength(f"ideal {ideal}", s_max)
    return s


def _row_space(ideal: MIdeal, s: int) -> tuple[JetSpace, RowSpace]:
    key = ("rows", s)
    if key not in ideal._cache:
        space = JetSpace(ideal.ring.nvars, 1, s - 1)
        ideal._cache[key] = (space, space.row_space(ideal.ring.field, ideal.columns))
    result: tuple[JetSpace, RowSpace] = ideal._cache[key]
    return result


def ideal_colength(ideal: MIdeal, s_max: int = DEFAULT_BOUNDS.s_max) -> int:
    """lambda(R/I)."""
    s = _certified_exponent(ideal, s_max)
    return quotient_dimension(ideal.ring, 1, ideal.columns, s)


def ideal_contains(ideal: MIdeal, f: Poly, s_max: int = DEFAULT_BOUNDS.s_max) -> bool:
    """Membership decided modulo m^s, exact because m^s lies in the ideal."""
    s = _certified_exponent(ideal, s_max)
    if s == 0 or not f:
        return True
    space, rows = _row_space(ideal, s)
    return rows.contains(space.vector((f,)))


def ideal_leq(a: MIdeal, b: MIdeal, s_max: int = DEFAULT_BOUNDS.s_max) -> bool:
    """True iff ``a`` is contained in ``b`` (``b`` must have finite colength)."""
    return all(ideal_contains(b, g, s_max) for g in a.gens)


def ideal_eq(a: MIdeal, b: MIdeal, s_max: int = DEFAULT_BOUNDS.s_max) -> bool:
    return ideal_leq(a, b, s_max) and ideal_leq(b, a, s_max)


def compress(ideal: MIdeal, s: int) -> MIdeal:
    """Smaller generating set, given that m^s lies in ``ideal``.

    The ideal equals the span of its reduced jets below degree s plus m^s.
    """
    ring = ideal.ring
    if s <= 0:
        return MIdeal.unit(ring)
    space, rows = _row_space(ideal, s)
    basis = [space.to_column(ring, v)[0] for v in rows.basis_vectors()]
    top = [ring.monomial(m) for m in monomials_of_degree(ring.nvars, s)]
    compressed = _tidy(ring, [*basis, *top])
    logger.debug("compressed %d generators to %d", len(ideal.gens), len(compressed.gens))
    return compressed
