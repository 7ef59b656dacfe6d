"""Monomials and sparse polynomials over an exact field."""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import TYPE_CHECKING

from brmult.errors import PreconditionError
from brmult.exactla import Field, PrimeField, Scalar

if TYPE_CHECKING:
    from brmult.localring.ideal import MIdeal

Monomial = tuple[int, ...]

ORDER_INFINITY = math.inf


def degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def divides(a: Monomial, b: Monomial) -> bool:
    """True iff x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, deg: int) -> tuple[Monomial, ...]:
    """Monomials of total degree ``deg`` in descending lex order (x^2, xy, y^2)."""
    if deg < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(nvars), deg):
        exps = [0] * nvars
        for v in combo:
            exps[v] += 1
        out.append(tuple(exps))
    return tuple(out)


@lru_cache(maxsize=None)
def monomials_up_to(nvars: int, deg: int) -> tuple[Monomial, ...]:
    """Monomials of total degree at most ``deg``, graded."""
    out: list[Monomial] = []
    for k in range(deg + 1):
        out.extend(monomials_of_degree(nvars, k))
    return tuple(out)


def _sort_key(m: Monomial) -> tuple[int, ...]:
    return (-degree(m), *(-e for e in m))


class PolyRing:
    """k[x_1..x_d] localized at the origin, represented by honest polynomials."""

    def __init__(self, variables: Sequence[str], field: Field | None = None) -> None:
        if not variables:
            raise PreconditionError("a ring needs at least one variable")
        if len(set(variables)) != len(variables):
            raise PreconditionError("variable names must be distinct")
        self.variables = tuple(variables)
        self.field = field if field is not None else PrimeField()

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def zero(self) -> Poly:
        return Poly(self, {})

    @property
    def one(self) -> Poly:
        return self.constant(1)

    def constant(self, c: Scalar) -> Poly:
        return Poly(self, {(0,) * self.nvars: c})

    def monomial(self, exps: Sequence[int], coefficient: Scalar = 1) -> Poly:
        if len(exps) != self.nvars:
            raise PreconditionError(f"monomial needs {self.nvars} exponents")
        return Poly(self, {tuple(exps): coefficient})

    def gens(self) -> tuple[Poly, ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def gen(self, index: int | str) -> Poly:
        if isinstance(index, str):
            index = self.variables.index(index)
        exps = [0] * self.nvars
        exps[index] = 1
        return self.monomial(exps)

    def parse(self, text: str) -> Poly:
        from brmult.localring.parser import parse_poly

        return parse_poly(self, text)

    def maximal_ideal(self) -> MIdeal:
        from brmult.localring.ideal import MIdeal

        return MIdeal(self, self.gens())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyRing):
            return NotImplemented
        return self.variables == other.variables and self.field == other.field

    def __hash__(self) -> int:
        return hash((self.variables, self.field))

    def __repr__(self) -> str:
        return f"PolyRing({', '.join(self.variables)}; {self.field.name})"


class Poly:
    """Polynomial with nonzero canonical coefficients keyed by monomial."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, Scalar]) -> None:
        field = ring.field
        clean: dict[Monomial, Scalar] = {}
        for m, c in terms.items():
            if len(m) != ring.nvars:
                raise PreconditionError(f"monomial {m} has the wrong number of variables")
            c = field.normalize(c)
            if c != 0:
                clean[m] = c
        self.ring = ring
        self.terms = clean
        self._hash: int | None = None

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other: Poly | int) -> Poly:
        if isinstance(other, Poly):
            if other.ring.nvars != self.ring.nvars:
                raise PreconditionError(
                    f"variable-count mismatch: {self.ring.nvars} vs {other.ring.nvars}"
                )
            return other
        return self.ring.constant(other)

    def __add__(self, other: Poly | int) -> Poly:
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Poly | int) -> Poly:
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> Poly:
        return self._coerce(other) - self

    def __mul__(self, other: Poly | int) -> Poly:
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return self.ring.zero
        field = self.ring.field
        out: dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = field.normalize(out.get(m, 0) + c1 * c2)
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise PreconditionError("negative powers are not polynomials")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Scalar) -> Poly:
        return Poly(self.ring, {m: v * c for m, v in self.terms.items()})

    def shift(self, a: Monomial) -> Poly:
        """Multiply by the monomial x^a."""
        return Poly(self.ring, {mono_mul(m, a): c for m, c in self.terms.items()})

    def truncate(self, bound: int) -> Poly:
        """Drop the terms of total degree above ``bound``."""
        return Poly(self.ring, {m: c for m, c in self.terms.items() if degree(m) <= bound})

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_unit(self) -> bool:
        """Units of the local ring are exactly the polynomials with nonzero constant term."""
        return (0,) * self.ring.nvars in self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def ord(self) -> int | float:
        """Order: least total degree of a term; ``inf`` for zero."""
        if not self.terms:
            return ORDER_INFINITY
        return min(degree(m) for m in self.terms)

    @property
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(degree(m) for m in self.terms)

    def coefficient(self, m: Monomial) -> Scalar:
        return self.terms.get(m, 0)

    def monomials(self) -> Iterator[Monomial]:
        return iter(sorted(self.terms, key=_sort_key))

    # -- identity ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring.nvars == other.ring.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for m in self.monomials():
            c = _signed(self.ring.field, self.terms[m])
            negative = c < 0
            mag = -c if negative else c
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.ring.variables, m)
                if e
            ]
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag), *factors])
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Poly({self})"


def _signed(field: Field, c: Scalar) -> Scalar:
    if isinstance(field, PrimeField) and isinstance(c, int) and c > field.p // 2:
        return c - field.p
    return c


def poly_add(f: Poly, g: Poly) -> Poly:
    return f + g


def poly_mul(f: Poly, g: Poly) -> Poly:
    return f * g


def poly_truncate(f: Poly, bound: int) -> Poly:
    return f.truncate(bound)


def poly_sum(ring: PolyRing, polys: Iterable[Poly]) -> Poly:
    out: dict[Monomial, Scalar] = {}
    for p in polys:
        for m, c in p.terms.items():
            out[m] = out.get(m, 0) + c
    return Poly(ring, out)


def column_ord(column: Sequence[Poly]) -> int | float:
    """Least order among the entries of a vector."""
    return min((p.ord for p in column), default=ORDER_INFINITY)
