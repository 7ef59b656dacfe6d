"""Integral closure of monomial ideals in two variables and integrally closed module specs."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from brmult.errors import Indeterminate, NotFiniteColength, PreconditionError
from brmult.localring.ideal import MIdeal, minimal_monomials, mprimary_exponent
from brmult.localring.poly import Monomial, PolyRing
from brmult.submod import Submodule, direct_sum, fitting_ideal, min_generators, ord_module

Point = tuple[int, int]


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_boundary(exponents: Iterable[Sequence[int]]) -> list[Point]:
    """Vertices of the compact edges of the Newton polygon, left to right."""
    points = sorted({(int(e[0]), int(e[1])) for e in exponents})
    lower: list[Point] = []
    for p in points:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    # Only the decreasing part of the lower hull bounds conv(points) + N^2.
    chain = [lower[0]]
    for p in lower[1:]:
        if p[1] < chain[-1][1]:
            chain.append(p)
    return chain


def in_newton_polyhedron(u: Point, boundary: Sequence[Point]) -> bool:
    if u[0] < 0 or u[1] < 0:
        return False
    if len(boundary) == 1:
        return u[0] >= boundary[0][0] and u[1] >= boundary[0][1]
    return all(_cross(p, q, u) >= 0 for p, q in zip(boundary, boundary[1:]))


def closure_exponents(exponents: Iterable[Sequence[int]]) -> list[Monomial]:
    """Minimal exponents of the integral closure of an m-primary monomial ideal in d = 2."""
    minimal = minimal_monomials(tuple(int(v) for v in e) for e in exponents)
    if any(len(e) != 2 for e in minimal):
        raise PreconditionError("monomial closure is implemented for two variables")
    pure_x = [e[0] for e in minimal if e[1] == 0]
    pure_y = [e[1] for e in minimal if e[0] == 0]
    if not pure_x or not pure_y:
        raise NotFiniteColength(f"monomial ideal {minimal}", 0)
    a, b = min(pure_x), min(pure_y)
    boundary = newton_boundary(minimal)
    inside = [
        (i, j)
        for i in range(a + 1)
        for j in range(b + 1)
        if in_newton_polyhedron((i, j), boundary)
    ]
    return minimal_monomials(inside)


def monomial_closure(ideal: MIdeal) -> MIdeal:
    """Integral closure of an m-primary monomial ideal of k[x, y]."""
    if ideal.ring.nvars != 2:
        raise PreconditionError("monomial closure is implemented for two variables")
    return MIdeal.monomial(ideal.ring, closure_exponents(ideal.exponents()))


def is_integrally_closed_monomial(ideal: MIdeal) -> bool:
    return set(monomial_closure(ideal).exponents()) == set(ideal.exponents())


def contracted_numerical_test(module: Submodule) -> bool:
    """mu(M) = ord(M) + rank(F)."""
    return min_generators(module) == ord_module(module) + module.ambient_rank


@dataclass(frozen=True)
class Summand:
    """A free summand (``exponents is None``) or a monomial ideal by generator exponents."""

    exponents: tuple[Monomial, ...] | None = None

    @property
    def is_free(self) -> bool:
        return self.exponents is None

    @property
    def order(self) -> int:
        if self.exponents is None:
            return 0
        return min(sum(e) for e in self.exponents)

    def ideal(self, ring: PolyRing) -> MIdeal:
        if self.exponents is None:
            return MIdeal.unit(ring)
        return MIdeal.monomial(ring, self.exponents)

    def __str__(self) -> str:
        if self.exponents is None:
            return "free"
        return "ideal " + " ".join(f"{e[0]},{e[1]}" for e in self.exponents)


FREE = Summand()


@dataclass(frozen=True)
class ICModuleSpec:
    """Direct sum of free summands and complete monomial ideals of k[x, y]."""

    summands: tuple[Summand, ...]
    check: bool = True

    def __post_init__(self) -> None:
        if not self.summands:
            raise PreconditionError("a module spec needs at least one summand")
        normalized = []
        for s in self.summands:
            if s.exponents is not None:
                exps = tuple(minimal_monomials(tuple(int(v) for v in e) for e in s.exponents))
                if self.check and set(closure_exponents(exps)) != set(exps):
                    raise PreconditionError(f"summand {Summand(exps)} is not integrally closed")
                s = Summand(exps)
            normalized.append(s)
        object.__setattr__(self, "summands", tuple(normalized))

    @classmethod
    def of(cls, *parts: Sequence[Sequence[int]] | None, check: bool = True) -> ICModuleSpec:
        """Summands from exponent lists; ``None`` is a free summand."""
        return cls(
            tuple(FREE if p is None else Summand(tuple(tuple(e) for e in p)) for p in parts),
            check,
        )

    @classmethod
    def maximal_powers(cls, *powers: int) -> ICModuleSpec:
        """m^{p_1} + ... + m^{p_r}; a zero power is a free summand."""
        return cls(
            tuple(
                FREE if p == 0 else Summand(tuple((p - j, j) for j in range(p + 1)))
                for p in powers
            )
        )

    @property
    def rank(self) -> int:
        return len(self.summands)

    @property
    def order(self) -> int:
        """ord(I(M)), the sum of the summand orders."""
        return sum(s.order for s in self.summands)

    @property
    def is_proper(self) -> bool:
        return any(not s.is_free for s in self.summands)

    def realize(self, ring: PolyRing) -> Submodule:
        if ring.nvars != 2:
            raise PreconditionError("integrally closed specs live over k[x, y]")
        module: Submodule | None = None
        for s in self.summands:
            ideal = s.ideal(ring)
            exponent = mprimary_exponent(ideal)
            bound = None if isinstance(exponent, Indeterminate) else exponent
            part = Submodule(ring, 1, ideal.columns, bound)
            module = part if module is None else direct_sum(module, part)
        assert module is not None
        return module

    def fitting(self, ring: PolyRing) -> MIdeal:
        return fitting_ideal(self.realize(ring))

    def __str__(self) -> str:
        return " + ".join("R" if s.is_free else _ideal_text(s) for s in self.summands)


def _ideal_text(s: Summand) -> str:
    assert s.exponents is not None
    names = []
    for i, j in s.exponents:
        parts = [v if k == 1 else f"{v}^{k}" for v, k in (("x", i), ("y", j)) if k]
        names.append("*".join(parts) or "1")
    return "(" + ", ".join(names) + ")"
