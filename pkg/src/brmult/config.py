"""Computation bounds and scalar field selection."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any

from brmult.errors import PreconditionError

DEFAULT_PRIME = 32003
MIN_PRIME = 10_000
MAX_PRIME = 2**31


@dataclass(frozen=True)
class Bounds:
    """Search bounds shared by every certified computation.

    Attributes:
        s_max: Largest exponent tried by finite-colength certificates.
        n_max: Largest n tried by joint reduction sweeps.
        generator_cap: Largest generator count a product may reach.
        trials: Random draws used by route-B mixed multiplicities.
        window_growth: Points added per axis when a window fails to stabilize.
        max_window_growths: How many times a window may be enlarged.
    """

    s_max: int = 24
    n_max: int = 6
    generator_cap: int = 20000
    trials: int = 5
    window_growth: int = 2
    max_window_growths: int = 2

    def __post_init__(self) -> None:
        if self.s_max < 1:
            raise PreconditionError("s_max must be at least 1")
        if self.n_max < 0:
            raise PreconditionError("n_max must be non-negative")
        if self.generator_cap < 1:
            raise PreconditionError("generator_cap must be positive")
        if self.trials < 1:
            raise PreconditionError("trials must be positive")

    def replace(self, **changes: Any) -> Bounds:
        return replace(self, **changes)


DEFAULT_BOUNDS = Bounds()


@dataclass(frozen=True)
class FieldSpec:
    """Textual field selection: ``fp:<prime>`` or ``q``."""

    prime: int | None = DEFAULT_PRIME

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        text = text.strip().lower()
        if text == "q":
            return cls(prime=None)
        if text.startswith("fp:"):
            try:
                prime = int(text[3:])
            except ValueError:
                raise PreconditionError(f"invalid prime in field spec {text!r}") from None
            return cls(prime=prime)
        raise PreconditionError(f"field must be 'fp:<prime>' or 'q', got {text!r}")

    def __str__(self) -> str:
        return "q" if self.prime is None else f"fp:{self.prime}"


DEFAULT_FIELD = FieldSpec()
