"""Outcome enums, value-level sentinels and the exception hierarchy."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum


class CertificateStatus(Enum):
    """How a reported number was obtained."""

    CERTIFIED = "certified"  # exact, backed by a finite certificate
    INDETERMINATE = "indeterminate"  # certificate search hit its bound
    NOT_FOUND = "not_found"  # sweep ended without success
    UNSTABILIZED = "unstabilized"  # value read off a window that did not settle


class ExitCode(IntEnum):
    """Process exit codes of the command line."""

    OK = 0
    VERIFICATION_FAILED = 1
    INPUT_ERROR = 2
    INDETERMINATE = 3


@dataclass(frozen=True)
class Indeterminate:
    """No certificate was found up to ``bound``."""

    bound: int

    def __str__(self) -> str:
        return f"indeterminate (bound {self.bound})"


@dataclass(frozen=True)
class NotFound:
    """A sweep over ``0..bound`` ended without success."""

    bound: int

    def __str__(self) -> str:
        return f"not found (n <= {self.bound})"


class BrmultError(Exception):
    """Base class for all brmult errors."""


class PreconditionError(BrmultError, ValueError):
    """Arguments violate an operation's precondition (shapes, counts, arities)."""


class NotFiniteColength(BrmultError):
    """A finite-colength certificate failed up to the configured bound."""

    def __init__(self, what: str, bound: int) -> None:
        self.what = what
        self.bound = bound
        super().__init__(f"{what}: no finite-colength certificate up to s = {bound}")


class WindowTooSmall(BrmultError, ValueError):
    """A table window cannot support the requested differences."""


class GeneratorOverflow(BrmultError):
    """A product would exceed the configured generator cap."""

    def __init__(self, count: int, cap: int) -> None:
        self.count = count
        self.cap = cap
        super().__init__(f"{count} generators exceed the cap of {cap}")


class CandidateNotJointReduction(BrmultError):
    """A random candidate failed the equational sweep; draw again."""

    def __init__(self, seed: int, n_max: int) -> None:
        self.seed = seed
        self.n_max = n_max
        super().__init__(f"candidate from seed {seed} is not a joint reduction for n <= {n_max}")


class GeneratorExhausted(BrmultError):
    """A seeded instance generator used up its draws without a usable instance."""

    def __init__(self, what: str, attempts: int) -> None:
        self.what = what
        self.attempts = attempts
        super().__init__(f"no {what} in {attempts} draws")


class NotLocal(BrmultError):
    """A module's Fitting ideal is not a power of the maximal ideal."""


class InstanceError(BrmultError):
    """An instance file could not be turned into objects."""

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.message = message
        self.line = line
        self.column = column
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.line:
            return f"line {self.line}, column {self.column}: {self.message}"
        return self.message


class InstanceSyntaxError(InstanceError):
    """Tokenizer or grammar failure, positioned at the offending character."""
