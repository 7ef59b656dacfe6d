"""Certificate log collected while a verifier runs."""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class CertificateKind(Enum):
    """Kinds of evidence attached to reported numbers."""

    EXPONENT = "s"  # m^s F inside a submodule or ideal
    SWEEP = "sweep"  # joint reduction sweep
    STABILIZATION = "stabilization"  # finite-difference window
    TRIALS = "trials"  # random draws for route-B multiplicities


@dataclass(frozen=True)
class Certificate:
    """One piece of evidence."""

    kind: CertificateKind
    subject: str
    value: Any
    detail: str = ""

    def __str__(self) -> str:
        text = f"[{self.kind.value}] {self.subject} = {self.value}"
        return f"{text} ({self.detail})" if self.detail else text


class SubjectStack:
    """Nested subject names, joined with '/'."""

    def __init__(self) -> None:
        self._names: list[str] = []

    def push(self, name: str) -> None:
        self._names.append(name)

    def pop(self) -> str | None:
        return self._names.pop() if self._names else None

    def qualify(self, name: str) -> str:
        return "/".join([*self._names, name])

    def __len__(self) -> int:
        return len(self._names)


@dataclass
class CertificateLog:
    """Collects certificates and renders them for reports."""

    entries: list[Certificate] = field(default_factory=list)
    _stack: SubjectStack = field(default_factory=SubjectStack)

    def add(self, kind: CertificateKind, subject: str, value: Any, detail: str = "") -> None:
        self.entries.append(Certificate(kind, self._stack.qualify(subject), value, detail))

    def record_exponent(self, subject: str, s: int | None, source: str = "search") -> None:
        """Record the exponent s with m^s F contained in ``subject``."""
        self.add(CertificateKind.EXPONENT, subject, s, source)

    def record_sweep(self, subject: str, n: int | None, n_max: int) -> None:
        self.add(CertificateKind.SWEEP, subject, n, f"n_max={n_max}")

    def record_stabilization(
        self, subject: str, stabilized: bool, window: tuple[int, ...]
    ) -> None:
        self.add(
            CertificateKind.STABILIZATION,
            subject,
            stabilized,
            "window=" + ",".join(str(w) for w in window),
        )

    def record_trials(self, subject: str, trials: int, successes: int) -> None:
        self.add(CertificateKind.TRIALS, subject, successes, f"of {trials}")

    @contextmanager
    def subject(self, name: str) -> Iterator[CertificateLog]:
        """Prefix subjects recorded inside the block with ``name``."""
        self._stack.push(name)
        try:
            yield self
        finally:
            self._stack.pop()

    @property
    def all_stabilized(self) -> bool:
        return all(
            bool(c.value) for c in self.entries if c.kind is CertificateKind.STABILIZATION
        )

    def as_dict(self) -> dict[str, dict[str, Any]]:
        """Group entries by kind; later entries for a subject win."""
        grouped: dict[str, dict[str, Any]] = {}
        for cert in self.entries:
            bucket = grouped.setdefault(cert.kind.value, {})
            if cert.detail:
                bucket[cert.subject] = {"value": cert.value, "detail": cert.detail}
            else:
                bucket[cert.subject] = cert.value
        return grouped

    def __len__(self) -> int:
        return len(self.entries)
