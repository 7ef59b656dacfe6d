"""Report records and their JSON / CSV renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any

from brmult.certificates import CertificateLog
from brmult.errors import CertificateStatus
from brmult.symprod import BRTable


@dataclass
class TheoremReport:
    """Both sides of a checked identity plus the evidence behind them."""

    theorem: str
    lhs: int | None
    rhs: int | None
    instance: str = ""
    seed: int | None = None
    status: CertificateStatus = CertificateStatus.CERTIFIED
    certificates: CertificateLog = field(default_factory=CertificateLog)
    details: dict[str, Any] = field(default_factory=dict)
    # Side conditions that must hold on top of lhs == rhs.
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def equal(self) -> bool:
        return self.lhs is not None and self.lhs == self.rhs and all(self.checks.values())

    @property
    def failed_checks(self) -> list[str]:
        return [name for name, ok in self.checks.items() if not ok]

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "theorem": self.theorem,
            "instance": self.instance,
            "seed": self.seed,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "equal": self.equal,
            "status": self.status.value,
            "certificates": self.certificates.as_dict(),
        }
        if self.checks:
            out["checks"] = dict(self.checks)
        out.update(self.details)
        return out

    def __str__(self) -> str:
        verdict = "equal" if self.equal else "NOT equal"
        if self.failed_checks:
            verdict += "; failed " + ", ".join(self.failed_checks)
        return f"[{self.theorem}] {self.instance}: {self.lhs} vs {self.rhs} ({verdict})"


def to_json(payload: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent."""
    return json.dumps(_plain(payload), sort_keys=True, indent=2)


def _plain(value: Any) -> Any:
    if hasattr(value, "to_dict"):
        return _plain(value.to_dict())
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


def table_to_dict(table: BRTable) -> dict[str, Any]:
    """Window and row-major values."""
    return {
        "d": table.d,
        "ranks": list(table.ranks),
        "origin": list(table.origin),
        "extents": list(table.extents),
        "values": [int(v) for v in table.values.reshape(-1)],
    }


def table_to_csv(table: BRTable) -> str:
    """Header ``n1,..,nq,length`` then one row per window point."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow([f"n{i + 1}" for i in range(table.q)] + ["length"])
    for n, value in table.points():
        writer.writerow([*n, value])
    return buffer.getvalue()


def rows_to_csv(header: list[str], rows: list[list[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()
