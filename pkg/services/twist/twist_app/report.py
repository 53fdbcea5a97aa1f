"""
Verification Reports.

A ``VerificationReport`` collects named check results (pass / fail / skip),
witnesses for failures, claims under test, and extracted data such as
presentation constants or twist terms.  Reports are plain data: they
serialise to deterministic JSON (sorted keys, schema version 1) and back.

Key Concepts Demonstrated:
- ``str, Enum`` statuses for JSON-friendly values
- Dataclasses with ``to_dict`` / ``from_dict`` serialisation helpers
- Separating gating checks from non-gating claims
- A human-readable summary table for terminals and CI logs
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

REPORT_SCHEMA_VERSION = 1


class CheckStatus(str, Enum):
    """Outcome of a single check."""

    PASS = "pass"
    FAIL = "fail"
    SKIP = "skip"


@dataclass
class Witness:
    """
    Enough information to reproduce a failure by hand.

    Attributes:
        element: The element (or pair/triple) the identity was evaluated on.
        key: The basis key whose coefficients differ.
        expected: Coefficient on the expected side, as a literal.
        actual: Coefficient on the computed side, as a literal.
    """

    element: str
    key: str
    expected: str
    actual: str

    def to_dict(self) -> dict[str, str]:
        return {
            "element": self.element,
            "key": self.key,
            "expected": self.expected,
            "actual": self.actual,
        }


@dataclass
class CheckResult:
    """A named, gating check."""

    name: str
    status: CheckStatus
    detail: str = ""
    witness: Witness | None = None

    @property
    def passed(self) -> bool:
        return self.status is not CheckStatus.FAIL

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"name": self.name, "status": self.status.value}
        if self.detail:
            data["detail"] = self.detail
        if self.witness is not None:
            data["witness"] = self.witness.to_dict()
        return data


@dataclass
class Claim:
    """A statement under test whose outcome is recorded but does not gate the run."""

    name: str
    holds: bool
    detail: str = ""
    data: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "holds": self.holds}
        if self.detail:
            out["detail"] = self.detail
        if self.data:
            out["data"] = self.data
        return out


@dataclass
class VerificationReport:
    """
    Ordered collection of checks, claims and extracted data.

    Attributes:
        name: Report title (session or pipeline name).
        checks: Gating checks in execution order.
        claims: Non-gating findings.
        data: Extracted values; scalars are stored as text literals.
        timings: Optional per-stage wall-clock seconds.
    """

    name: str
    checks: list[CheckResult] = field(default_factory=list)
    claims: list[Claim] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    def add(
        self,
        name: str,
        ok: bool,
        detail: str = "",
        witness: Witness | None = None,
    ) -> CheckResult:
        result = CheckResult(name, CheckStatus.PASS if ok else CheckStatus.FAIL, detail, witness)
        self.checks.append(result)
        return result

    def skip(self, name: str, detail: str = "") -> CheckResult:
        result = CheckResult(name, CheckStatus.SKIP, detail)
        self.checks.append(result)
        return result

    def claim(self, name: str, holds: bool, detail: str = "", **data: Any) -> Claim:
        entry = Claim(name, holds, detail, data)
        self.claims.append(entry)
        return entry

    def extend(self, other: VerificationReport, prefix: str | None = None) -> None:
        """Merge another report, optionally namespacing its entries."""
        tag = f"{prefix}/" if prefix else ""
        for check in other.checks:
            self.checks.append(CheckResult(tag + check.name, check.status, check.detail, check.witness))
        for entry in other.claims:
            self.claims.append(Claim(tag + entry.name, entry.holds, entry.detail, entry.data))
        if other.data:
            if prefix:
                self.data[prefix] = other.data
            else:
                self.data.update(other.data)
        for key, seconds in other.timings.items():
            self.timings[tag + key] = seconds

    def check(self, name: str) -> CheckResult:
        """Look up a check by name."""
        for result in self.checks:
            if result.name == name:
                return result
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if check.status is CheckStatus.FAIL]

    def to_dict(self, include_timings: bool = False) -> dict[str, Any]:
        data: dict[str, Any] = {
            "schema": REPORT_SCHEMA_VERSION,
            "name": self.name,
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
            "claims": [entry.to_dict() for entry in self.claims],
            "data": self.data,
        }
        if include_timings:
            data["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return data

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> VerificationReport:
        """Rebuild a report from ``to_dict`` output."""
        if data.get("schema") != REPORT_SCHEMA_VERSION:
            raise ValueError(f"Unsupported report schema: {data.get('schema')!r}")
        report = cls(name=data["name"], data=dict(data.get("data", {})))
        for entry in data.get("checks", []):
            witness = entry.get("witness")
            report.checks.append(
                CheckResult(
                    entry["name"],
                    CheckStatus(entry["status"]),
                    entry.get("detail", ""),
                    Witness(**witness) if witness else None,
                )
            )
        for entry in data.get("claims", []):
            report.claims.append(
                Claim(entry["name"], entry["holds"], entry.get("detail", ""), entry.get("data", {}))
            )
        report.timings = dict(data.get("timings", {}))
        return report

    def render_text(self, include_timings: bool = False) -> str:
        """Human-readable summary table."""
        width = max([len(c.name) for c in self.checks + self.claims] + [30]) + 2
        lines = [f"Verification report: {self.name}", "-" * (width + 12)]
        for check in self.checks:
            lines.append(f"{check.name:<{width}}{check.status.value.upper():>10}")
            if check.witness is not None:
                w = check.witness
                lines.append(f"    witness: {w.element} @ {w.key}: expected {w.expected}, got {w.actual}")
        if self.claims:
            lines.append("-" * (width + 12))
            lines.append("Claims under test")
            for entry in self.claims:
                verdict = "HOLDS" if entry.holds else "DIFFERS"
                lines.append(f"{entry.name:<{width}}{verdict:>10}")
        if include_timings and self.timings:
            lines.append("-" * (width + 12))
            for key, seconds in sorted(self.timings.items()):
                lines.append(f"{key:<{width}}{seconds:>9.3f}s")
        lines.append("-" * (width + 12))
        lines.append(f"Overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"
