"""Pass/fail reports shared by the verifiers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    name: str
    passed: bool
    violations: list[dict] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)
    certified: bool = True

    def fail(self, kind: str, **witness) -> None:
        self.passed = False
        self.violations.append({"kind": kind, **witness})

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def summary(self) -> str:
        head = f"{self.name}: {self.status}"
        if self.violations:
            v = self.violations[0]
            head += f" ({len(self.violations)} violation(s); first: {v})"
        return head

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "certified": self.certified,
            "violations": self.violations,
            "details": self.details,
        }
