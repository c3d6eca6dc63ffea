"""Verification reports shared by the checking routines and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    check: str
    type: str
    parameters: dict[str, Any] = field(default_factory=dict)
    counterexamples: list[Any] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def fail(self, **info) -> None:
        self.counterexamples.append(info)

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "type": self.type,
            "parameters": self.parameters,
            "passed": self.passed,
            "counterexamples": self.counterexamples,
        }
        if self.details:
            out["details"] = self.details
        return out

    def __str__(self) -> str:
        status = "PASS" if self.passed else f"FAIL ({len(self.counterexamples)} counterexamples)"
        params = ", ".join(f"{k}={v}" for k, v in self.parameters.items())
        return f"{self.check} [{self.type}{': ' + params if params else ''}] {status}"
