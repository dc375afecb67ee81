"""Itemized validation reports shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Violation:
    check: str
    indices: tuple = ()
    monomial: str = ""
    lhs: Any = None
    rhs: Any = None

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "indices": [str(i) for i in self.indices],
            "monomial": self.monomial,
            "lhs": _show(self.lhs),
            "rhs": _show(self.rhs),
        }

    def __str__(self):
        loc = ",".join(str(i) for i in self.indices)
        mono = f" at {self.monomial}" if self.monomial else ""
        return f"{self.check}[{loc}]{mono}: {_show(self.lhs)} != {_show(self.rhs)}"


def _show(x) -> str:
    if x is None:
        return ""
    return str(x)


@dataclass
class ValidationReport:
    """A list of violations; ``passed`` iff the list is empty.

    ``notes`` carry informational findings that never fail a report, and
    ``info`` holds named quantities (dimensions, spectra) for the CLI.
    """

    name: str = ""
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, check: str, indices=(), monomial: str = "", lhs=None, rhs=None) -> None:
        self.violations.append(Violation(check, tuple(indices), monomial, lhs, rhs))

    def extend(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)
        self.notes.extend(other.notes)
        self.info.update(other.info)

    def checks(self) -> set[str]:
        return {v.check for v in self.violations}

    def __bool__(self):
        return self.passed

    def __str__(self):
        head = f"{self.name or 'report'}: {'PASS' if self.passed else 'FAIL'}"
        lines = [head] + [f"  {v}" for v in self.violations] + [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "violations": [v.as_dict() for v in self.violations],
            "notes": list(self.notes),
            "info": self.info,
        }
