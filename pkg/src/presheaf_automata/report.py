"""Validation reports: diagnostics are data, not exceptions."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple

    def __str__(self):
        return f"{self.kind}{self.witness}"


@dataclass
class ValidationReport:
    """A list of violated axioms.  Empty report means the object is valid."""

    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, *witness) -> None:
        self.violations.append(Violation(kind, tuple(witness)))

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __str__(self):
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)
