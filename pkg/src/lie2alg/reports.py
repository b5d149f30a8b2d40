from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .exactla import current_field


@dataclass(frozen=True)
class Failure:
    axiom: str
    indices: tuple[int, ...]
    lhs: tuple
    rhs: tuple

    def describe(self) -> str:
        F = current_field()
        fmt = lambda vec: "(" + ", ".join(F.format(x) for x in vec) + ")"
        return f"{self.axiom} at {self.indices}: lhs={fmt(self.lhs)} rhs={fmt(self.rhs)}"

    def as_dict(self) -> dict[str, Any]:
        F = current_field()
        return {
            "axiom": self.axiom,
            "indices": list(self.indices),
            "lhs": [F.format(x) for x in self.lhs],
            "rhs": [F.format(x) for x in self.rhs],
        }


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of an axiom check; ``valid`` iff there are no failures."""

    subject: str
    failures: tuple[Failure, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.valid

    def axioms_failed(self) -> list[str]:
        seen: list[str] = []
        for f in self.failures:
            if f.axiom not in seen:
                seen.append(f.axiom)
        return seen

    def text(self, limit: int = 20) -> str:
        if self.valid:
            return f"{self.subject}: valid"
        lines = [f"{self.subject}: invalid ({len(self.failures)} failing instances)"]
        lines += ["  " + f.describe() for f in self.failures[:limit]]
        if len(self.failures) > limit:
            lines.append(f"  ... {len(self.failures) - limit} more")
        return "\n".join(lines)

    def as_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "valid": self.valid,
            "failures": [f.as_dict() for f in self.failures],
        }


class ReportBuilder:
    def __init__(self, subject: str):
        self.subject = subject
        self._failures: list[Failure] = []

    def add(self, axiom: str, entries) -> None:
        for idx, lhs, rhs in entries:
            self._failures.append(Failure(axiom, tuple(idx), tuple(lhs), tuple(rhs)))

    def fail(self, axiom: str, detail_lhs=(), detail_rhs=(), indices=()) -> None:
        self._failures.append(Failure(axiom, tuple(indices), tuple(detail_lhs), tuple(detail_rhs)))

    def build(self) -> ValidationReport:
        return ValidationReport(self.subject, tuple(self._failures))


FOUND = "found"
LINEAR_OBSTRUCTION = "linear_obstruction"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class SearchResult:
    """Three-valued answer of a 2-cell search.

    ``found`` carries a validated witness; ``linear_obstruction`` proves no
    witness exists; ``unknown`` means the search could not decide.
    """

    status: str
    witness: Any = None
    detail: str = ""

    @property
    def found(self) -> bool:
        return self.status == FOUND

    def __bool__(self) -> bool:
        return self.found
