"""Theorem verdicts and the hypothesis gate shared by the solvers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import EngineError, HypothesisError
from .properties import PropertyReport, _jsonable


@dataclass
class TheoremReport:
    """Verdict for one theorem on one instance.

    ``points`` holds the constructed selections (as coordinate tuples) and
    ``details`` any further diagnostics; both are JSON-friendly.
    """

    theorem: str
    holds: bool
    hypotheses: list[PropertyReport] = field(default_factory=list)
    witness: dict | None = None
    points: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def hypotheses_hold(self) -> bool:
        return all(h.holds for h in self.hypotheses)

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        out = {
            "theorem": self.theorem,
            "holds": self.holds,
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "points": _jsonable(self.points),
            "details": _jsonable(self.details),
        }
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


def gate(theorem: str, reports: Iterable[PropertyReport], verify: bool) -> list[PropertyReport]:
    """Raise on the first failed hypothesis unless ``verify`` is off."""
    reports = list(reports)
    if verify:
        for r in reports:
            if not r.holds:
                raise HypothesisError(theorem, r)
    return reports


def conclude(report: TheoremReport) -> TheoremReport:
    """A conclusion that fails under verified hypotheses is an engine bug."""
    if not report.holds and report.hypotheses_hold:
        raise EngineError(f"{report.theorem}: conclusion failed under verified hypotheses; witness {report.witness}")
    return report
