from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..benefit import ComparisonResult
from ..core.models import Finding, StageId
from ..engine import AssessmentResult
from ..service_model.coverage import CoverageEntry

# How thoroughly a study evaluates the environmental gain of an AI service.
EVALUATION_CATEGORIES: dict[str, str] = {
    "a": "No mention of the environmental gain",
    "b": "General mention of the environmental gain",
    "c": "A few words or an indirect estimate of the gain",
    "d": "Energy gain evaluated without the AI service",
    "e": "Energy gain evaluated with the AI service use phase",
    "f": "Comprehensive evaluation comparing life cycle assessments",
}


@dataclass(frozen=True, slots=True)
class ReportMeta:
    evaluation_category: str
    notes: str = ""

    def __post_init__(self) -> None:
        if self.evaluation_category not in EVALUATION_CATEGORIES:
            known = ", ".join(sorted(EVALUATION_CATEGORIES))
            raise ValueError(f"evaluation_category must be one of {known}, got {self.evaluation_category!r}")

    @property
    def label(self) -> str:
        return EVALUATION_CATEGORIES[self.evaluation_category]

    def to_dict(self) -> dict[str, Any]:
        return {
            "evaluation_category": self.evaluation_category,
            "label": self.label,
            "notes": self.notes,
        }


@dataclass(slots=True)
class ReportBundle:
    """Everything one command produced; emitters render it without recomputing."""

    assessments: list[AssessmentResult] = field(default_factory=list)
    comparison: ComparisonResult | None = None
    coverage: dict[str, list[CoverageEntry]] = field(default_factory=dict)
    findings: list[Finding] = field(default_factory=list)
    meta: ReportMeta | None = None

    def all_findings(self) -> list[Finding]:
        out = list(self.findings)
        for assessment in self.assessments:
            out.extend(assessment.findings)
        return out


@dataclass(frozen=True, slots=True)
class EmitOptions:
    nonzero_only: bool = False


class BaseReportEmitter(ABC):
    format_name: str
    file_suffix: str = ""

    @abstractmethod
    def emit(self, bundle: ReportBundle, options: EmitOptions | None = None) -> bytes:
        raise NotImplementedError

    @staticmethod
    def format_number(value: float) -> str:
        """Shortest decimal that reads back to the same float."""
        number = float(value)
        if number == 0:
            return "0.0"
        return repr(number)

    @staticmethod
    def stage_rows(assessment: AssessmentResult) -> list[tuple[str, np.ndarray]]:
        return [(stage.value, assessment.by_stage[stage.value]) for stage in StageId]
