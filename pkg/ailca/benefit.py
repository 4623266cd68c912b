from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .core.errors import CategoryMismatchError
from .core.models import StageId
from .engine import AssessmentResult, ImpactCategory


LOGGER = logging.getLogger(__name__)


class Verdict(str, Enum):
    BENEFICIAL = "Beneficial"
    DETRIMENTAL = "Detrimental"
    NEUTRAL = "Neutral"


@dataclass(frozen=True, eq=False, slots=True)
class ComparisonResult:
    """
    Net change of the AI-enhanced application (m2) against its reference (m1).
    Per category: -delta == s_term - e_term - o_term and lca_ai == e_term + o_term.
    """

    m2_id: str
    m1_id: str
    categories: tuple[ImpactCategory, ...]
    delta: np.ndarray
    lca_ai: np.ndarray
    s_term: np.ndarray
    e_term: np.ndarray
    o_term: np.ndarray
    verdicts: Mapping[str, Verdict] = field(default_factory=dict)

    @property
    def category_ids(self) -> tuple[str, ...]:
        return tuple(category.id for category in self.categories)

    def value(self, term: str, category_id: str) -> float:
        return float(getattr(self, term)[self.category_ids.index(category_id)])

    def use_share(self) -> np.ndarray:
        """Fraction of the AI service footprint an energy-of-use-only estimate captures."""
        out = np.zeros_like(self.lca_ai)
        mask = self.lca_ai != 0
        out[mask] = self.e_term[mask] / self.lca_ai[mask]
        return out


def delta(m2: AssessmentResult, m1: AssessmentResult) -> np.ndarray:
    _check_categories(m2, m1)
    return m2.totals - m1.totals


def ai_subtotal(assessment: AssessmentResult) -> np.ndarray:
    out = np.zeros(len(assessment.categories), dtype=float)
    for process_id in sorted(assessment.ai_processes):
        out = out + assessment.by_process[process_id]
    return out


def decompose(m2: AssessmentResult, m1: AssessmentResult) -> ComparisonResult:
    difference = delta(m2, m1)
    lca_ai = ai_subtotal(m2)

    e_term = np.zeros(len(m2.categories), dtype=float)
    for process_id in sorted(m2.ai_processes):
        if m2.process_stage.get(process_id) == StageId.C_USE.value:
            e_term = e_term + m2.by_process[process_id]
    o_term = lca_ai - e_term
    s_term = m1.totals - (m2.totals - lca_ai)

    LOGGER.info(
        "Comparison decomposed: m2=%s m1=%s categories=%s",
        m2.scenario_id,
        m1.scenario_id,
        ",".join(category.id for category in m2.categories),
    )
    return ComparisonResult(
        m2_id=m2.scenario_id,
        m1_id=m1.scenario_id,
        categories=m2.categories,
        delta=difference,
        lca_ai=lca_ai,
        s_term=s_term,
        e_term=e_term,
        o_term=o_term,
    )


def verdict(
    comparison: ComparisonResult,
    tolerance_per_category: Mapping[str, float] | float = 0.0,
) -> dict[str, Verdict]:
    out: dict[str, Verdict] = {}
    for index, category_id in enumerate(comparison.category_ids):
        if isinstance(tolerance_per_category, Mapping):
            tolerance = float(tolerance_per_category.get(category_id, 0.0))
        else:
            tolerance = float(tolerance_per_category)
        if tolerance < 0:
            raise ValueError(f"Tolerance for '{category_id}' must be >= 0, got {tolerance!r}")

        value = float(comparison.delta[index])
        if value < -tolerance:
            out[category_id] = Verdict.BENEFICIAL
        elif value > tolerance:
            out[category_id] = Verdict.DETRIMENTAL
        else:
            out[category_id] = Verdict.NEUTRAL
    return out


def with_verdicts(
    comparison: ComparisonResult,
    tolerance_per_category: Mapping[str, float] | float = 0.0,
) -> ComparisonResult:
    return replace(comparison, verdicts=verdict(comparison, tolerance_per_category))


def _check_categories(left: AssessmentResult, right: AssessmentResult) -> None:
    if left.category_ids != right.category_ids:
        raise CategoryMismatchError(
            f"Category lists differ: {left.scenario_id}={list(left.category_ids)} "
            f"{right.scenario_id}={list(right.category_ids)}"
        )
