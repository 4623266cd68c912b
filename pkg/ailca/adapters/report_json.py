from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from typing import Any

import numpy as np

from ..benefit import ComparisonResult, Verdict
from ..core.errors import ScenarioSchemaError
from ..core.models import Finding, Obligation, Severity, StageId, SubProcess
from ..engine import AssessmentResult, ImpactCategory
from ..reports.base import ReportBundle, ReportMeta
from ..service_model.coverage import CoverageEntry, CoverageStatus
from .scenario_json import decode_json_document


LOGGER = logging.getLogger(__name__)


def load_report(data: bytes | str) -> ReportBundle:
    """Rebuild a ReportBundle from the json emitter's output."""
    payload = decode_json_document(data)
    try:
        bundle = ReportBundle(
            assessments=[_assessment(item) for item in payload.get("assessments", [])],
            comparison=None if payload.get("comparison") is None else _comparison(payload["comparison"]),
            coverage={
                scenario_id: [_coverage_entry(entry) for entry in entries]
                for scenario_id, entries in payload.get("coverage", {}).items()
            },
            findings=[_finding(item) for item in payload.get("findings", [])],
            meta=None if payload.get("meta") is None else _meta(payload["meta"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioSchemaError(f"not a report document: {exc!r}", path="/") from exc

    LOGGER.info(
        "Report loaded: assessments=%s comparison=%s",
        len(bundle.assessments),
        bundle.comparison is not None,
    )
    return bundle


def _categories(items: Sequence[Mapping[str, Any]]) -> tuple[ImpactCategory, ...]:
    return tuple(ImpactCategory(id=item["id"], name=item["name"], unit=item["unit"]) for item in items)


def _vector(categories: Sequence[ImpactCategory], values: Mapping[str, float]) -> np.ndarray:
    return np.array([float(values[category.id]) for category in categories], dtype=float)


def _grid(categories: Sequence[ImpactCategory], rows: Mapping[str, Mapping[str, float]]) -> dict[str, np.ndarray]:
    return {key: _vector(categories, values) for key, values in rows.items()}


def _assessment(item: Mapping[str, Any]) -> AssessmentResult:
    categories = _categories(item["categories"])
    processes: Mapping[str, Mapping[str, Any]] = item["processes"]
    return AssessmentResult(
        scenario_id=item["scenario_id"],
        categories=categories,
        totals=_vector(categories, item["totals"]),
        by_process=_grid(categories, item["by_process"]),
        by_stage=_grid(categories, item["by_stage"]),
        by_tier=_grid(categories, item["by_tier"]),
        ai_subtotal=_vector(categories, item["ai_subtotal"]),
        scaling={key: float(value) for key, value in item["scaling"].items()},
        process_stage={key: value["stage"] for key, value in processes.items()},
        process_sub_process={key: value["sub_process"] for key, value in processes.items()},
        process_tier={key: value["tier"] for key, value in processes.items()},
        ai_processes=frozenset(key for key, value in processes.items() if value["ai_tagged"]),
        findings=[_finding(finding) for finding in item.get("findings", [])],
    )


def _comparison(item: Mapping[str, Any]) -> ComparisonResult:
    categories = _categories(item["categories"])
    return ComparisonResult(
        m2_id=item["m2_id"],
        m1_id=item["m1_id"],
        categories=categories,
        delta=_vector(categories, item["delta"]),
        lca_ai=_vector(categories, item["lca_ai"]),
        s_term=_vector(categories, item["s_term"]),
        e_term=_vector(categories, item["e_term"]),
        o_term=_vector(categories, item["o_term"]),
        verdicts={key: Verdict(value) for key, value in item.get("verdicts", {}).items()},
    )


def _coverage_entry(item: Mapping[str, Any]) -> CoverageEntry:
    stage_token, _, sub_token = str(item["row"]).partition("/")
    return CoverageEntry(
        stage_id=StageId(stage_token),
        sub_process=SubProcess(sub_token) if sub_token else None,
        label=item["label"],
        obligation=Obligation(item["obligation"]),
        status=CoverageStatus(item["status"]),
        processes=tuple(item.get("processes", ())),
    )


def _finding(item: Mapping[str, Any]) -> Finding:
    return Finding(
        code=item["code"],
        message=item["message"],
        severity=Severity(item.get("severity", Severity.ERROR.value)),
        subject=item.get("subject"),
    )


def _meta(item: Mapping[str, Any]) -> ReportMeta:
    return ReportMeta(evaluation_category=item["evaluation_category"], notes=item.get("notes", ""))
