from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from typing import Any

import numpy as np

from ..benefit import ComparisonResult
from ..engine import AssessmentResult, ImpactCategory
from .base import BaseReportEmitter, EmitOptions, ReportBundle


class JsonReportEmitter(BaseReportEmitter):
    format_name = "json"
    file_suffix = ".json"

    def emit(self, bundle: ReportBundle, options: EmitOptions | None = None) -> bytes:
        text = json.dumps(bundle_to_dict(bundle), indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False)
        return (text + "\n").encode("utf-8")


def bundle_to_dict(bundle: ReportBundle) -> dict[str, Any]:
    return {
        "meta": None if bundle.meta is None else bundle.meta.to_dict(),
        "assessments": [assessment_to_dict(item) for item in bundle.assessments],
        "comparison": None if bundle.comparison is None else comparison_to_dict(bundle.comparison),
        "coverage": {
            scenario_id: [entry.to_dict() for entry in entries]
            for scenario_id, entries in bundle.coverage.items()
        },
        "findings": [finding.to_dict() for finding in bundle.findings],
    }


def assessment_to_dict(result: AssessmentResult) -> dict[str, Any]:
    categories = result.categories
    return {
        "scenario_id": result.scenario_id,
        "categories": _categories(categories),
        "totals": _per_category(categories, result.totals),
        "ai_subtotal": _per_category(categories, result.ai_subtotal),
        "by_stage": _grid(categories, result.by_stage),
        "by_tier": _grid(categories, result.by_tier),
        "by_process": _grid(categories, result.by_process),
        "processes": {
            process_id: {
                "stage": result.process_stage.get(process_id),
                "sub_process": result.process_sub_process.get(process_id),
                "tier": result.process_tier.get(process_id),
                "ai_tagged": process_id in result.ai_processes,
            }
            for process_id in result.by_process
        },
        "scaling": {process_id: float(value) for process_id, value in result.scaling.items()},
        "findings": [finding.to_dict() for finding in result.findings],
    }


def comparison_to_dict(comparison: ComparisonResult) -> dict[str, Any]:
    categories = comparison.categories
    return {
        "m2_id": comparison.m2_id,
        "m1_id": comparison.m1_id,
        "categories": _categories(categories),
        "delta": _per_category(categories, comparison.delta),
        "lca_ai": _per_category(categories, comparison.lca_ai),
        "s_term": _per_category(categories, comparison.s_term),
        "e_term": _per_category(categories, comparison.e_term),
        "o_term": _per_category(categories, comparison.o_term),
        "use_share": _per_category(categories, comparison.use_share()),
        "verdicts": {category_id: value.value for category_id, value in comparison.verdicts.items()},
    }


def _categories(categories: Sequence[ImpactCategory]) -> list[dict[str, str]]:
    return [{"id": item.id, "name": item.name, "unit": item.unit} for item in categories]


def _per_category(categories: Sequence[ImpactCategory], values: np.ndarray) -> dict[str, float]:
    return {category.id: float(values[index]) for index, category in enumerate(categories)}


def _grid(categories: Sequence[ImpactCategory], rows: Mapping[str, np.ndarray]) -> dict[str, dict[str, float]]:
    return {key: _per_category(categories, values) for key, values in rows.items()}
