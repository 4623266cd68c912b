from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..benefit import ComparisonResult
from ..engine import UNASSIGNED_TIER, AssessmentResult
from ..service_model.coverage import CoverageEntry
from .base import BaseReportEmitter, EmitOptions, ReportBundle


class TextReportEmitter(BaseReportEmitter):
    format_name = "text"
    file_suffix = ".txt"

    def emit(self, bundle: ReportBundle, options: EmitOptions | None = None) -> bytes:
        lines: list[str] = ["AI service life cycle assessment"]
        if bundle.meta is not None:
            lines.append(f"Evaluation category: ({bundle.meta.evaluation_category}) {bundle.meta.label}")
            if bundle.meta.notes:
                lines.append(f"Notes: {bundle.meta.notes}")

        for assessment in bundle.assessments:
            lines.append("")
            lines.extend(self._assessment_lines(assessment))
            entries = bundle.coverage.get(assessment.scenario_id)
            if entries:
                lines.append("")
                lines.extend(self._coverage_lines(entries))

        if bundle.comparison is not None:
            lines.append("")
            lines.extend(self._comparison_lines(bundle.comparison))

        findings = bundle.all_findings()
        if findings:
            lines.append("")
            lines.append("Findings:")
            for finding in findings:
                subject = f" [{finding.subject}]" if finding.subject else ""
                lines.append(f"  {finding.severity.value.upper()} {finding.code}{subject}: {finding.message}")

        return ("\n".join(lines) + "\n").encode("utf-8")

    def _assessment_lines(self, assessment: AssessmentResult) -> list[str]:
        headers = ["", *(f"{item.id} [{item.unit}]" for item in assessment.categories)]
        lines = [f"== Scenario {assessment.scenario_id} =="]

        rows = [[stage, *self._numbers(values)] for stage, values in self.stage_rows(assessment)]
        rows.append(["Total", *self._numbers(assessment.totals)])
        lines.extend(_table(["Stage", *headers[1:]], rows))

        lines.append("")
        tier_rows = [[tier, *self._numbers(values)] for tier, values in assessment.by_tier.items()]
        lines.extend(_table(["Tier", *headers[1:]], tier_rows))
        untiered = sorted(process_id for process_id, tier in assessment.process_tier.items() if tier is None)
        if untiered:
            # Use-phase grid electricity lands here.
            lines.append(f"{UNASSIGNED_TIER}: processes without a tier ({', '.join(untiered)})")

        lines.append("")
        lines.extend(_table(headers, [["First-order impacts (AI service)", *self._numbers(assessment.ai_subtotal)]]))
        return lines

    @staticmethod
    def _coverage_lines(entries: Sequence[CoverageEntry]) -> list[str]:
        rows = [
            [entry.status.value, entry.obligation.value, entry.row, entry.label]
            for entry in entries
        ]
        return ["Stage coverage:", *_table(["Status", "Obligation", "Row", "Label"], rows)]

    def _comparison_lines(self, comparison: ComparisonResult) -> list[str]:
        lines = [f"== Comparison {comparison.m2_id} (with AI) vs {comparison.m1_id} (reference) =="]
        terms = (
            ("Second-order net change (delta)", comparison.delta),
            ("First-order impacts (lca_ai)", comparison.lca_ai),
            ("Reference savings (s_term)", comparison.s_term),
            ("AI use phase (e_term)", comparison.e_term),
            ("AI other stages (o_term)", comparison.o_term),
            ("Use-phase share of lca_ai", comparison.use_share()),
        )
        headers = ["Term", *(f"{item.id} [{item.unit}]" for item in comparison.categories)]
        rows = [[label, *self._numbers(values)] for label, values in terms]
        verdicts = [
            comparison.verdicts[category_id].value if category_id in comparison.verdicts else "-"
            for category_id in comparison.category_ids
        ]
        rows.append(["Verdict", *verdicts])
        lines.extend(_table(headers, rows))
        return lines

    def _numbers(self, values: np.ndarray) -> list[str]:
        return [self.format_number(value) for value in values]


def _table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    widths = [len(header) for header in headers]
    for row in rows:
        for index, cell in enumerate(row):
            widths[index] = max(widths[index], len(cell))

    def _line(cells: Sequence[str]) -> str:
        return "  ".join(cell.ljust(widths[index]) for index, cell in enumerate(cells)).rstrip()

    return [_line(headers), _line(["-" * width for width in widths]), *(_line(row) for row in rows)]
