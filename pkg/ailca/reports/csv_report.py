from __future__ import annotations

import csv
import io

from .base import BaseReportEmitter, EmitOptions, ReportBundle

CSV_HEADER = ("scenario", "process", "stage", "tier", "category", "unit", "value")


class CsvReportEmitter(BaseReportEmitter):
    """One row per (scenario, process, category) contribution."""

    format_name = "csv"
    file_suffix = ".csv"

    def emit(self, bundle: ReportBundle, options: EmitOptions | None = None) -> bytes:
        options = options or EmitOptions()
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for assessment in bundle.assessments:
            for process_id, values in assessment.by_process.items():
                for index, category in enumerate(assessment.categories):
                    value = float(values[index])
                    if options.nonzero_only and value == 0:
                        continue
                    writer.writerow(
                        (
                            assessment.scenario_id,
                            process_id,
                            assessment.process_stage.get(process_id, ""),
                            assessment.process_tier.get(process_id) or "",
                            category.id,
                            category.unit,
                            self.format_number(value),
                        )
                    )
        return buffer.getvalue().encode("utf-8")
