from __future__ import annotations

import csv
import io
import json
import unittest

import numpy as np

from ailca.adapters.factors_json import JsonFactorRepository
from ailca.adapters.report_json import load_report
from ailca.adapters.scenario_json import JsonScenarioRepository
from ailca.benefit import decompose, with_verdicts
from ailca.config import BUNDLED_DATA_DIR, DEFAULT_FACTORS_PATH
from ailca.core.errors import ScenarioSchemaError
from ailca.core.registry import EmitterRegistry
from ailca.engine import CharacterizationTable, ImpactCategory
from ailca.pipeline import AssessmentPipeline
from ailca.reports import (
    CSV_HEADER,
    CsvReportEmitter,
    EmitOptions,
    ReportBundle,
    ReportMeta,
    TextReportEmitter,
    build_default_registry,
    emit_report,
)
from ailca.service_model import coverage_report


def _pipeline(table: CharacterizationTable | None = None) -> AssessmentPipeline:
    return AssessmentPipeline(table or JsonFactorRepository().load(str(DEFAULT_FACTORS_PATH)))


def _load(name: str):
    return JsonScenarioRepository().load(str(BUNDLED_DATA_DIR / name))


def _comparison_bundle() -> ReportBundle:
    pipeline = _pipeline()
    m1_document = _load("smart-building-m1.json")
    m2_document = _load("smart-building-m2.json")
    m1 = pipeline.assess(m1_document)
    m2_prepared = pipeline.prepare(m2_document)
    m2 = pipeline.assess_prepared(m2_prepared)
    return ReportBundle(
        assessments=[m1, m2],
        comparison=with_verdicts(decompose(m2, m1), {"gwp": 1.0}),
        coverage={m2.scenario_id: coverage_report(m2_prepared.scenario)},
        meta=m2_document.meta,
    )


def _csv_rows(report: bytes) -> list[list[str]]:
    return list(csv.reader(io.StringIO(report.decode("utf-8"))))


class CsvReportTests(unittest.TestCase):
    def test_heater_with_single_category(self) -> None:
        table = CharacterizationTable(
            categories=(ImpactCategory("gwp", "Global warming", "kg CO2e"),),
            factors={("gwp", "co2"): 1.0},
        )
        result = _pipeline(table).assess(_load("smart-building-m1.json"))

        rows = _csv_rows(CsvReportEmitter().emit(ReportBundle(assessments=[result])))

        self.assertEqual(rows[0], list(CSV_HEADER))
        self.assertEqual(rows[1:], [["smart-building-m1", "heater", "C_Use", "", "gwp", "kg CO2e", "600.0"]])

    def test_one_row_per_process_and_category(self) -> None:
        bundle = _comparison_bundle()

        rows = _csv_rows(CsvReportEmitter().emit(bundle))

        expected = sum(len(item.by_process) * len(item.categories) for item in bundle.assessments)
        self.assertEqual(len(rows) - 1, expected)

    def test_nonzero_only_skips_zero_contributions(self) -> None:
        bundle = _comparison_bundle()

        rows = _csv_rows(CsvReportEmitter().emit(bundle, EmitOptions(nonzero_only=True)))

        self.assertTrue(rows[1:])
        self.assertTrue(all(float(row[-1]) != 0.0 for row in rows[1:]))


class JsonReportTests(unittest.TestCase):
    def test_comparison_keys(self) -> None:
        payload = json.loads(emit_report(_comparison_bundle(), "json"))

        self.assertEqual(sorted(payload), ["assessments", "comparison", "coverage", "findings", "meta"])
        comparison = payload["comparison"]
        for key in ("delta", "lca_ai", "s_term", "e_term", "o_term", "use_share", "verdicts"):
            self.assertIn(key, comparison)
        self.assertEqual(comparison["verdicts"]["gwp"], "Beneficial")
        self.assertAlmostEqual(comparison["delta"]["gwp"], -80.0, places=6)
        self.assertEqual(payload["meta"]["evaluation_category"], "f")

    def test_saved_report_reloads_identically(self) -> None:
        bundle = _comparison_bundle()
        first = emit_report(bundle, "json")

        reloaded = load_report(first)

        self.assertEqual(emit_report(reloaded, "json"), first)
        self.assertEqual(emit_report(reloaded, "text"), emit_report(bundle, "text"))

    def test_report_loader_rejects_other_documents(self) -> None:
        with self.assertRaises(ScenarioSchemaError):
            load_report(b'{"assessments": [{"scenario_id": "x"}]}')


class TextReportTests(unittest.TestCase):
    def test_sections(self) -> None:
        text = emit_report(_comparison_bundle(), "text").decode("utf-8")

        self.assertIn("Evaluation category: (f) Comprehensive evaluation comparing life cycle assessments", text)
        self.assertIn("== Scenario smart-building-m2 ==", text)
        self.assertIn("First-order impacts (AI service)", text)
        self.assertIn("Second-order net change (delta)", text)
        self.assertIn("Stage coverage:", text)
        self.assertIn("Beneficial", text)

    def test_stage_rows_sum_to_totals(self) -> None:
        for assessment in _comparison_bundle().assessments:
            rows = TextReportEmitter.stage_rows(assessment)
            np.testing.assert_allclose(sum(values for _, values in rows), assessment.totals, rtol=1e-12, atol=1e-12)

    def test_findings_are_listed(self) -> None:
        result = _pipeline().assess(_load("fr-cpu-datacenter.json"))

        text = TextReportEmitter().emit(ReportBundle(assessments=[result])).decode("utf-8")

        self.assertIn("WARNING EndOfLifeDataGap [cpu-server]", text)

    def test_untiered_processes_are_named(self) -> None:
        result = _pipeline().assess(_load("fr-cpu-datacenter.json"))

        text = TextReportEmitter().emit(ReportBundle(assessments=[result])).decode("utf-8")

        gwp = result.category_ids.index("gwp")
        self.assertAlmostEqual(float(result.by_tier["Unassigned"][gwp]), 0.27, places=9)
        untiered = [line for line in text.splitlines() if line.startswith("Unassigned: processes without a tier")]
        self.assertEqual(len(untiered), 1)
        self.assertIn("grid-fr", untiered[0])


class RegistryTests(unittest.TestCase):
    def test_builtin_formats(self) -> None:
        self.assertEqual(build_default_registry().registered_formats(), ("csv", "json", "text"))

    def test_duplicate_format_is_rejected(self) -> None:
        registry = EmitterRegistry()
        registry.register(CsvReportEmitter())

        with self.assertRaises(ValueError):
            registry.register(CsvReportEmitter())

    def test_unknown_format_lists_known(self) -> None:
        with self.assertRaises(KeyError) as ctx:
            build_default_registry().get("xml")
        self.assertIn("Known: csv, json, text", str(ctx.exception))

    def test_format_follows_output_suffix(self) -> None:
        registry = build_default_registry()

        self.assertEqual(registry.resolve(None, "out/report.CSV").format_name, "csv")
        self.assertEqual(registry.resolve(None, "out/report.json").format_name, "json")
        self.assertEqual(registry.resolve(None, "out/report.log").format_name, "text")
        self.assertEqual(registry.resolve(None, None).format_name, "text")
        self.assertEqual(registry.resolve("json", "out/report.csv").format_name, "json")
        self.assertIsNone(registry.format_for_path("report"))

    def test_duplicate_suffix_is_rejected(self) -> None:
        class TsvEmitter(CsvReportEmitter):
            format_name = "tsv"

        registry = EmitterRegistry()
        registry.register(CsvReportEmitter())

        with self.assertRaises(ValueError) as ctx:
            registry.register(TsvEmitter())
        self.assertIn("'.csv'", str(ctx.exception))


class ReportMetaTests(unittest.TestCase):
    def test_label(self) -> None:
        self.assertEqual(ReportMeta("d").label, "Energy gain evaluated without the AI service")

    def test_unknown_category_is_rejected(self) -> None:
        with self.assertRaises(ValueError):
            ReportMeta("g")


if __name__ == "__main__":
    unittest.main()
