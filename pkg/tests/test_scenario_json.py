from __future__ import annotations

import json
import tempfile
import unittest
from pathlib import Path

import numpy as np

from ailca.adapters.factors_json import JsonFactorRepository, parse_factors_file
from ailca.adapters.scenario_json import JsonScenarioRepository, dump_scenario, json_pointer, parse_scenario_file
from ailca.config import BUNDLED_DATA_DIR, DEFAULT_FACTORS_PATH
from ailca.core.allocation import KeyKind
from ailca.core.errors import ScenarioFileError, ScenarioSchemaError, ScenarioSyntaxError
from ailca.core.inventory import matrices
from ailca.engine import CharacterizationTable
from ailca.pipeline import AssessmentPipeline


_M2_PATH = BUNDLED_DATA_DIR / "smart-building-m2.json"


def _minimal_payload() -> dict:
    return {
        "id": "edge",
        "flows": [
            {"id": "service", "kind": "Economic", "unit": "run"},
            {"id": "kwh", "kind": "Economic", "unit": "kWh"},
            {"id": "co2", "kind": "Environmental", "unit": "kg", "direction": "Emission"},
        ],
        "processes": [
            {"id": "grid", "stage": "C_Use", "economic": {"kwh": 1.0}, "environmental": {"co2": 0.1}},
        ],
        "devices": [
            {"id": "edge-box", "tier": "Terminal", "lifetime": 1000, "power_active": 2.0, "power_idle": 1.0},
        ],
        "tasks": [
            {"id": "infer", "kind": "Inference", "devices": ["edge-box"], "profile": {"duration": 10, "grid_flow": "kwh"}},
        ],
        "functional_unit": {"reference_flow": "task:infer", "quantity": 1},
    }


def _encode(payload: dict) -> bytes:
    return json.dumps(payload).encode("utf-8")


class ParseScenarioTests(unittest.TestCase):
    def test_reference_building(self) -> None:
        document = JsonScenarioRepository().load(str(BUNDLED_DATA_DIR / "smart-building-m1.json"))

        self.assertEqual(document.id, "smart-building-m1")
        self.assertEqual([process.id for process in document.processes], ["heater"])
        self.assertEqual(document.functional_unit.description, "heating 1m² to 20°C for one year")
        self.assertFalse(document.has_service_model)
        self.assertEqual(document.meta.evaluation_category, "f")

    def test_service_model_declarations(self) -> None:
        document = JsonScenarioRepository().load(str(_M2_PATH))

        self.assertEqual([device.id for device in document.devices], ["thermostats", "gateway", "server", "hvac"])
        self.assertEqual([task.id for task in document.tasks], ["inference", "training"])
        self.assertEqual(document.grid_process, "grid-electricity")
        self.assertTrue(document.devices[0].dedicated)

    def test_id_defaults_to_file_stem(self) -> None:
        payload = _minimal_payload()
        del payload["id"]

        document = parse_scenario_file(_encode(payload), source="/tmp/edge-case.json")

        self.assertEqual(document.id, "edge-case")

    def test_allocation_and_amortization_blocks(self) -> None:
        payload = _minimal_payload()
        payload["processes"][0]["allocation"] = {"kind": "EqualShare", "n": 4}
        payload["processes"][0]["amortization"] = {"lifetime": 10, "usage": 2, "exclusivity": 0.5}

        document = parse_scenario_file(_encode(payload))

        self.assertIs(document.allocation_keys["grid"].kind, KeyKind.EQUAL_SHARE)
        self.assertEqual(document.allocation_keys["grid"].n, 4)
        self.assertEqual(document.amortizations["grid"].exclusivity, 0.5)


class ScenarioErrorTests(unittest.TestCase):
    def test_negative_idle_power_is_located(self) -> None:
        payload = _minimal_payload()
        payload["devices"][0]["power_idle"] = -5

        with self.assertRaises(ScenarioSchemaError) as ctx:
            parse_scenario_file(_encode(payload))
        self.assertEqual(ctx.exception.path, "/devices/0/power_idle")

    def test_active_below_idle_is_located(self) -> None:
        payload = _minimal_payload()
        payload["devices"][0]["power_active"] = 0.5

        with self.assertRaises(ScenarioSchemaError) as ctx:
            parse_scenario_file(_encode(payload))
        self.assertEqual(ctx.exception.path, "/devices/0/power_active")

    def test_sub_process_outside_stage_is_located(self) -> None:
        payload = _minimal_payload()
        payload["processes"][0]["sub_process"] = "ReusePreparation"

        with self.assertRaises(ScenarioSchemaError) as ctx:
            parse_scenario_file(_encode(payload))
        self.assertEqual(ctx.exception.path, "/processes/0/sub_process")

    def test_usage_beyond_lifetime_is_located(self) -> None:
        payload = _minimal_payload()
        payload["processes"][0]["amortization"] = {"lifetime": 10, "usage": 20}

        with self.assertRaises(ScenarioSchemaError) as ctx:
            parse_scenario_file(_encode(payload))
        self.assertEqual(ctx.exception.path, "/processes/0/amortization/usage")

    def test_empty_file_is_a_syntax_error(self) -> None:
        with self.assertRaises(ScenarioSyntaxError) as ctx:
            parse_scenario_file(b"")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (1, 1))

    def test_syntax_error_reports_line(self) -> None:
        with self.assertRaises(ScenarioSyntaxError) as ctx:
            parse_scenario_file(b'{\n  "flows": [],\n  "processes": [,]\n}')
        self.assertEqual(ctx.exception.line, 3)

    def test_non_finite_numbers_are_rejected(self) -> None:
        with self.assertRaises(ScenarioSyntaxError):
            parse_scenario_file(b'{"flows": [], "processes": [], "functional_unit": {"reference_flow": "a", "quantity": NaN}}')

    def test_top_level_must_be_an_object(self) -> None:
        with self.assertRaises(ScenarioSchemaError) as ctx:
            parse_scenario_file(b"[]")
        self.assertEqual(ctx.exception.path, "/")

    def test_unknown_key_fails_strict_and_warns_lenient(self) -> None:
        payload = _minimal_payload()
        payload["processes"][0]["colour"] = "green"

        with self.assertRaises(ScenarioSchemaError) as ctx:
            parse_scenario_file(_encode(payload))
        self.assertEqual(ctx.exception.path, "/processes/0/colour")

        document = parse_scenario_file(_encode(payload), lenient=True)
        self.assertEqual(document.warnings, ("/processes/0/colour: unknown key ignored",))

    def test_missing_file(self) -> None:
        with self.assertRaises(ScenarioFileError):
            JsonScenarioRepository().load("/nonexistent/scenario.json")

    def test_json_pointer_escapes(self) -> None:
        self.assertEqual(json_pointer([]), "/")
        self.assertEqual(json_pointer(["meta", "a/b~c"]), "/meta/a~1b~0c")


class DumpScenarioTests(unittest.TestCase):
    def test_round_trip_reproduces_matrices(self) -> None:
        document = JsonScenarioRepository().load(str(_M2_PATH))
        scenario = AssessmentPipeline(CharacterizationTable(categories=())).prepare(document).scenario

        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "expanded.json"
            path.write_bytes(dump_scenario(scenario, meta=document.meta))
            reloaded_document = JsonScenarioRepository().load(str(path))
        reloaded = AssessmentPipeline(CharacterizationTable(categories=())).prepare(reloaded_document).scenario

        original = matrices(scenario)
        again = matrices(reloaded)
        self.assertEqual(again.economic_flow_ids, original.economic_flow_ids)
        self.assertEqual(again.environmental_flow_ids, original.environmental_flow_ids)
        self.assertEqual(again.process_ids, original.process_ids)
        np.testing.assert_array_equal(again.technosphere.toarray(), original.technosphere.toarray())
        np.testing.assert_array_equal(again.intervention.toarray(), original.intervention.toarray())
        np.testing.assert_array_equal(again.demand, original.demand)
        self.assertEqual(reloaded_document.meta, document.meta)
        self.assertFalse(reloaded_document.has_service_model)

    def test_dump_is_deterministic(self) -> None:
        document = JsonScenarioRepository().load(str(_M2_PATH))
        scenario = AssessmentPipeline(CharacterizationTable(categories=())).prepare(document).scenario

        again = AssessmentPipeline(CharacterizationTable(categories=())).prepare(document).scenario

        self.assertEqual(dump_scenario(scenario), dump_scenario(again))


class FactorsFileTests(unittest.TestCase):
    def test_bundled_factors(self) -> None:
        table = JsonFactorRepository().load(str(DEFAULT_FACTORS_PATH))

        self.assertEqual(table.category_ids, ("gwp", "adp", "water", "htox", "biotic"))
        self.assertEqual(table.factor("gwp", "ch4"), 28.0)
        self.assertEqual(table.factor("biotic", "co2"), 0.0)

    def test_undeclared_category_is_located(self) -> None:
        data = json.dumps(
            {
                "categories": [{"id": "gwp", "name": "Global warming", "unit": "kg CO2e"}],
                "factors": {"gwp": {"co2": 1.0}, "water": {"water": 1.0}},
            }
        )

        with self.assertRaises(ScenarioSchemaError) as ctx:
            parse_factors_file(data)
        self.assertEqual(ctx.exception.path, "/factors/water")

    def test_blank_unit_is_a_schema_error(self) -> None:
        data = json.dumps(
            {
                "categories": [{"id": "gwp", "name": "Global warming", "unit": " "}],
                "factors": {"gwp": {"co2": 1.0}},
            }
        )

        with self.assertRaises(ScenarioSchemaError) as ctx:
            parse_factors_file(data)
        self.assertEqual(ctx.exception.path, "/categories/0/unit")


if __name__ == "__main__":
    unittest.main()
