from __future__ import annotations

import os
import unittest
from unittest.mock import patch

import numpy as np

from ailca.config import DEFAULT_FACTORS_PATH, EngineSettings, settings_from_env
from ailca.core.errors import SingularSystemError
from ailca.core.inventory import build_scenario
from ailca.core.models import (
    Direction,
    FlowKind,
    FlowSpec,
    FunctionalUnit,
    LifeCycleStage,
    StageId,
    SubProcess,
    Tier,
    UnitProcess,
)
from ailca.engine import CharacterizationTable, ImpactCategory, assess, characterize, solve_scaling


_GWP = ImpactCategory("gwp", "Global warming", "kg CO2e")
_ADP = ImpactCategory("adp", "Abiotic depletion", "kg Sb-eq")
_TABLE = CharacterizationTable(
    categories=(_GWP, _ADP),
    factors={("gwp", "co2"): 1.0, ("gwp", "ch4"): 28.0, ("adp", "antimony"): 1.0},
)
_FLOWS = [
    FlowSpec("kwh", "Electricity", FlowKind.ECONOMIC, "kWh"),
    FlowSpec("server-hour", "Server hour", FlowKind.ECONOMIC, "h"),
    FlowSpec("co2", "Carbon dioxide", FlowKind.ENVIRONMENTAL, "kg", Direction.EMISSION),
    FlowSpec("antimony", "Antimony", FlowKind.ENVIRONMENTAL, "kg", Direction.EXTRACTION),
]


def _loop_scenario(quantity: float = 10.0):
    processes = [
        UnitProcess(
            id="Elec",
            name="Electricity",
            stage=LifeCycleStage(StageId.C_USE, SubProcess.ICT_EQUIPMENT_USE),
            economic_exchanges={"kwh": 1.0, "server-hour": -0.01},
            environmental_exchanges={"co2": 0.1},
            tier=Tier.DATA_CENTER,
            ai_tagged=True,
        ),
        UnitProcess(
            id="DCops",
            name="Data center operation",
            stage=LifeCycleStage(StageId.B_PRODUCTION, SubProcess.DEVICE_PRODUCTION_ASSEMBLY),
            economic_exchanges={"server-hour": 1.0, "kwh": -2.0},
            environmental_exchanges={"antimony": 0.001},
        ),
    ]
    return build_scenario(_FLOWS, processes, FunctionalUnit("server-hour", quantity), scenario_id="loop")


def _heater_scenario():
    flows = [
        FlowSpec("heat-m2-year", "Heating", FlowKind.ECONOMIC, "m2-year"),
        FlowSpec("co2", "Carbon dioxide", FlowKind.ENVIRONMENTAL, "kg", Direction.EMISSION),
    ]
    heater = UnitProcess(
        id="heater",
        name="Heater",
        stage=LifeCycleStage(StageId.C_USE),
        economic_exchanges={"heat-m2-year": 1.0},
        environmental_exchanges={"co2": 600.0},
    )
    return build_scenario(flows, [heater], FunctionalUnit("heat-m2-year", 1.0), scenario_id="heater")


class SolveScalingTests(unittest.TestCase):
    def test_identity(self) -> None:
        solution = solve_scaling(np.array([[1.0]]), np.array([1.0]))

        np.testing.assert_allclose(solution.scaling, [1.0])
        self.assertEqual(solution.findings, ())

    def test_loop(self) -> None:
        solution = solve_scaling(np.array([[1.0, -2.0], [-0.01, 1.0]]), np.array([0.0, 10.0]))

        self.assertAlmostEqual(solution.scaling[0], 20.40816, places=5)
        self.assertAlmostEqual(solution.scaling[1], 10.20408, places=5)
        self.assertLessEqual(solution.residual, 1e-9)

    def test_singular_matrix_is_rejected(self) -> None:
        with self.assertRaises(SingularSystemError):
            solve_scaling(np.array([[1.0, -1.0], [1.0, -1.0]]), np.array([1.0, 0.0]))

    def test_ill_conditioned_matrix_warns(self) -> None:
        solution = solve_scaling(np.array([[1.0, 0.0], [0.0, 1e-14]]), np.array([1.0, 1e-14]))

        np.testing.assert_allclose(solution.scaling, [1.0, 1.0])
        self.assertEqual([finding.code for finding in solution.findings], ["IllConditioned"])

    def test_condition_cap_comes_from_settings(self) -> None:
        solution = solve_scaling(
            np.array([[1.0, 0.0], [0.0, 1e-3]]),
            np.array([1.0, 1.0]),
            settings=EngineSettings(condition_cap=10.0),
        )

        self.assertEqual([finding.code for finding in solution.findings], ["IllConditioned"])


class CharacterizeTests(unittest.TestCase):
    def test_single_flow(self) -> None:
        np.testing.assert_allclose(characterize(_TABLE, {"co2": 5.0}).impacts, [5.0, 0.0])

    def test_weighted_sum(self) -> None:
        np.testing.assert_allclose(characterize(_TABLE, {"co2": 2.0, "ch4": 1.0}).impacts, [30.0, 0.0])

    def test_empty_inventory(self) -> None:
        np.testing.assert_array_equal(characterize(_TABLE, {}).impacts, [0.0, 0.0])

    def test_unknown_flow_warns(self) -> None:
        result = characterize(_TABLE, {"co2": 1.0, "sf6": 2.0})

        np.testing.assert_allclose(result.impacts, [1.0, 0.0])
        self.assertEqual([finding.subject for finding in result.findings], ["sf6"])

    def test_table_rejects_unknown_category(self) -> None:
        with self.assertRaises(ValueError):
            CharacterizationTable(categories=(_GWP,), factors={("water", "water"): 1.0})


class AssessTests(unittest.TestCase):
    def test_heater(self) -> None:
        result = assess(_heater_scenario(), _TABLE)

        self.assertEqual(result.total("gwp"), 600.0)
        self.assertEqual(result.stage_total("C_Use", "gwp"), 600.0)
        self.assertEqual(result.stage_total("D_EndOfLife", "gwp"), 0.0)
        self.assertEqual(result.scaling, {"heater": 1.0})

    def test_loop(self) -> None:
        result = assess(_loop_scenario(), _TABLE)

        self.assertAlmostEqual(result.total("gwp"), 2.0408163, places=6)
        self.assertAlmostEqual(result.scaling["Elec"], 20.40816, places=5)

    def test_extraction_impact_is_positive(self) -> None:
        result = assess(_loop_scenario(), _TABLE)

        self.assertAlmostEqual(result.total("adp"), 0.001 * 10.20408163, places=9)
        self.assertGreater(result.total("adp"), 0.0)

    def test_functional_unit_scales_linearly(self) -> None:
        single = assess(_loop_scenario(10.0), _TABLE)
        double = assess(_loop_scenario(20.0), _TABLE)

        np.testing.assert_allclose(double.totals, 2.0 * single.totals, rtol=1e-12)

    def test_breakdowns_sum_to_totals(self) -> None:
        result = assess(_loop_scenario(), _TABLE)

        for breakdown in (result.by_process, result.by_stage, result.by_tier):
            np.testing.assert_allclose(sum(breakdown.values()), result.totals, rtol=1e-12, atol=1e-15)
        self.assertEqual(sorted(result.by_stage), ["A_RawMaterial", "B_Production", "C_Use", "D_EndOfLife"])
        self.assertIn("Unassigned", result.by_tier)

    def test_ai_subtotal_tracks_tagged_processes(self) -> None:
        result = assess(_loop_scenario(), _TABLE)

        self.assertEqual(result.ai_processes, frozenset({"Elec"}))
        np.testing.assert_allclose(result.ai_subtotal, result.by_process["Elec"])

    def test_unknown_flow_is_reported_on_result(self) -> None:
        table = CharacterizationTable(categories=(_GWP,), factors={("gwp", "ch4"): 28.0})

        result = assess(_heater_scenario(), table)

        self.assertEqual(result.total("gwp"), 0.0)
        self.assertEqual([finding.code for finding in result.findings], ["UnknownFlow"])


class SettingsTests(unittest.TestCase):
    def test_defaults(self) -> None:
        with patch.dict(os.environ, {}, clear=True):
            settings = settings_from_env()

        self.assertEqual(settings.condition_cap, 1e12)
        self.assertEqual(settings.residual_tolerance, 1e-9)
        self.assertEqual(settings.max_workers, 2)
        self.assertEqual(settings.resolved_factors_path(), DEFAULT_FACTORS_PATH)

    def test_environment_overrides(self) -> None:
        env = {
            "AILCA_CONDITION_CAP": "1e6",
            "AILCA_RESIDUAL_TOLERANCE": "1e-6",
            "AILCA_FACTORS": "/tmp/factors.json",
            "AILCA_MAX_WORKERS": "1",
        }
        with patch.dict(os.environ, env, clear=True):
            settings = settings_from_env()

        self.assertEqual(settings.condition_cap, 1e6)
        self.assertEqual(settings.residual_tolerance, 1e-6)
        self.assertEqual(str(settings.resolved_factors_path()), "/tmp/factors.json")
        self.assertEqual(settings.max_workers, 1)

    def test_malformed_values_fall_back(self) -> None:
        env = {"AILCA_CONDITION_CAP": "lots", "AILCA_RESIDUAL_TOLERANCE": "-1", "AILCA_MAX_WORKERS": "many"}
        with patch.dict(os.environ, env, clear=True):
            settings = settings_from_env()

        self.assertEqual(settings.condition_cap, 1e12)
        self.assertEqual(settings.residual_tolerance, 1e-9)
        self.assertEqual(settings.max_workers, 2)


if __name__ == "__main__":
    unittest.main()
