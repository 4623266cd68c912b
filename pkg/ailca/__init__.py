from __future__ import annotations

from .adapters import JsonFactorRepository, JsonScenarioRepository, ScenarioDocument, dump_scenario, load_report, parse_scenario_file
from .benefit import ComparisonResult, Verdict, ai_subtotal, decompose, delta, verdict, with_verdicts
from .compare import CompareJob, CompareOutcome, LcaCompareService, run_compare
from .config import EngineSettings, settings_from_env
from .engine import AssessmentResult, CharacterizationTable, ImpactCategory, assess, characterize, solve_scaling
from .pipeline import AssessmentPipeline
from .reports import ReportBundle, ReportMeta, build_default_registry, emit_report


def build_default_pipeline(settings: EngineSettings | None = None) -> AssessmentPipeline:
    settings = settings or settings_from_env()
    table = JsonFactorRepository().load(str(settings.resolved_factors_path()))
    return AssessmentPipeline(table, settings)


__all__ = [
    "AssessmentPipeline",
    "AssessmentResult",
    "CharacterizationTable",
    "CompareJob",
    "CompareOutcome",
    "ComparisonResult",
    "EngineSettings",
    "ImpactCategory",
    "JsonFactorRepository",
    "JsonScenarioRepository",
    "LcaCompareService",
    "ReportBundle",
    "ReportMeta",
    "ScenarioDocument",
    "Verdict",
    "ai_subtotal",
    "assess",
    "build_default_pipeline",
    "build_default_registry",
    "characterize",
    "decompose",
    "delta",
    "dump_scenario",
    "emit_report",
    "load_report",
    "parse_scenario_file",
    "run_compare",
    "settings_from_env",
    "solve_scaling",
    "verdict",
    "with_verdicts",
]
