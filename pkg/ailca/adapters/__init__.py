from .factors_json import JsonFactorRepository, parse_factors_file
from .report_json import load_report
from .scenario_json import JsonScenarioRepository, ScenarioDocument, dump_scenario, json_pointer, parse_scenario_file

__all__ = [
    "JsonFactorRepository",
    "JsonScenarioRepository",
    "ScenarioDocument",
    "dump_scenario",
    "json_pointer",
    "load_report",
    "parse_factors_file",
    "parse_scenario_file",
]
