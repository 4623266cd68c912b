from .coverage import CoverageEntry, CoverageStatus, coverage_findings, coverage_report, covered_rows
from .devices import (
    AITask,
    Device,
    EnergyProfile,
    EnergyUse,
    TaskKind,
    device_flows,
    devices_to_processes,
    end_of_life_gaps,
    energy_use,
)

__all__ = [
    "AITask",
    "CoverageEntry",
    "CoverageStatus",
    "Device",
    "EnergyProfile",
    "EnergyUse",
    "TaskKind",
    "coverage_findings",
    "coverage_report",
    "covered_rows",
    "device_flows",
    "devices_to_processes",
    "end_of_life_gaps",
    "energy_use",
]
