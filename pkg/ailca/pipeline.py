from __future__ import annotations

import logging
from dataclasses import dataclass

from .adapters.scenario_json import ScenarioDocument
from .config import EngineSettings
from .core.allocation import allocate_scenario
from .core.errors import AllocationError, InventoryError, ServiceModelError, UnknownGridProcessError
from .core.inventory import build_scenario, validate
from .core.models import Finding, Scenario, Severity
from .engine import AssessmentResult, CharacterizationTable, assess
from .service_model.coverage import CoverageEntry, coverage_report
from .service_model.devices import device_flows, devices_to_processes, end_of_life_gaps


LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class PreparedScenario:
    scenario: Scenario
    findings: tuple[Finding, ...] = ()


class AssessmentPipeline:
    """Scenario document -> expanded AI service -> allocated scenario -> assessment."""

    def __init__(self, table: CharacterizationTable, settings: EngineSettings | None = None) -> None:
        self._table = table
        self._settings = settings or EngineSettings()

    @property
    def table(self) -> CharacterizationTable:
        return self._table

    def expand(self, document: ScenarioDocument) -> tuple[Scenario, list[Finding]]:
        """Unvalidated scenario with device processes appended, plus data-gap findings."""
        findings = [
            Finding("UnknownKey", warning, severity=Severity.WARNING, subject=warning.split(":", 1)[0])
            for warning in document.warnings
        ]
        flows = list(document.flows)
        processes = list(document.processes)

        if document.has_service_model:
            grid_process_id = resolve_grid_process(document)
            flows.extend(device_flows(document.tasks, document.devices))
            processes.extend(
                devices_to_processes(
                    document.tasks,
                    document.devices,
                    grid_process_id,
                    known_processes=document.processes,
                )
            )
            findings.extend(end_of_life_gaps(document.tasks, document.devices))

        scenario = Scenario(
            id=document.id,
            label=document.label,
            flows=tuple(flows),
            processes=tuple(processes),
            functional_unit=document.functional_unit,
            metadata=document.metadata,
        )
        return scenario, findings

    def prepare(self, document: ScenarioDocument) -> PreparedScenario:
        expanded, findings = self.expand(document)
        built = build_scenario(
            expanded.flows,
            expanded.processes,
            expanded.functional_unit,
            expanded.metadata,
            scenario_id=expanded.id,
            label=expanded.label,
        )
        allocated = allocate_scenario(built, document.allocation_keys, document.amortizations)
        return PreparedScenario(scenario=allocated, findings=tuple(findings))

    def validate(self, document: ScenarioDocument) -> list[Finding]:
        """Structural findings without raising; allocation is applied when the raw inventory is sound."""
        try:
            expanded, findings = self.expand(document)
        except ServiceModelError as exc:
            return [Finding(_finding_code(exc), str(exc))]

        try:
            built = build_scenario(
                expanded.flows,
                expanded.processes,
                expanded.functional_unit,
                expanded.metadata,
                scenario_id=expanded.id,
                label=expanded.label,
            )
        except InventoryError:
            return [*findings, *validate(expanded)]

        try:
            allocated = allocate_scenario(built, document.allocation_keys, document.amortizations)
        except (AllocationError, InventoryError) as exc:
            return [*findings, Finding(_finding_code(exc), str(exc))]
        return [*findings, *validate(allocated)]

    def coverage(self, document: ScenarioDocument) -> list[CoverageEntry]:
        return coverage_report(self.prepare(document).scenario)

    def assess(self, document: ScenarioDocument) -> AssessmentResult:
        return self.assess_prepared(self.prepare(document))

    def assess_prepared(self, prepared: PreparedScenario) -> AssessmentResult:
        result = assess(prepared.scenario, self._table, settings=self._settings)
        result.findings[:0] = prepared.findings
        LOGGER.debug(
            "Pipeline assessment: scenario=%s processes=%s findings=%s",
            prepared.scenario.id,
            len(prepared.scenario.processes),
            len(result.findings),
        )
        return result


def resolve_grid_process(document: ScenarioDocument) -> str:
    """Declared grid process, else the single declared producer of the tasks' grid flows."""
    if document.grid_process:
        return document.grid_process

    grid_flows = sorted({task.profile.grid_flow for task in document.tasks})
    producers = sorted(
        {process.id for process in document.processes for flow_id in grid_flows if flow_id in process.produced_flows()}
    )
    if len(producers) != 1:
        found = ", ".join(producers) or "<none>"
        raise UnknownGridProcessError(
            f"Cannot infer grid process for flows {', '.join(grid_flows)}: producers {found}; set 'grid_process'"
        )
    LOGGER.debug("Grid process inferred: scenario=%s grid_process=%s", document.id, producers[0])
    return producers[0]


def _finding_code(exc: Exception) -> str:
    return type(exc).__name__.removesuffix("Error")
