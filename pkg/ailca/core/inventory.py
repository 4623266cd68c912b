from __future__ import annotations

import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import sparse

from .errors import (
    DuplicateIdError,
    EmptyProcessSetError,
    FlowKindMismatchError,
    InvalidProcessError,
    InventoryError,
    MultipleProducersError,
    NonSquareSystemError,
    UnitMismatchError,
    UnknownFlowRefError,
)
from .models import Finding, FlowKind, FlowSpec, FunctionalUnit, Scenario, Severity, UnitProcess


LOGGER = logging.getLogger(__name__)

_BUILD_ERRORS: dict[str, type[InventoryError]] = {
    "EmptyProcessSet": EmptyProcessSetError,
    "UnitMismatch": UnitMismatchError,
    "DuplicateId": DuplicateIdError,
    "InvalidFlow": InventoryError,
    "UnknownFlowRef": UnknownFlowRefError,
    "FlowKindMismatch": FlowKindMismatchError,
    "InvalidProcess": InvalidProcessError,
    "InvalidFunctionalUnit": InventoryError,
}


@dataclass(frozen=True, slots=True)
class InventoryMatrices:
    """
    Technosphere A, intervention B and demand f in canonical order.
    Rows of A are economic flows sorted by id; column j of A and B is the
    producer of economic flow j. Rows of B are environmental flows sorted by id.
    """

    technosphere: sparse.csc_matrix
    intervention: sparse.csc_matrix
    demand: np.ndarray
    economic_flow_ids: tuple[str, ...]
    environmental_flow_ids: tuple[str, ...]
    process_ids: tuple[str, ...]

    def __iter__(self) -> Iterator[Any]:
        yield self.technosphere
        yield self.intervention
        yield self.demand


def build_scenario(
    flows: Iterable[FlowSpec],
    processes: Iterable[UnitProcess],
    functional_unit: FunctionalUnit,
    metadata: Mapping[str, Any] | None = None,
    *,
    scenario_id: str = "scenario",
    label: str = "",
) -> Scenario:
    scenario = Scenario(
        id=scenario_id,
        label=label or scenario_id,
        flows=tuple(flows),
        processes=tuple(processes),
        functional_unit=functional_unit,
        metadata=dict(metadata or {}),
    )
    for finding in _build_findings(scenario):
        raise _BUILD_ERRORS.get(finding.code, InventoryError)(finding.message)

    LOGGER.debug(
        "Scenario built: scenario=%s flows=%s processes=%s",
        scenario.id,
        len(scenario.flows),
        len(scenario.processes),
    )
    return scenario


def validate(scenario: Scenario) -> list[Finding]:
    findings = _build_findings(scenario)
    findings.extend(_system_findings(scenario))
    return findings


def producers_by_flow(scenario: Scenario) -> dict[str, list[str]]:
    out: dict[str, list[str]] = defaultdict(list)
    for process in scenario.processes:
        for flow_id in process.produced_flows():
            out[flow_id].append(process.id)
    return {flow_id: sorted(ids) for flow_id, ids in out.items()}


def matrices(scenario: Scenario) -> InventoryMatrices:
    flow_ids = scenario.economic_flow_ids()
    env_ids = scenario.environmental_flow_ids()
    producers = producers_by_flow(scenario)

    shared = {flow_id: ids for flow_id, ids in producers.items() if len(ids) > 1}
    if shared:
        flow_id = sorted(shared)[0]
        raise MultipleProducersError(
            f"Economic flow '{flow_id}' has {len(shared[flow_id])} producers "
            f"({', '.join(shared[flow_id])}); apply allocation first"
        )
    problems = _function_count_problems(scenario)
    if problems:
        raise NonSquareSystemError(problems[0][1])
    if len(flow_ids) != len(scenario.processes):
        raise NonSquareSystemError(
            f"Technosphere is not square: {len(flow_ids)} economic flows, {len(scenario.processes)} processes"
        )
    missing = [flow_id for flow_id in flow_ids if flow_id not in producers]
    if missing:
        raise NonSquareSystemError(f"Economic flow '{missing[0]}' has no producer")

    row_of = {flow_id: index for index, flow_id in enumerate(flow_ids)}
    env_row_of = {flow_id: index for index, flow_id in enumerate(env_ids)}
    column_of = {producers[flow_id][0]: index for index, flow_id in enumerate(flow_ids)}
    process_ids = tuple(producers[flow_id][0] for flow_id in flow_ids)

    a_rows: list[int] = []
    a_cols: list[int] = []
    a_data: list[float] = []
    b_rows: list[int] = []
    b_cols: list[int] = []
    b_data: list[float] = []
    for process in scenario.processes:
        column = column_of[process.id]
        for flow_id, quantity in process.economic_exchanges.items():
            if quantity == 0:
                continue
            a_rows.append(row_of[flow_id])
            a_cols.append(column)
            a_data.append(float(quantity))
        for flow_id, quantity in process.environmental_exchanges.items():
            if quantity == 0:
                continue
            b_rows.append(env_row_of[flow_id])
            b_cols.append(column)
            b_data.append(scenario.flow(flow_id).sign * float(quantity))

    size = len(flow_ids)
    technosphere = sparse.coo_matrix((a_data, (a_rows, a_cols)), shape=(size, size)).tocsc()
    intervention = sparse.coo_matrix((b_data, (b_rows, b_cols)), shape=(len(env_ids), size)).tocsc()

    demand = np.zeros(size, dtype=float)
    demand[row_of[scenario.functional_unit.reference_flow]] = float(scenario.functional_unit.quantity)

    LOGGER.debug(
        "Matrices built: scenario=%s technosphere=%sx%s intervention=%sx%s nnz_a=%s nnz_b=%s",
        scenario.id,
        size,
        size,
        len(env_ids),
        size,
        technosphere.nnz,
        intervention.nnz,
    )
    return InventoryMatrices(
        technosphere=technosphere,
        intervention=intervention,
        demand=demand,
        economic_flow_ids=tuple(flow_ids),
        environmental_flow_ids=tuple(env_ids),
        process_ids=process_ids,
    )


def _build_findings(scenario: Scenario) -> list[Finding]:
    findings: list[Finding] = []

    if not scenario.processes:
        findings.append(Finding("EmptyProcessSet", f"Scenario '{scenario.id}' has no processes"))

    flows: dict[str, FlowSpec] = {}
    for flow in scenario.flows:
        known = flows.get(flow.id)
        if known is not None:
            if known.unit != flow.unit:
                findings.append(
                    Finding(
                        "UnitMismatch",
                        f"Flow '{flow.id}' declared with units '{known.unit}' and '{flow.unit}'",
                        subject=flow.id,
                    )
                )
            else:
                findings.append(Finding("DuplicateId", f"Duplicate flow id: '{flow.id}'", subject=flow.id))
            continue
        flows[flow.id] = flow
        findings.extend(_flow_findings(flow))

    seen_processes: set[str] = set()
    for process in scenario.processes:
        if process.id in seen_processes:
            findings.append(Finding("DuplicateId", f"Duplicate process id: '{process.id}'", subject=process.id))
            continue
        seen_processes.add(process.id)
        findings.extend(_process_findings(process, flows))

    findings.extend(_functional_unit_findings(scenario.functional_unit, flows))
    return findings


def _flow_findings(flow: FlowSpec) -> list[Finding]:
    out: list[Finding] = []
    if not flow.id.strip():
        out.append(Finding("InvalidFlow", "Flow id must be non-empty", subject=flow.id))
    if not flow.unit.strip():
        out.append(Finding("InvalidFlow", f"Flow '{flow.id}' has an empty unit", subject=flow.id))
    if flow.kind is FlowKind.ECONOMIC and flow.direction is not None:
        out.append(Finding("InvalidFlow", f"Economic flow '{flow.id}' must not carry a direction", subject=flow.id))
    if flow.kind is FlowKind.ENVIRONMENTAL and flow.direction is None:
        out.append(Finding("InvalidFlow", f"Environmental flow '{flow.id}' requires a direction", subject=flow.id))
    return out


def _process_findings(process: UnitProcess, flows: Mapping[str, FlowSpec]) -> list[Finding]:
    out: list[Finding] = []
    for expected_kind, exchanges in (
        (FlowKind.ECONOMIC, process.economic_exchanges),
        (FlowKind.ENVIRONMENTAL, process.environmental_exchanges),
    ):
        for flow_id, quantity in exchanges.items():
            flow = flows.get(flow_id)
            if flow is None:
                out.append(
                    Finding(
                        "UnknownFlowRef",
                        f"Process '{process.id}' references undeclared flow '{flow_id}'",
                        subject=process.id,
                    )
                )
                continue
            if flow.kind is not expected_kind:
                out.append(
                    Finding(
                        "FlowKindMismatch",
                        f"Process '{process.id}' uses {flow.kind.value} flow '{flow_id}' "
                        f"as a {expected_kind.value.lower()} exchange",
                        subject=process.id,
                    )
                )
            if not math.isfinite(quantity):
                out.append(
                    Finding(
                        "InvalidProcess",
                        f"Process '{process.id}' has a non-finite exchange of '{flow_id}'",
                        subject=process.id,
                    )
                )
            elif expected_kind is FlowKind.ENVIRONMENTAL and quantity < 0:
                out.append(
                    Finding(
                        "InvalidProcess",
                        f"Process '{process.id}' has a negative environmental exchange of '{flow_id}'",
                        subject=process.id,
                    )
                )

    if not any(quantity != 0 for quantity in process.economic_exchanges.values()):
        out.append(
            Finding("InvalidProcess", f"Process '{process.id}' has no economic exchange", subject=process.id)
        )
    return out


def _functional_unit_findings(unit: FunctionalUnit, flows: Mapping[str, FlowSpec]) -> list[Finding]:
    flow = flows.get(unit.reference_flow)
    if flow is None:
        return [
            Finding(
                "UnknownFlowRef",
                f"Functional unit references undeclared flow '{unit.reference_flow}'",
                subject=unit.reference_flow,
            )
        ]
    if flow.kind is not FlowKind.ECONOMIC:
        return [
            Finding(
                "FlowKindMismatch",
                f"Functional unit reference flow '{unit.reference_flow}' must be economic",
                subject=unit.reference_flow,
            )
        ]
    if not (math.isfinite(unit.quantity) and unit.quantity > 0):
        return [
            Finding(
                "InvalidFunctionalUnit",
                f"Functional unit quantity must be positive, got {unit.quantity!r}",
                subject=unit.reference_flow,
            )
        ]
    return []


def _function_count_problems(scenario: Scenario) -> list[tuple[str, str]]:
    """Processes that do not produce exactly one economic flow."""
    out: list[tuple[str, str]] = []
    for process in scenario.processes:
        produced = process.produced_flows()
        if not produced:
            out.append((process.id, f"Process '{process.id}' produces no economic flow"))
        elif len(produced) > 1:
            out.append(
                (
                    process.id,
                    f"Process '{process.id}' produces {len(produced)} economic flows "
                    f"({', '.join(produced)}); partition it first",
                )
            )
    return out


def _system_findings(scenario: Scenario) -> list[Finding]:
    out: list[Finding] = []
    producers = producers_by_flow(scenario)
    flow_ids = scenario.economic_flow_ids()

    for flow_id in flow_ids:
        ids = producers.get(flow_id, [])
        if not ids:
            out.append(
                Finding("MissingProducer", f"Economic flow '{flow_id}' is never produced", subject=flow_id)
            )
        elif len(ids) > 1:
            out.append(
                Finding(
                    "MultipleProducers",
                    f"Economic flow '{flow_id}' is produced by {', '.join(ids)}",
                    subject=flow_id,
                )
            )

    for process_id, message in _function_count_problems(scenario):
        out.append(Finding("NonSquareSystem", message, subject=process_id))

    process_count = len({process.id for process in scenario.processes})
    if scenario.processes and len(flow_ids) != process_count:
        out.append(
            Finding(
                "NonSquareSystem",
                f"{len(flow_ids)} economic flows but {process_count} processes",
                severity=Severity.ERROR,
            )
        )
    return out
