from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

from ..core.models import STAGE_ROWS, Finding, Obligation, Scenario, Severity, StageId, SubProcess, UnitProcess


LOGGER = logging.getLogger(__name__)

_MERGED_PRODUCTION = frozenset({SubProcess.DEVICE_PRODUCTION_ASSEMBLY, SubProcess.SUPPORT_EQUIPMENT_PRODUCTION})


class CoverageStatus(str, Enum):
    PRESENT = "Present"
    MISSING = "Missing"


@dataclass(frozen=True, slots=True)
class CoverageEntry:
    stage_id: StageId
    sub_process: SubProcess | None
    label: str
    obligation: Obligation
    status: CoverageStatus
    processes: tuple[str, ...] = ()

    @property
    def row(self) -> str:
        if self.sub_process is None:
            return self.stage_id.value
        return f"{self.stage_id.value}/{self.sub_process.value}"

    def to_dict(self) -> dict[str, object]:
        return {
            "row": self.row,
            "label": self.label,
            "obligation": self.obligation.value,
            "status": self.status.value,
            "processes": list(self.processes),
        }


def covered_rows(process: UnitProcess) -> set[tuple[StageId, SubProcess | None]]:
    stage_id = process.stage.stage_id
    sub_process = process.stage.sub_process
    out: set[tuple[StageId, SubProcess | None]] = set()

    if stage_id is StageId.A_RAW_MATERIAL:
        out.add((StageId.A_RAW_MATERIAL, None))
    elif sub_process is not None:
        out.add((stage_id, sub_process))
        if stage_id is StageId.B_PRODUCTION and sub_process in _MERGED_PRODUCTION:
            out.add((StageId.A_RAW_MATERIAL, None))
    elif stage_id is StageId.D_END_OF_LIFE:
        out.add((StageId.D_END_OF_LIFE, SubProcess.REUSE_PREPARATION))
        out.add((StageId.D_END_OF_LIFE, SubProcess.STORAGE_DISASSEMBLY_DISMANTLING_CRUSHING))
    return out


def coverage_report(scenario: Scenario) -> list[CoverageEntry]:
    covering: dict[tuple[StageId, SubProcess | None], list[str]] = {}
    for process in scenario.processes:
        for row in covered_rows(process):
            covering.setdefault(row, []).append(process.id)

    entries: list[CoverageEntry] = []
    for stage_id, sub_process, obligation, label in STAGE_ROWS:
        processes = tuple(sorted(covering.get((stage_id, sub_process), ())))
        entries.append(
            CoverageEntry(
                stage_id=stage_id,
                sub_process=sub_process,
                label=label,
                obligation=obligation,
                status=CoverageStatus.PRESENT if processes else CoverageStatus.MISSING,
                processes=processes,
            )
        )

    LOGGER.debug(
        "Coverage computed: scenario=%s missing=%s",
        scenario.id,
        sum(1 for entry in entries if entry.status is CoverageStatus.MISSING),
    )
    return entries


def coverage_findings(entries: Iterable[CoverageEntry], *, strict: bool = False) -> list[Finding]:
    """Missing Mandatory rows are errors in strict mode; every other gap is a warning."""
    out: list[Finding] = []
    for entry in entries:
        if entry.status is CoverageStatus.PRESENT:
            continue
        mandatory = entry.obligation is Obligation.MANDATORY
        severity = Severity.ERROR if (mandatory and strict) else Severity.WARNING
        out.append(
            Finding(
                "CoverageMissing",
                f"{entry.obligation.value} life-cycle unit process missing: {entry.label} ({entry.row})",
                severity=severity,
                subject=entry.row,
            )
        )
    return out
