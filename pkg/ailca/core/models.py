from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Any


class FlowKind(str, Enum):
    ECONOMIC = "Economic"
    ENVIRONMENTAL = "Environmental"


class Direction(str, Enum):
    EMISSION = "Emission"
    EXTRACTION = "Extraction"


class StageId(str, Enum):
    A_RAW_MATERIAL = "A_RawMaterial"
    B_PRODUCTION = "B_Production"
    C_USE = "C_Use"
    D_END_OF_LIFE = "D_EndOfLife"


class SubProcess(str, Enum):
    DEVICE_PRODUCTION_ASSEMBLY = "DeviceProductionAssembly"
    MANUFACTURER_SUPPORT = "ManufacturerSupport"
    SUPPORT_EQUIPMENT_PRODUCTION = "SupportEquipmentProduction"
    SITE_CONSTRUCTION = "SiteConstruction"
    ICT_EQUIPMENT_USE = "ICTEquipmentUse"
    SUPPORT_EQUIPMENT_USE = "SupportEquipmentUse"
    OPERATOR_SUPPORT = "OperatorSupport"
    SERVICE_PROVIDER_SUPPORT = "ServiceProviderSupport"
    REUSE_PREPARATION = "ReusePreparation"
    STORAGE_DISASSEMBLY_DISMANTLING_CRUSHING = "StorageDisassemblyDismantlingCrushing"


class Obligation(str, Enum):
    MANDATORY = "Mandatory"
    RECOMMENDED = "Recommended"


class Tier(str, Enum):
    TERMINAL = "Terminal"
    NETWORK = "Network"
    DATA_CENTER = "DataCenter"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


# ITU L.1410 stage rows applied to AI services. Obligations are fixed here and
# nowhere else.
STAGE_ROWS: tuple[tuple[StageId, SubProcess | None, Obligation, str], ...] = (
    (StageId.A_RAW_MATERIAL, None, Obligation.MANDATORY, "Raw material acquisition"),
    (StageId.B_PRODUCTION, SubProcess.DEVICE_PRODUCTION_ASSEMBLY, Obligation.MANDATORY, "Devices production and assembly"),
    (StageId.B_PRODUCTION, SubProcess.MANUFACTURER_SUPPORT, Obligation.RECOMMENDED, "Manufacturer support activities"),
    (StageId.B_PRODUCTION, SubProcess.SUPPORT_EQUIPMENT_PRODUCTION, Obligation.MANDATORY, "Production of support equipment"),
    (StageId.B_PRODUCTION, SubProcess.SITE_CONSTRUCTION, Obligation.RECOMMENDED, "ICT-specific site construction"),
    (StageId.C_USE, SubProcess.ICT_EQUIPMENT_USE, Obligation.MANDATORY, "Use of ICT equipment"),
    (StageId.C_USE, SubProcess.SUPPORT_EQUIPMENT_USE, Obligation.MANDATORY, "Use of support equipment"),
    (StageId.C_USE, SubProcess.OPERATOR_SUPPORT, Obligation.RECOMMENDED, "Operator support activities"),
    (StageId.C_USE, SubProcess.SERVICE_PROVIDER_SUPPORT, Obligation.RECOMMENDED, "Service provider support activities"),
    (StageId.D_END_OF_LIFE, SubProcess.REUSE_PREPARATION, Obligation.MANDATORY, "Preparation of ICT goods for reuse"),
    (
        StageId.D_END_OF_LIFE,
        SubProcess.STORAGE_DISASSEMBLY_DISMANTLING_CRUSHING,
        Obligation.MANDATORY,
        "Storage / disassembly / dismantling / crushing",
    ),
)

_ROW_BY_KEY = {(stage, sub): (obligation, label) for stage, sub, obligation, label in STAGE_ROWS}


def _freeze(values: Mapping[str, Any] | None) -> Mapping[str, Any]:
    return MappingProxyType(dict(values or {}))


@dataclass(frozen=True, slots=True)
class FlowSpec:
    id: str
    name: str
    kind: FlowKind
    unit: str
    direction: Direction | None = None

    @property
    def is_economic(self) -> bool:
        return self.kind is FlowKind.ECONOMIC

    @property
    def sign(self) -> float:
        """Sign of this flow in the intervention matrix."""
        if self.direction is Direction.EXTRACTION:
            return -1.0
        return 1.0


@dataclass(frozen=True, slots=True)
class LifeCycleStage:
    """
    Stage tag of a unit process.
    `sub_process=None` is a stage-level tag: the whole of stage A, or a merged
    group for the other stages.
    """

    stage_id: StageId
    sub_process: SubProcess | None = None

    def __post_init__(self) -> None:
        if self.sub_process is None:
            return
        if (self.stage_id, self.sub_process) not in _ROW_BY_KEY:
            raise ValueError(
                f"Sub-process {self.sub_process.value} does not belong to stage {self.stage_id.value}"
            )

    @property
    def obligation(self) -> Obligation:
        row = _ROW_BY_KEY.get((self.stage_id, self.sub_process))
        if row is not None:
            return row[0]
        return Obligation.MANDATORY

    @property
    def label(self) -> str:
        row = _ROW_BY_KEY.get((self.stage_id, self.sub_process))
        if row is not None:
            return row[1]
        return self.stage_id.value

    def key(self) -> str:
        if self.sub_process is None:
            return self.stage_id.value
        return f"{self.stage_id.value}/{self.sub_process.value}"


@dataclass(frozen=True, slots=True)
class UnitProcess:
    id: str
    name: str
    stage: LifeCycleStage
    economic_exchanges: Mapping[str, float]
    environmental_exchanges: Mapping[str, float] = field(default_factory=dict)
    tier: Tier | None = None
    ai_tagged: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "economic_exchanges", _freeze(self.economic_exchanges))
        object.__setattr__(self, "environmental_exchanges", _freeze(self.environmental_exchanges))

    def produced_flows(self) -> list[str]:
        return sorted(flow_id for flow_id, qty in self.economic_exchanges.items() if qty > 0)

    @property
    def is_multifunctional(self) -> bool:
        return len(self.produced_flows()) >= 2

    def scaled(self, factor: float) -> UnitProcess:
        return UnitProcess(
            id=self.id,
            name=self.name,
            stage=self.stage,
            economic_exchanges={key: value * factor for key, value in self.economic_exchanges.items()},
            environmental_exchanges={key: value * factor for key, value in self.environmental_exchanges.items()},
            tier=self.tier,
            ai_tagged=self.ai_tagged,
        )

    def with_outputs_of(self, other: UnitProcess) -> UnitProcess:
        """Copy of this process whose produced flows take their quantities from ``other``."""
        economic = dict(self.economic_exchanges)
        for flow_id in other.produced_flows():
            economic[flow_id] = other.economic_exchanges[flow_id]
        return UnitProcess(
            id=self.id,
            name=self.name,
            stage=self.stage,
            economic_exchanges=economic,
            environmental_exchanges=self.environmental_exchanges,
            tier=self.tier,
            ai_tagged=self.ai_tagged,
        )


@dataclass(frozen=True, slots=True)
class FunctionalUnit:
    reference_flow: str
    quantity: float
    description: str = ""


@dataclass(frozen=True, slots=True)
class Scenario:
    id: str
    label: str
    flows: tuple[FlowSpec, ...]
    processes: tuple[UnitProcess, ...]
    functional_unit: FunctionalUnit
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "flows", tuple(self.flows))
        object.__setattr__(self, "processes", tuple(self.processes))
        object.__setattr__(self, "metadata", _freeze(self.metadata))

    def flow(self, flow_id: str) -> FlowSpec:
        for item in self.flows:
            if item.id == flow_id:
                return item
        raise KeyError(flow_id)

    def process(self, process_id: str) -> UnitProcess:
        for item in self.processes:
            if item.id == process_id:
                return item
        raise KeyError(process_id)

    def economic_flow_ids(self) -> list[str]:
        return sorted(item.id for item in self.flows if item.kind is FlowKind.ECONOMIC)

    def environmental_flow_ids(self) -> list[str]:
        return sorted(item.id for item in self.flows if item.kind is FlowKind.ENVIRONMENTAL)

    def with_functional_unit_quantity(self, quantity: float) -> Scenario:
        return Scenario(
            id=self.id,
            label=self.label,
            flows=self.flows,
            processes=self.processes,
            functional_unit=FunctionalUnit(
                reference_flow=self.functional_unit.reference_flow,
                quantity=quantity,
                description=self.functional_unit.description,
            ),
            metadata=self.metadata,
        )


@dataclass(frozen=True, slots=True)
class Finding:
    code: str
    message: str
    severity: Severity = Severity.ERROR
    subject: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "code": self.code,
            "message": self.message,
            "severity": self.severity.value,
            "subject": self.subject,
        }
