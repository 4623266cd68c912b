from .allocation import (
    AllocationKey,
    Amortization,
    KeyKind,
    allocate_scenario,
    amortize_embodied,
    apply_share,
    partition_multifunctional,
    static_share,
)
from .inventory import InventoryMatrices, build_scenario, matrices, validate
from .models import (
    STAGE_ROWS,
    Direction,
    Finding,
    FlowKind,
    FlowSpec,
    FunctionalUnit,
    LifeCycleStage,
    Obligation,
    Scenario,
    Severity,
    StageId,
    SubProcess,
    Tier,
    UnitProcess,
)
from .registry import EmitterRegistry

__all__ = [
    "STAGE_ROWS",
    "AllocationKey",
    "Amortization",
    "Direction",
    "EmitterRegistry",
    "Finding",
    "FlowKind",
    "FlowSpec",
    "FunctionalUnit",
    "InventoryMatrices",
    "KeyKind",
    "LifeCycleStage",
    "Obligation",
    "Scenario",
    "Severity",
    "StageId",
    "SubProcess",
    "Tier",
    "UnitProcess",
    "allocate_scenario",
    "amortize_embodied",
    "apply_share",
    "build_scenario",
    "matrices",
    "partition_multifunctional",
    "static_share",
    "validate",
]
