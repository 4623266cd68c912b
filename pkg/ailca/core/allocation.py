from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    InvalidShareError,
    MissingWeightError,
    NonPositiveLifetimeError,
    UnsupportedKeyError,
    UsageExceedsLifetimeError,
    ZeroProgramsError,
    ZeroWeightSumError,
)
from .inventory import build_scenario
from .models import Scenario, StageId, UnitProcess


LOGGER = logging.getLogger(__name__)

_AMORTIZED_STAGES = frozenset({StageId.A_RAW_MATERIAL, StageId.B_PRODUCTION, StageId.D_END_OF_LIFE})


class KeyKind(str, Enum):
    DATA_VOLUME = "DataVolume"
    ECONOMIC_VALUE = "EconomicValue"
    TIME_SHARE = "TimeShare"
    EQUAL_SHARE = "EqualShare"


@dataclass(frozen=True, slots=True)
class AllocationKey:
    """
    Allocation key for shared or multifunctional processes.
    Weight keys (DataVolume, EconomicValue) take raw observed quantities per
    function; they are normalized when applied.
    """

    kind: KeyKind
    weights: Mapping[str, float] = field(default_factory=dict)
    share_ratio: float | None = None
    n: int | None = None

    def __post_init__(self) -> None:
        if self.kind in (KeyKind.DATA_VOLUME, KeyKind.ECONOMIC_VALUE):
            for function_id, weight in self.weights.items():
                if not math.isfinite(weight) or weight < 0:
                    raise InvalidShareError(f"Weight for '{function_id}' must be a non-negative number, got {weight!r}")
            if self.weights and sum(self.weights.values()) <= 0:
                raise ZeroWeightSumError(f"{self.kind.value} key weights sum to zero")
        elif self.kind is KeyKind.TIME_SHARE:
            if self.share_ratio is None or not (0 < self.share_ratio <= 1):
                raise InvalidShareError(f"TimeShare ratio must be in (0, 1], got {self.share_ratio!r}")
        elif self.kind is KeyKind.EQUAL_SHARE:
            if self.n is None or self.n < 1:
                raise ZeroProgramsError(f"EqualShare needs n >= 1, got {self.n!r}")

    @classmethod
    def data_volume(cls, weights: Mapping[str, float]) -> AllocationKey:
        return cls(kind=KeyKind.DATA_VOLUME, weights=dict(weights))

    @classmethod
    def economic_value(cls, weights: Mapping[str, float]) -> AllocationKey:
        return cls(kind=KeyKind.ECONOMIC_VALUE, weights=dict(weights))

    @classmethod
    def time_share(cls, ratio: float) -> AllocationKey:
        return cls(kind=KeyKind.TIME_SHARE, share_ratio=float(ratio))

    @classmethod
    def equal_share(cls, n: int) -> AllocationKey:
        return cls(kind=KeyKind.EQUAL_SHARE, n=int(n))

    @property
    def is_weighted(self) -> bool:
        return self.kind in (KeyKind.DATA_VOLUME, KeyKind.ECONOMIC_VALUE)

    def share(self) -> float:
        if self.kind is KeyKind.TIME_SHARE:
            return float(self.share_ratio or 0.0)
        if self.kind is KeyKind.EQUAL_SHARE:
            return 1.0 / int(self.n or 1)
        raise UnsupportedKeyError(f"{self.kind.value} key has no scalar share")


@dataclass(frozen=True, slots=True)
class Amortization:
    lifetime: float
    usage: float
    exclusivity: float = 1.0


def partition_multifunctional(process: UnitProcess, key: AllocationKey) -> list[UnitProcess]:
    produced = process.produced_flows()
    if not key.is_weighted:
        raise UnsupportedKeyError(
            f"Process '{process.id}': partitioning needs a DataVolume or EconomicValue key, got {key.kind.value}"
        )

    missing = [flow_id for flow_id in produced if flow_id not in key.weights]
    if missing:
        raise MissingWeightError(f"Process '{process.id}': allocation key has no weight for {', '.join(missing)}")
    if len(produced) <= 1:
        return [process]

    total = math.fsum(key.weights[flow_id] for flow_id in produced)
    if total <= 0:
        raise ZeroWeightSumError(f"Process '{process.id}': allocation weights sum to zero")

    inputs = {flow_id: qty for flow_id, qty in process.economic_exchanges.items() if qty <= 0}
    out: list[UnitProcess] = []
    for function_id in produced:
        share = key.weights[function_id] / total
        economic = {flow_id: qty * share for flow_id, qty in inputs.items()}
        economic[function_id] = process.economic_exchanges[function_id]
        out.append(
            UnitProcess(
                id=f"{process.id}/{function_id}",
                name=f"{process.name} [{function_id}]",
                stage=process.stage,
                economic_exchanges=economic,
                environmental_exchanges={
                    flow_id: qty * share for flow_id, qty in process.environmental_exchanges.items()
                },
                tier=process.tier,
                ai_tagged=process.ai_tagged,
            )
        )

    LOGGER.debug(
        "Process partitioned: process=%s key=%s functions=%s",
        process.id,
        key.kind.value,
        len(out),
    )
    return out


def amortize_embodied(
    process: UnitProcess,
    lifetime: float,
    usage: float,
    exclusivity: float = 1.0,
) -> UnitProcess:
    """Scale every exchange by (usage / lifetime) * exclusivity."""
    if not lifetime > 0:
        raise NonPositiveLifetimeError(f"Process '{process.id}': lifetime must be positive, got {lifetime!r}")
    if not usage > 0:
        raise InvalidShareError(f"Process '{process.id}': usage must be positive, got {usage!r}")
    if usage > lifetime:
        raise UsageExceedsLifetimeError(
            f"Process '{process.id}': usage {usage!r} exceeds lifetime {lifetime!r}"
        )
    if not (0 < exclusivity <= 1):
        raise InvalidShareError(f"Process '{process.id}': exclusivity must be in (0, 1], got {exclusivity!r}")

    factor = (usage / lifetime) * exclusivity
    LOGGER.debug("Process amortized: process=%s factor=%.6g", process.id, factor)
    return process.scaled(factor)


def static_share(total_static_quantity: float, n: int) -> float:
    if n < 1:
        raise ZeroProgramsError(f"Static consumption needs at least one program, got n={n!r}")
    if total_static_quantity < 0:
        raise InvalidShareError(f"Static quantity must be non-negative, got {total_static_quantity!r}")
    return total_static_quantity / n


def apply_share(process: UnitProcess, key: AllocationKey) -> UnitProcess:
    """Scale inputs and emissions by the key share; produced flows keep their quantity."""
    return process.scaled(key.share()).with_outputs_of(process)


def allocate_scenario(
    scenario: Scenario,
    keys: Mapping[str, AllocationKey] | None = None,
    amortizations: Mapping[str, Amortization] | None = None,
) -> Scenario:
    keys = keys or {}
    amortizations = amortizations or {}

    processes: list[UnitProcess] = []
    for process in scenario.processes:
        current = process
        plan = amortizations.get(process.id)
        if plan is not None:
            if process.stage.stage_id not in _AMORTIZED_STAGES:
                LOGGER.warning(
                    "Amortization applied outside production/end-of-life stages: process=%s stage=%s",
                    process.id,
                    process.stage.stage_id.value,
                )
            # One unit of output carries the amortized burden.
            amortized = amortize_embodied(current, plan.lifetime, plan.usage, plan.exclusivity)
            current = amortized.with_outputs_of(current)

        key = keys.get(process.id)
        if key is None:
            processes.append(current)
        elif key.is_weighted:
            processes.extend(partition_multifunctional(current, key))
        else:
            processes.append(apply_share(current, key))

    if not keys and not amortizations:
        return scenario

    LOGGER.info(
        "Scenario allocated: scenario=%s processes_before=%s processes_after=%s keys=%s amortizations=%s",
        scenario.id,
        len(scenario.processes),
        len(processes),
        len(keys),
        len(amortizations),
    )
    return build_scenario(
        scenario.flows,
        processes,
        scenario.functional_unit,
        scenario.metadata,
        scenario_id=scenario.id,
        label=scenario.label,
    )
