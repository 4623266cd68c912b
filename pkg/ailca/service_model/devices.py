from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum

from ..core.allocation import amortize_embodied, static_share
from ..core.errors import InvalidDeviceError, UnknownDeviceError, UnknownGridProcessError
from ..core.models import (
    Finding,
    FlowKind,
    FlowSpec,
    LifeCycleStage,
    Severity,
    StageId,
    SubProcess,
    Tier,
    UnitProcess,
)


LOGGER = logging.getLogger(__name__)


class TaskKind(str, Enum):
    DATA_ACQUISITION = "DataAcquisition"
    DATA_STORAGE = "DataStorage"
    DATA_PROCESSING = "DataProcessing"
    TRAINING = "Training"
    INFERENCE = "Inference"


@dataclass(frozen=True, slots=True)
class EnergyProfile:
    duration: float
    grid_flow: str
    utilization: float = 1.0
    n_sharing: int = 1

    def __post_init__(self) -> None:
        if self.duration < 0:
            raise InvalidDeviceError(f"Profile duration must be >= 0 hours, got {self.duration!r}")
        if not (0.0 <= self.utilization <= 1.0):
            raise InvalidDeviceError(f"Profile utilization must be in [0, 1], got {self.utilization!r}")
        if self.n_sharing < 1:
            raise InvalidDeviceError(f"Profile n_sharing must be >= 1, got {self.n_sharing!r}")
        if not self.grid_flow.strip():
            raise InvalidDeviceError("Profile grid_flow must be non-empty")


@dataclass(frozen=True, slots=True)
class Device:
    """
    Physical equipment used by AI tasks.
    `production_exchanges` cover raw material acquisition, manufacturing and
    transport as one production group; lifetime and durations are in hours,
    powers in watts.
    """

    id: str
    name: str
    tier: Tier
    lifetime: float
    power_active: float
    power_idle: float
    hosted_pue: float = 1.0
    support_equipment: bool = False
    dedicated: bool = False
    production_exchanges: Mapping[str, float] = field(default_factory=dict)
    end_of_life_exchanges: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.lifetime > 0:
            raise InvalidDeviceError(f"Device '{self.id}': lifetime must be positive, got {self.lifetime!r}")
        if self.power_idle < 0:
            raise InvalidDeviceError(f"Device '{self.id}': power_idle must be >= 0, got {self.power_idle!r}")
        if self.power_active < self.power_idle:
            raise InvalidDeviceError(
                f"Device '{self.id}': power_active {self.power_active!r} is below power_idle {self.power_idle!r}"
            )
        if self.hosted_pue < 1:
            raise InvalidDeviceError(f"Device '{self.id}': hosted_pue must be >= 1, got {self.hosted_pue!r}")


@dataclass(frozen=True, slots=True)
class AITask:
    id: str
    kind: TaskKind
    devices: tuple[str, ...]
    profile: EnergyProfile

    def __post_init__(self) -> None:
        object.__setattr__(self, "devices", tuple(self.devices))
        if not self.devices:
            raise InvalidDeviceError(f"Task '{self.id}' needs at least one device")

    @property
    def flow_id(self) -> str:
        return f"task:{self.id}"


@dataclass(frozen=True, slots=True)
class EnergyUse:
    dynamic_kwh: float
    static_kwh: float
    facility_kwh: float


def energy_use(device: Device, profile: EnergyProfile) -> EnergyUse:
    dynamic = profile.utilization * (device.power_active - device.power_idle) * profile.duration / 1000.0
    static = static_share(device.power_idle * profile.duration / 1000.0, profile.n_sharing)
    return EnergyUse(
        dynamic_kwh=dynamic,
        static_kwh=static,
        facility_kwh=(dynamic + static) * device.hosted_pue,
    )


def slice_flow_id(task: AITask, device: Device, phase: str) -> str:
    return f"{task.id}:{device.id}:{phase}"


def device_flows(tasks: Iterable[AITask], devices: Iterable[Device]) -> list[FlowSpec]:
    by_id = _index_devices(devices)
    out: list[FlowSpec] = []
    for task in tasks:
        out.append(FlowSpec(id=task.flow_id, name=f"{task.kind.value} task run", kind=FlowKind.ECONOMIC, unit="run"))
        for device_id in task.devices:
            device = _resolve_device(by_id, task, device_id)
            for phase, unit in (("production", "share"), ("use", "run"), ("eol", "share")):
                out.append(
                    FlowSpec(
                        id=slice_flow_id(task, device, phase),
                        name=f"{device.name} {phase} slice for {task.id}",
                        kind=FlowKind.ECONOMIC,
                        unit=unit,
                    )
                )
    return out


def devices_to_processes(
    tasks: Sequence[AITask],
    devices: Iterable[Device],
    grid_process_id: str,
    *,
    known_processes: Iterable[UnitProcess] = (),
) -> list[UnitProcess]:
    by_id = _index_devices(devices)
    grid = next((process for process in known_processes if process.id == grid_process_id), None)
    if grid is None:
        raise UnknownGridProcessError(f"Grid process '{grid_process_id}' is not declared")

    out: list[UnitProcess] = []
    for task in tasks:
        if task.profile.grid_flow not in grid.produced_flows():
            raise UnknownGridProcessError(
                f"Grid process '{grid_process_id}' does not produce flow '{task.profile.grid_flow}' used by task '{task.id}'"
            )

        task_inputs: dict[str, float] = {task.flow_id: 1.0}
        for device_id in task.devices:
            device = _resolve_device(by_id, task, device_id)
            for process in _device_processes(task, device):
                out.append(process)
                task_inputs[process.produced_flows()[0]] = -1.0

        out.append(
            UnitProcess(
                id=task.flow_id,
                name=f"{task.kind.value} task '{task.id}'",
                stage=LifeCycleStage(StageId.C_USE),
                economic_exchanges=task_inputs,
                ai_tagged=True,
            )
        )

    LOGGER.info(
        "AI service expanded: tasks=%s devices=%s processes=%s grid_process=%s",
        len(tasks),
        len(by_id),
        len(out),
        grid_process_id,
    )
    return out


def end_of_life_gaps(tasks: Iterable[AITask], devices: Iterable[Device]) -> list[Finding]:
    by_id = _index_devices(devices)
    used = sorted({device_id for task in tasks for device_id in task.devices if device_id in by_id})
    out: list[Finding] = []
    for device_id in used:
        if by_id[device_id].end_of_life_exchanges:
            continue
        out.append(
            Finding(
                "EndOfLifeDataGap",
                f"Device '{device_id}' declares no end-of-life exchanges; a zero end-of-life process was emitted",
                severity=Severity.WARNING,
                subject=device_id,
            )
        )
    return out


def _device_processes(task: AITask, device: Device) -> list[UnitProcess]:
    profile = task.profile
    exclusivity = 1.0 if device.dedicated else 1.0 / profile.n_sharing
    energy = energy_use(device, profile)
    LOGGER.debug(
        "Device energy: task=%s device=%s dynamic_kwh=%.6g static_kwh=%.6g facility_kwh=%.6g",
        task.id,
        device.id,
        energy.dynamic_kwh,
        energy.static_kwh,
        energy.facility_kwh,
    )

    production_stage = LifeCycleStage(
        StageId.B_PRODUCTION,
        SubProcess.SUPPORT_EQUIPMENT_PRODUCTION if device.support_equipment else SubProcess.DEVICE_PRODUCTION_ASSEMBLY,
    )
    use_stage = LifeCycleStage(
        StageId.C_USE,
        SubProcess.SUPPORT_EQUIPMENT_USE if device.support_equipment else SubProcess.ICT_EQUIPMENT_USE,
    )

    production = _amortized_slice(
        UnitProcess(
            id=slice_flow_id(task, device, "production"),
            name=f"{device.name} production ({task.id})",
            stage=production_stage,
            economic_exchanges={slice_flow_id(task, device, "production"): 1.0},
            environmental_exchanges=device.production_exchanges,
            tier=device.tier,
            ai_tagged=True,
        ),
        device,
        profile.duration,
        exclusivity,
    )
    use = UnitProcess(
        id=slice_flow_id(task, device, "use"),
        name=f"{device.name} use ({task.id})",
        stage=use_stage,
        economic_exchanges={
            slice_flow_id(task, device, "use"): 1.0,
            profile.grid_flow: -energy.facility_kwh,
        },
        tier=device.tier,
        ai_tagged=True,
    )
    end_of_life = _amortized_slice(
        UnitProcess(
            id=slice_flow_id(task, device, "eol"),
            name=f"{device.name} end of life ({task.id})",
            stage=LifeCycleStage(StageId.D_END_OF_LIFE),
            economic_exchanges={slice_flow_id(task, device, "eol"): 1.0},
            environmental_exchanges=device.end_of_life_exchanges,
            tier=device.tier,
            ai_tagged=True,
        ),
        device,
        profile.duration,
        exclusivity,
    )
    if not device.end_of_life_exchanges:
        LOGGER.warning("End-of-life data gap: device=%s task=%s", device.id, task.id)
    return [production, use, end_of_life]


def _amortized_slice(process: UnitProcess, device: Device, usage: float, exclusivity: float) -> UnitProcess:
    # The slice keeps one unit of output; only its environmental share is amortized.
    if usage > 0:
        return amortize_embodied(process, device.lifetime, usage, exclusivity).with_outputs_of(process)
    return UnitProcess(
        id=process.id,
        name=process.name,
        stage=process.stage,
        economic_exchanges=process.economic_exchanges,
        environmental_exchanges={flow_id: 0.0 for flow_id in process.environmental_exchanges},
        tier=process.tier,
        ai_tagged=process.ai_tagged,
    )


def _index_devices(devices: Iterable[Device]) -> dict[str, Device]:
    out: dict[str, Device] = {}
    for device in devices:
        if device.id in out:
            raise InvalidDeviceError(f"Duplicate device id: '{device.id}'")
        out[device.id] = device
    return out


def _resolve_device(by_id: Mapping[str, Device], task: AITask, device_id: str) -> Device:
    try:
        return by_id[device_id]
    except KeyError as exc:
        known = ", ".join(sorted(by_id)) or "<empty>"
        raise UnknownDeviceError(f"Task '{task.id}' references unknown device '{device_id}'. Known: {known}") from exc
