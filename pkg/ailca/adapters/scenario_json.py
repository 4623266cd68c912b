from __future__ import annotations

import json
import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from jsonschema import Draft202012Validator
from jsonschema.exceptions import ValidationError

from ..core.allocation import AllocationKey, Amortization, KeyKind
from ..core.errors import AllocationError, ScenarioFileError, ScenarioSchemaError, ScenarioSyntaxError
from ..core.models import (
    Direction,
    FlowKind,
    FlowSpec,
    FunctionalUnit,
    LifeCycleStage,
    Scenario,
    StageId,
    SubProcess,
    Tier,
    UnitProcess,
)
from ..reports.base import ReportMeta
from ..service_model.devices import AITask, Device, EnergyProfile, TaskKind
from .scenario_schema import SCENARIO_SCHEMA


LOGGER = logging.getLogger(__name__)

_SCENARIO_VALIDATOR = Draft202012Validator(SCENARIO_SCHEMA)


@dataclass(frozen=True, slots=True)
class ScenarioDocument:
    """
    Parsed scenario file: the inputs of build_scenario plus the AI service
    declarations (devices, tasks) and per-process allocation plans.
    """

    id: str
    label: str
    flows: tuple[FlowSpec, ...]
    processes: tuple[UnitProcess, ...]
    functional_unit: FunctionalUnit
    devices: tuple[Device, ...] = ()
    tasks: tuple[AITask, ...] = ()
    grid_process: str | None = None
    allocation_keys: Mapping[str, AllocationKey] = field(default_factory=dict)
    amortizations: Mapping[str, Amortization] = field(default_factory=dict)
    metadata: Mapping[str, Any] = field(default_factory=dict)
    meta: ReportMeta | None = None
    warnings: tuple[str, ...] = ()
    source: str = "<scenario>"

    @property
    def has_service_model(self) -> bool:
        return bool(self.tasks)


class JsonScenarioRepository:
    def __init__(self, *, lenient: bool = False) -> None:
        self._lenient = bool(lenient)

    def load(self, source: str) -> ScenarioDocument:
        path = Path(source)
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise ScenarioFileError(f"Cannot read scenario file '{source}': {exc.strerror or exc}") from exc

        document = parse_scenario_file(data, lenient=self._lenient, source=str(path))
        LOGGER.info(
            "Scenario loaded: source=%s scenario=%s flows=%s processes=%s devices=%s tasks=%s warnings=%s",
            path,
            document.id,
            len(document.flows),
            len(document.processes),
            len(document.devices),
            len(document.tasks),
            len(document.warnings),
        )
        return document


def parse_scenario_file(
    data: bytes | str,
    *,
    lenient: bool = False,
    source: str = "<scenario>",
) -> ScenarioDocument:
    payload = decode_json_document(data)
    warnings = _schema_check(payload, lenient=lenient)
    for warning in warnings:
        LOGGER.warning("Scenario schema warning: source=%s %s", source, warning)

    default_id = Path(source).stem if source and not source.startswith("<") else "scenario"
    scenario_id = str(payload.get("id") or default_id)

    flows = tuple(_parse_flow(item) for item in payload["flows"])
    processes: list[UnitProcess] = []
    keys: dict[str, AllocationKey] = {}
    amortizations: dict[str, Amortization] = {}
    for index, item in enumerate(payload["processes"]):
        pointer = f"/processes/{index}"
        process = _parse_process(item, pointer)
        processes.append(process)
        if "allocation" in item:
            keys[process.id] = _parse_allocation(item["allocation"], f"{pointer}/allocation")
        if "amortization" in item:
            amortizations[process.id] = _parse_amortization(item["amortization"], f"{pointer}/amortization")

    devices = tuple(
        _parse_device(item, f"/devices/{index}") for index, item in enumerate(payload.get("devices", ()))
    )
    tasks = tuple(_parse_task(item, f"/tasks/{index}") for index, item in enumerate(payload.get("tasks", ())))

    unit = payload["functional_unit"]
    functional_unit = FunctionalUnit(
        reference_flow=unit["reference_flow"],
        quantity=float(unit["quantity"]),
        description=unit.get("description", ""),
    )

    metadata = dict(payload.get("meta", {}))
    meta = None
    if "evaluation_category" in metadata:
        meta = ReportMeta(
            evaluation_category=metadata["evaluation_category"],
            notes=str(metadata.get("notes", "")),
        )

    return ScenarioDocument(
        id=scenario_id,
        label=str(payload.get("label") or scenario_id),
        flows=flows,
        processes=tuple(processes),
        functional_unit=functional_unit,
        devices=devices,
        tasks=tasks,
        grid_process=payload.get("grid_process"),
        allocation_keys=keys,
        amortizations=amortizations,
        metadata=metadata,
        meta=meta,
        warnings=tuple(warnings),
        source=source,
    )


def dump_scenario(scenario: Scenario, *, meta: ReportMeta | None = None) -> bytes:
    """Serialize a built scenario; parsing the output reproduces the same matrices."""
    metadata = dict(scenario.metadata)
    if meta is not None:
        metadata["evaluation_category"] = meta.evaluation_category
        metadata["notes"] = meta.notes

    payload = {
        "id": scenario.id,
        "label": scenario.label,
        "flows": [_flow_to_dict(item) for item in scenario.flows],
        "processes": [_process_to_dict(item) for item in scenario.processes],
        "functional_unit": {
            "reference_flow": scenario.functional_unit.reference_flow,
            "quantity": float(scenario.functional_unit.quantity),
            "description": scenario.functional_unit.description,
        },
        "meta": metadata,
    }
    return (json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n").encode("utf-8")


def json_pointer(parts: Iterable[Any]) -> str:
    tokens = [str(part).replace("~", "~0").replace("/", "~1") for part in parts]
    if not tokens:
        return "/"
    return "/" + "/".join(tokens)


def decode_json_document(data: bytes | str) -> dict[str, Any]:
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            line = data[: exc.start].count(b"\n") + 1
            column = exc.start - data.rfind(b"\n", 0, exc.start)
            raise ScenarioSyntaxError(f"Input is not valid UTF-8: {exc.reason}", line=line, column=column) from exc
    else:
        text = data

    def _reject_constant(name: str) -> Any:
        raise _NonFiniteConstant(name)

    try:
        payload = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    except _NonFiniteConstant as exc:
        position = max(0, text.find(exc.name))
        line = text.count("\n", 0, position) + 1
        column = position - text.rfind("\n", 0, position)
        raise ScenarioSyntaxError(f"Non-finite number {exc.name} is not allowed", line=line, column=column) from exc

    if not isinstance(payload, dict):
        raise ScenarioSchemaError(f"Top-level value must be an object, got {type(payload).__name__}", path="/")
    return payload


class _NonFiniteConstant(ValueError):
    def __init__(self, name: str) -> None:
        super().__init__(name)
        self.name = name


def _schema_check(payload: Mapping[str, Any], *, lenient: bool) -> list[str]:
    errors = sorted(
        _SCENARIO_VALIDATOR.iter_errors(payload),
        key=lambda error: (json_pointer(error.absolute_path), error.message),
    )
    warnings: list[str] = []
    for error in errors:
        parts = list(error.absolute_path)
        if error.validator == "additionalProperties" and error.validator_value is False:
            unexpected = _unexpected_keys(error)
            if lenient:
                warnings.extend(f"{json_pointer([*parts, key])}: unknown key ignored" for key in unexpected)
                continue
            raise ScenarioSchemaError(f"unknown key '{unexpected[0]}'", path=json_pointer([*parts, unexpected[0]]))
        raise ScenarioSchemaError(error.message, path=json_pointer(parts))
    return warnings


def _unexpected_keys(error: ValidationError) -> list[str]:
    allowed = set(error.schema.get("properties", {}))
    return sorted(key for key in error.instance if key not in allowed)


def _parse_flow(item: Mapping[str, Any]) -> FlowSpec:
    direction = item.get("direction")
    return FlowSpec(
        id=item["id"],
        name=item.get("name", item["id"]),
        kind=FlowKind(item["kind"]),
        unit=item["unit"],
        direction=None if direction is None else Direction(direction),
    )


def _parse_process(item: Mapping[str, Any], pointer: str) -> UnitProcess:
    sub_process = item.get("sub_process")
    try:
        stage = LifeCycleStage(
            StageId(item["stage"]),
            None if sub_process is None else SubProcess(sub_process),
        )
    except ValueError as exc:
        raise ScenarioSchemaError(str(exc), path=f"{pointer}/sub_process") from exc

    tier = item.get("tier")
    return UnitProcess(
        id=item["id"],
        name=item.get("name", item["id"]),
        stage=stage,
        economic_exchanges={key: float(value) for key, value in item["economic"].items()},
        environmental_exchanges={key: float(value) for key, value in item.get("environmental", {}).items()},
        tier=None if tier is None else Tier(tier),
        ai_tagged=bool(item.get("ai_tagged", False)),
    )


def _parse_allocation(item: Mapping[str, Any], pointer: str) -> AllocationKey:
    kind = KeyKind(item["kind"])
    required = {
        KeyKind.DATA_VOLUME: "weights",
        KeyKind.ECONOMIC_VALUE: "weights",
        KeyKind.TIME_SHARE: "share",
        KeyKind.EQUAL_SHARE: "n",
    }[kind]
    if required not in item:
        raise ScenarioSchemaError(f"{kind.value} allocation needs '{required}'", path=f"{pointer}/{required}")

    try:
        if kind is KeyKind.TIME_SHARE:
            return AllocationKey.time_share(item["share"])
        if kind is KeyKind.EQUAL_SHARE:
            return AllocationKey.equal_share(item["n"])
        return AllocationKey(kind=kind, weights={key: float(value) for key, value in item["weights"].items()})
    except AllocationError as exc:
        raise ScenarioSchemaError(str(exc), path=f"{pointer}/{required}") from exc


def _parse_amortization(item: Mapping[str, Any], pointer: str) -> Amortization:
    lifetime = float(item["lifetime"])
    usage = float(item["usage"])
    if usage > lifetime:
        raise ScenarioSchemaError(f"usage {usage!r} exceeds lifetime {lifetime!r}", path=f"{pointer}/usage")
    return Amortization(lifetime=lifetime, usage=usage, exclusivity=float(item.get("exclusivity", 1.0)))


def _parse_device(item: Mapping[str, Any], pointer: str) -> Device:
    power_active = float(item["power_active"])
    power_idle = float(item["power_idle"])
    if power_active < power_idle:
        raise ScenarioSchemaError(
            f"power_active {power_active!r} is below power_idle {power_idle!r}",
            path=f"{pointer}/power_active",
        )

    embodied = item.get("embodied", {})
    return Device(
        id=item["id"],
        name=item.get("name", item["id"]),
        tier=Tier(item["tier"]),
        lifetime=float(item["lifetime"]),
        power_active=power_active,
        power_idle=power_idle,
        hosted_pue=float(item.get("hosted_pue", 1.0)),
        support_equipment=bool(item.get("support_equipment", False)),
        dedicated=bool(item.get("dedicated", False)),
        production_exchanges={key: float(value) for key, value in embodied.get("production", {}).items()},
        end_of_life_exchanges={key: float(value) for key, value in embodied.get("end_of_life", {}).items()},
    )


def _parse_task(item: Mapping[str, Any], pointer: str) -> AITask:
    profile = item["profile"]
    return AITask(
        id=item["id"],
        kind=TaskKind(item["kind"]),
        devices=tuple(item["devices"]),
        profile=EnergyProfile(
            duration=float(profile["duration"]),
            grid_flow=profile["grid_flow"],
            utilization=float(profile.get("utilization", 1.0)),
            n_sharing=int(profile.get("n_sharing", 1)),
        ),
    )


def _flow_to_dict(flow: FlowSpec) -> dict[str, Any]:
    out: dict[str, Any] = {
        "id": flow.id,
        "name": flow.name,
        "kind": flow.kind.value,
        "unit": flow.unit,
    }
    if flow.direction is not None:
        out["direction"] = flow.direction.value
    return out


def _process_to_dict(process: UnitProcess) -> dict[str, Any]:
    return {
        "id": process.id,
        "name": process.name,
        "stage": process.stage.stage_id.value,
        "sub_process": None if process.stage.sub_process is None else process.stage.sub_process.value,
        "tier": None if process.tier is None else process.tier.value,
        "ai_tagged": process.ai_tagged,
        "economic": _exchanges(process.economic_exchanges),
        "environmental": _exchanges(process.environmental_exchanges),
    }


def _exchanges(values: Mapping[str, float]) -> dict[str, float]:
    return {key: float(values[key]) for key in sorted(values)}