from __future__ import annotations

from typing import Any

from ..core.models import Direction, FlowKind, StageId, SubProcess, Tier

_EXCHANGES: dict[str, Any] = {
    "type": "object",
    "additionalProperties": {"type": "number"},
}

_NON_NEGATIVE_EXCHANGES: dict[str, Any] = {
    "type": "object",
    "additionalProperties": {"type": "number", "minimum": 0},
}

FLOW_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["id", "kind", "unit"],
    "additionalProperties": False,
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "name": {"type": "string"},
        "kind": {"enum": [item.value for item in FlowKind]},
        "unit": {"type": "string", "minLength": 1},
        "direction": {"enum": [item.value for item in Direction]},
    },
}

ALLOCATION_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["kind"],
    "additionalProperties": False,
    "properties": {
        "kind": {"enum": ["DataVolume", "EconomicValue", "TimeShare", "EqualShare"]},
        "weights": {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}},
        "share": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "n": {"type": "integer", "minimum": 1},
    },
}

AMORTIZATION_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["lifetime", "usage"],
    "additionalProperties": False,
    "properties": {
        "lifetime": {"type": "number", "exclusiveMinimum": 0},
        "usage": {"type": "number", "exclusiveMinimum": 0},
        "exclusivity": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
    },
}

PROCESS_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["id", "stage", "economic"],
    "additionalProperties": False,
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "name": {"type": "string"},
        "stage": {"enum": [item.value for item in StageId]},
        "sub_process": {"enum": [None, *(item.value for item in SubProcess)]},
        "tier": {"enum": [None, *(item.value for item in Tier)]},
        "ai_tagged": {"type": "boolean"},
        "economic": _EXCHANGES,
        "environmental": _NON_NEGATIVE_EXCHANGES,
        "allocation": ALLOCATION_SCHEMA,
        "amortization": AMORTIZATION_SCHEMA,
    },
}

DEVICE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["id", "tier", "lifetime", "power_active", "power_idle"],
    "additionalProperties": False,
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "name": {"type": "string"},
        "tier": {"enum": [item.value for item in Tier]},
        "lifetime": {"type": "number", "exclusiveMinimum": 0},
        "power_active": {"type": "number", "minimum": 0},
        "power_idle": {"type": "number", "minimum": 0},
        "hosted_pue": {"type": "number", "minimum": 1},
        "support_equipment": {"type": "boolean"},
        "dedicated": {"type": "boolean"},
        "embodied": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "production": _NON_NEGATIVE_EXCHANGES,
                "end_of_life": _NON_NEGATIVE_EXCHANGES,
            },
        },
    },
}

PROFILE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["duration", "grid_flow"],
    "additionalProperties": False,
    "properties": {
        "duration": {"type": "number", "minimum": 0},
        "utilization": {"type": "number", "minimum": 0, "maximum": 1},
        "n_sharing": {"type": "integer", "minimum": 1},
        "grid_flow": {"type": "string", "pattern": "\\S"},
    },
}

TASK_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["id", "kind", "devices", "profile"],
    "additionalProperties": False,
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "kind": {"enum": ["DataAcquisition", "DataStorage", "DataProcessing", "Training", "Inference"]},
        "devices": {"type": "array", "minItems": 1, "items": {"type": "string", "minLength": 1}},
        "profile": PROFILE_SCHEMA,
    },
}

SCENARIO_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["flows", "processes", "functional_unit"],
    "additionalProperties": False,
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "label": {"type": "string"},
        "grid_process": {"type": "string", "minLength": 1},
        "flows": {"type": "array", "items": FLOW_SCHEMA},
        "processes": {"type": "array", "items": PROCESS_SCHEMA},
        "devices": {"type": "array", "items": DEVICE_SCHEMA},
        "tasks": {"type": "array", "items": TASK_SCHEMA},
        "functional_unit": {
            "type": "object",
            "required": ["reference_flow", "quantity"],
            "additionalProperties": False,
            "properties": {
                "reference_flow": {"type": "string", "minLength": 1},
                "quantity": {"type": "number", "exclusiveMinimum": 0},
                "description": {"type": "string"},
            },
        },
        "meta": {
            "type": "object",
            "properties": {
                "evaluation_category": {"enum": ["a", "b", "c", "d", "e", "f"]},
                "notes": {"type": "string"},
            },
        },
    },
}

FACTORS_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["categories", "factors"],
    "additionalProperties": False,
    "properties": {
        "label": {"type": "string"},
        "illustrative": {"type": "boolean"},
        "categories": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "unit"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "name": {"type": "string"},
                    "unit": {"type": "string", "pattern": "\\S"},
                },
            },
        },
        "factors": {
            "type": "object",
            "additionalProperties": {"type": "object", "additionalProperties": {"type": "number"}},
        },
    },
}
