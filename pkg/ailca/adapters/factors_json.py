from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

from jsonschema import Draft202012Validator

from ..core.errors import ScenarioFileError, ScenarioSchemaError
from ..engine import CharacterizationTable, ImpactCategory
from .scenario_json import decode_json_document, json_pointer
from .scenario_schema import FACTORS_SCHEMA


LOGGER = logging.getLogger(__name__)

_FACTORS_VALIDATOR = Draft202012Validator(FACTORS_SCHEMA)


class JsonFactorRepository:
    def load(self, source: str) -> CharacterizationTable:
        path = Path(source)
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise ScenarioFileError(f"Cannot read factors file '{source}': {exc.strerror or exc}") from exc

        table = parse_factors_file(data)
        LOGGER.info(
            "Characterization factors loaded: source=%s categories=%s factors=%s",
            path,
            ",".join(table.category_ids),
            len(table.factors),
        )
        return table


def parse_factors_file(data: bytes | str) -> CharacterizationTable:
    """
    Factors file: {"categories": [{"id", "name", "unit"}], "factors": {category: {flow: factor}}}.
    Factors are per unit of flow in its own direction (emitted or extracted).
    """
    payload: dict[str, Any] = decode_json_document(data)
    for error in sorted(_FACTORS_VALIDATOR.iter_errors(payload), key=lambda item: json_pointer(item.absolute_path)):
        raise ScenarioSchemaError(error.message, path=json_pointer(error.absolute_path))

    categories: list[ImpactCategory] = []
    for index, item in enumerate(payload["categories"]):
        try:
            categories.append(ImpactCategory(id=item["id"], name=item.get("name", item["id"]), unit=item["unit"]))
        except ValueError as exc:
            raise ScenarioSchemaError(str(exc), path=json_pointer(["categories", index])) from exc
    known = {category.id for category in categories}
    factors: dict[tuple[str, str], float] = {}
    for category_id in sorted(payload["factors"]):
        if category_id not in known:
            raise ScenarioSchemaError(f"factors for undeclared category '{category_id}'", path=json_pointer(["factors", category_id]))
        for flow_id, value in payload["factors"][category_id].items():
            factors[(category_id, flow_id)] = float(value)

    try:
        return CharacterizationTable(categories=tuple(categories), factors=factors)
    except ValueError as exc:
        raise ScenarioSchemaError(str(exc), path="/categories") from exc
