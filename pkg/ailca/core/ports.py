from __future__ import annotations

from typing import TYPE_CHECKING, Protocol

if TYPE_CHECKING:
    from ..adapters.scenario_json import ScenarioDocument
    from ..engine import CharacterizationTable


class ScenarioRepository(Protocol):
    def load(self, source: str) -> ScenarioDocument:
        raise NotImplementedError


class FactorRepository(Protocol):
    def load(self, source: str) -> CharacterizationTable:
        raise NotImplementedError
