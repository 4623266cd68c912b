from __future__ import annotations

from pathlib import PurePath
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ..reports.base import BaseReportEmitter


DEFAULT_FORMAT = "text"


class EmitterRegistry:
    """Report emitters keyed by format name and by output file suffix."""

    def __init__(self) -> None:
        self._emitters: dict[str, BaseReportEmitter] = {}
        self._by_suffix: dict[str, str] = {}

    def register(self, emitter: BaseReportEmitter) -> None:
        format_name = emitter.format_name.strip().lower()
        if not format_name:
            raise ValueError("Emitter format_name must be non-empty")
        if format_name in self._emitters:
            raise ValueError(f"Emitter for format '{format_name}' already exists")
        suffix = emitter.file_suffix.strip().lower()
        if suffix in self._by_suffix:
            raise ValueError(f"File suffix '{suffix}' is already claimed by format '{self._by_suffix[suffix]}'")

        self._emitters[format_name] = emitter
        if suffix:
            self._by_suffix[suffix] = format_name

    def get(self, format_name: str) -> BaseReportEmitter:
        key = format_name.strip().lower()
        try:
            return self._emitters[key]
        except KeyError as exc:
            known = ", ".join(sorted(self._emitters)) or "<empty>"
            raise KeyError(f"No emitter for format '{format_name}'. Known: {known}") from exc

    def format_for_path(self, path: str) -> str | None:
        return self._by_suffix.get(PurePath(path).suffix.lower())

    def resolve(self, format_name: str | None, out_path: str | None = None) -> BaseReportEmitter:
        """Explicit format first, then the --out suffix, then text."""
        if format_name:
            return self.get(format_name)
        inferred = self.format_for_path(out_path) if out_path else None
        return self.get(inferred or DEFAULT_FORMAT)

    def registered_formats(self) -> tuple[str, ...]:
        return tuple(sorted(self._emitters))
