from __future__ import annotations

from ..core.registry import EmitterRegistry
from .base import EVALUATION_CATEGORIES, BaseReportEmitter, EmitOptions, ReportBundle, ReportMeta
from .csv_report import CSV_HEADER, CsvReportEmitter
from .json_report import JsonReportEmitter
from .text import TextReportEmitter


def register_builtin_emitters(registry: EmitterRegistry) -> None:
    registry.register(TextReportEmitter())
    registry.register(CsvReportEmitter())
    registry.register(JsonReportEmitter())


def build_default_registry() -> EmitterRegistry:
    registry = EmitterRegistry()
    register_builtin_emitters(registry)
    return registry


def emit_report(
    bundle: ReportBundle,
    format_name: str = "text",
    *,
    options: EmitOptions | None = None,
    registry: EmitterRegistry | None = None,
) -> bytes:
    return (registry or build_default_registry()).get(format_name).emit(bundle, options)


__all__ = [
    "CSV_HEADER",
    "EVALUATION_CATEGORIES",
    "BaseReportEmitter",
    "CsvReportEmitter",
    "EmitOptions",
    "JsonReportEmitter",
    "ReportBundle",
    "ReportMeta",
    "TextReportEmitter",
    "build_default_registry",
    "emit_report",
    "register_builtin_emitters",
]
