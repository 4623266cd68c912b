from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path


LOGGER = logging.getLogger(__name__)

BUNDLED_DATA_DIR = Path(__file__).resolve().parent.parent / "data"
DEFAULT_FACTORS_PATH = BUNDLED_DATA_DIR / "demo-factors.json"


@dataclass(frozen=True, slots=True)
class EngineSettings:
    condition_cap: float = 1e12
    residual_tolerance: float = 1e-9
    factors_path: str | None = None
    max_workers: int = 2

    def resolved_factors_path(self) -> Path:
        if self.factors_path:
            return Path(self.factors_path)
        return DEFAULT_FACTORS_PATH


def _env_float(name: str, default: float) -> float:
    raw = (os.getenv(name) or "").strip()
    if not raw:
        return default
    try:
        value = float(raw)
    except ValueError:
        LOGGER.warning("Ignoring malformed setting: %s=%r", name, raw)
        return default
    if value <= 0:
        LOGGER.warning("Ignoring non-positive setting: %s=%r", name, raw)
        return default
    return value


def settings_from_env() -> EngineSettings:
    max_workers_raw = (os.getenv("AILCA_MAX_WORKERS") or "2").strip()
    try:
        max_workers = max(1, int(max_workers_raw))
    except ValueError:
        max_workers = 2

    settings = EngineSettings(
        condition_cap=_env_float("AILCA_CONDITION_CAP", 1e12),
        residual_tolerance=_env_float("AILCA_RESIDUAL_TOLERANCE", 1e-9),
        factors_path=(os.getenv("AILCA_FACTORS") or "").strip() or None,
        max_workers=max_workers,
    )
    LOGGER.debug(
        "Engine settings loaded: condition_cap=%.3e residual_tolerance=%.3e factors_path=%s max_workers=%s",
        settings.condition_cap,
        settings.residual_tolerance,
        settings.factors_path,
        settings.max_workers,
    )
    return settings
