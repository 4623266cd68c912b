from __future__ import annotations

import logging
from collections.abc import Callable, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from time import monotonic
from typing import Any, TypeVar

from .adapters.factors_json import JsonFactorRepository
from .adapters.scenario_json import JsonScenarioRepository, ScenarioDocument
from .benefit import decompose, with_verdicts
from .config import EngineSettings, settings_from_env
from .core.errors import LcaError
from .core.models import Severity
from .core.ports import FactorRepository, ScenarioRepository
from .core.registry import EmitterRegistry
from .engine import AssessmentResult, CharacterizationTable
from .pipeline import AssessmentPipeline, PreparedScenario
from .reports import EmitOptions, ReportBundle, build_default_registry
from .service_model.coverage import coverage_findings, coverage_report


LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VALIDATION = 2

_T = TypeVar("_T")


class SourceError(LcaError):
    """A domain error tagged with the file it came from."""

    def __init__(self, source: str, error: Exception) -> None:
        super().__init__(f"{source}: {error}")
        self.source = source
        self.error = error


@dataclass(frozen=True, slots=True)
class CompareJob:
    m1_path: str
    m2_path: str
    factors_path: str | None = None
    strict: bool = False
    lenient_schema: bool = False
    tolerances: Mapping[str, float] = field(default_factory=dict)
    output_format: str | None = None
    out_path: str | None = None
    nonzero_only: bool = False


@dataclass(frozen=True, slots=True)
class CompareOutcome:
    exit_code: int
    report: bytes = b""
    bundle: ReportBundle | None = None
    errors: tuple[str, ...] = ()


def build_scenario_repository(*, lenient: bool = False) -> ScenarioRepository:
    return JsonScenarioRepository(lenient=lenient)


def build_factor_repository() -> FactorRepository:
    return JsonFactorRepository()


def load_factors(factors_path: str | None, settings: EngineSettings) -> CharacterizationTable:
    path = factors_path or str(settings.resolved_factors_path())
    return with_source(path, build_factor_repository().load, path)


def with_source(source: str, func: Callable[..., _T], *args: Any) -> _T:
    try:
        return func(*args)
    except SourceError:
        raise
    except LcaError as exc:
        raise SourceError(source, exc) from exc


def write_report(report: bytes, out_path: str | None) -> None:
    if not out_path:
        return
    target = Path(out_path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(report)
    LOGGER.info("Report written: path=%s bytes=%s", target, len(report))


class LcaCompareService:
    def __init__(
        self,
        settings: EngineSettings | None = None,
        registry: EmitterRegistry | None = None,
    ) -> None:
        self._settings = settings or settings_from_env()
        self._registry = registry or build_default_registry()

    def run(self, job: CompareJob) -> CompareOutcome:
        started = monotonic()
        LOGGER.info(
            "Compare started: m1=%s m2=%s factors=%s strict=%s lenient_schema=%s format=%s",
            job.m1_path,
            job.m2_path,
            job.factors_path or self._settings.resolved_factors_path(),
            job.strict,
            job.lenient_schema,
            job.output_format or "auto",
        )
        try:
            emitter = self._registry.resolve(job.output_format, job.out_path)
            table = load_factors(job.factors_path, self._settings)
            repository = build_scenario_repository(lenient=job.lenient_schema)
            m1_document = with_source(job.m1_path, repository.load, job.m1_path)
            m2_document = with_source(job.m2_path, repository.load, job.m2_path)

            pipeline = AssessmentPipeline(table, self._settings)
            workers = max(1, min(2, self._settings.max_workers))
            with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="lca-assess") as pool:
                m1_future = pool.submit(self._assess_one, pipeline, m1_document)
                m2_future = pool.submit(self._assess_one, pipeline, m2_document)
                _, m1 = m1_future.result()
                m2_prepared, m2 = m2_future.result()

            entries = coverage_report(m2_prepared.scenario)
            coverage = coverage_findings(entries, strict=job.strict)
            for finding in coverage:
                if finding.severity is Severity.ERROR:
                    LOGGER.error("Coverage check failed: scenario=%s %s", m2.scenario_id, finding.message)
                else:
                    LOGGER.warning("Coverage gap: scenario=%s %s", m2.scenario_id, finding.message)

            comparison = with_verdicts(decompose(m2, m1), job.tolerances)
            bundle = ReportBundle(
                assessments=[m1, m2],
                comparison=comparison,
                coverage={m2.scenario_id: entries},
                findings=coverage,
                meta=m2_document.meta or m1_document.meta,
            )
            report = emitter.emit(bundle, EmitOptions(nonzero_only=job.nonzero_only))
            write_report(report, job.out_path)
        except (LcaError, KeyError, OSError) as exc:
            LOGGER.exception("Compare failed: elapsed_sec=%.3f error=%s", monotonic() - started, exc)
            return CompareOutcome(exit_code=EXIT_ERROR, errors=(_error_text(exc),))

        failed = [finding.message for finding in coverage if finding.severity is Severity.ERROR]
        exit_code = EXIT_VALIDATION if failed else EXIT_OK
        LOGGER.info(
            "Compare finished: m2=%s m1=%s exit_code=%s verdicts=%s elapsed_sec=%.3f",
            m2.scenario_id,
            m1.scenario_id,
            exit_code,
            ",".join(f"{key}={value.value}" for key, value in comparison.verdicts.items()),
            monotonic() - started,
        )
        return CompareOutcome(exit_code=exit_code, report=report, bundle=bundle, errors=tuple(failed))

    @staticmethod
    def _assess_one(
        pipeline: AssessmentPipeline,
        document: ScenarioDocument,
    ) -> tuple[PreparedScenario, AssessmentResult]:
        prepared = with_source(document.source, pipeline.prepare, document)
        return prepared, with_source(document.source, pipeline.assess_prepared, prepared)


def run_compare(job: CompareJob, *, settings: EngineSettings | None = None) -> CompareOutcome:
    return LcaCompareService(settings=settings).run(job)


def _error_text(exc: BaseException) -> str:
    if isinstance(exc, KeyError) and exc.args:
        return str(exc.args[0])
    return str(exc)
