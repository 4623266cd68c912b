from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

from .adapters.report_json import load_report
from .compare import (
    EXIT_ERROR,
    EXIT_OK,
    EXIT_VALIDATION,
    CompareJob,
    LcaCompareService,
    build_scenario_repository,
    load_factors,
    with_source,
    write_report,
)
from .config import EngineSettings, settings_from_env
from .core.errors import LcaError
from .core.models import Severity
from .engine import CharacterizationTable
from .pipeline import AssessmentPipeline
from .reports import EmitOptions, ReportBundle, build_default_registry
from .service_model.coverage import CoverageEntry, coverage_findings, coverage_report


LOGGER = logging.getLogger(__name__)

FORMATS = ("text", "csv", "json")


def _tolerance(value: str) -> tuple[str, float]:
    category_id, sep, raw = value.partition("=")
    if not sep or not category_id.strip():
        raise argparse.ArgumentTypeError(f"expected CATEGORY=VALUE, got {value!r}")
    try:
        tolerance = float(raw)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"tolerance for '{category_id}' is not a number: {raw!r}") from exc
    if tolerance < 0:
        raise argparse.ArgumentTypeError(f"tolerance for '{category_id}' must be >= 0, got {raw!r}")
    return category_id.strip(), tolerance


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=FORMATS,
        default=None,
        help="Report format (default: from the --out suffix, otherwise text)",
    )
    parser.add_argument("--out", default=None, help="Write the report to PATH instead of stdout")
    parser.add_argument("--nonzero-only", action="store_true", help="CSV: skip zero contributions")


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--strict", action="store_true", help="Fail (exit 2) on missing Mandatory life-cycle rows")
    parser.add_argument("--lenient-schema", action="store_true", help="Warn on unknown scenario keys instead of failing")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Life cycle assessment of AI services and their net environmental benefit")
    parser.add_argument("--log-level", default="WARNING", help="Log level")
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="Check a scenario file and its life-cycle coverage")
    validate.add_argument("scenario", help="Scenario JSON file")
    _add_scenario_flags(validate)
    _add_output_flags(validate)

    assess = commands.add_parser("assess", help="Assess one scenario")
    assess.add_argument("scenario", help="Scenario JSON file")
    assess.add_argument("--factors", default=None, help="Characterization factors JSON file")
    _add_scenario_flags(assess)
    _add_output_flags(assess)

    compare = commands.add_parser("compare", help="Compare a reference (M1) with its AI-enhanced version (M2)")
    compare.add_argument("m1", help="Reference application scenario")
    compare.add_argument("m2", help="AI-enhanced application scenario")
    compare.add_argument("--factors", default=None, help="Characterization factors JSON file")
    compare.add_argument(
        "--tolerance",
        type=_tolerance,
        action="append",
        default=[],
        metavar="CATEGORY=VALUE",
        help="Neutral band for a category verdict (repeatable)",
    )
    _add_scenario_flags(compare)
    _add_output_flags(compare)

    report = commands.add_parser("report", help="Re-render a saved JSON report")
    report.add_argument("report", help="JSON report written by --format json")
    _add_output_flags(report)
    return parser


def run_validate(args: argparse.Namespace, settings: EngineSettings) -> tuple[int, bytes]:
    repository = build_scenario_repository(lenient=args.lenient_schema)
    document = with_source(args.scenario, repository.load, args.scenario)
    pipeline = AssessmentPipeline(CharacterizationTable(categories=()), settings)

    findings = pipeline.validate(document)
    coverage: dict[str, list[CoverageEntry]] = {}
    try:
        expanded, _ = pipeline.expand(document)
    except LcaError:
        LOGGER.debug("Coverage skipped: scenario=%s expansion failed", document.id)
    else:
        entries = coverage_report(expanded)
        coverage[document.id] = entries
        findings.extend(coverage_findings(entries, strict=args.strict))

    failed = any(finding.severity is Severity.ERROR for finding in findings)
    LOGGER.info(
        "Validation finished: scenario=%s findings=%s failed=%s",
        document.id,
        len(findings),
        failed,
    )
    bundle = ReportBundle(findings=findings, coverage=coverage, meta=document.meta)
    return (EXIT_VALIDATION if failed else EXIT_OK), _render(bundle, args)


def run_assess(args: argparse.Namespace, settings: EngineSettings) -> tuple[int, bytes]:
    table = load_factors(args.factors, settings)
    repository = build_scenario_repository(lenient=args.lenient_schema)
    document = with_source(args.scenario, repository.load, args.scenario)

    pipeline = AssessmentPipeline(table, settings)
    prepared = with_source(args.scenario, pipeline.prepare, document)
    result = with_source(args.scenario, pipeline.assess_prepared, prepared)

    entries = coverage_report(prepared.scenario)
    findings = coverage_findings(entries, strict=args.strict)
    bundle = ReportBundle(
        assessments=[result],
        coverage={result.scenario_id: entries},
        findings=findings,
        meta=document.meta,
    )
    failed = any(finding.severity is Severity.ERROR for finding in findings)
    return (EXIT_VALIDATION if failed else EXIT_OK), _render(bundle, args)


def run_report(args: argparse.Namespace, settings: EngineSettings) -> tuple[int, bytes]:
    with open(args.report, "rb") as handle:
        data = handle.read()
    bundle = with_source(args.report, load_report, data)
    return EXIT_OK, _render(bundle, args)


def run_compare_command(args: argparse.Namespace, settings: EngineSettings) -> tuple[int, bytes]:
    outcome = LcaCompareService(settings=settings).run(
        CompareJob(
            m1_path=args.m1,
            m2_path=args.m2,
            factors_path=args.factors,
            strict=args.strict,
            lenient_schema=args.lenient_schema,
            tolerances=dict(args.tolerance),
            output_format=args.format,
            out_path=args.out,
            nonzero_only=args.nonzero_only,
        )
    )
    for message in outcome.errors:
        print(f"error: {message}", file=sys.stderr)
    # The service already wrote --out; only stdout is left to the caller.
    return outcome.exit_code, b"" if args.out else outcome.report


def _render(bundle: ReportBundle, args: argparse.Namespace) -> bytes:
    emitter = build_default_registry().resolve(args.format, args.out)
    report = emitter.emit(bundle, EmitOptions(nonzero_only=args.nonzero_only))
    write_report(report, args.out)
    return b"" if args.out else report


def _write_stdout(report: bytes) -> None:
    buffer = getattr(sys.stdout, "buffer", None)
    if buffer is not None:
        buffer.write(report)
    else:
        sys.stdout.write(report.decode("utf-8"))
    sys.stdout.flush()


_COMMANDS = {
    "validate": run_validate,
    "assess": run_assess,
    "compare": run_compare_command,
    "report": run_report,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s [%(threadName)s] %(name)s: %(message)s",
    )
    settings = settings_from_env()

    try:
        exit_code, report = _COMMANDS[args.command](args, settings)
    except (LcaError, OSError) as exc:
        LOGGER.error("Command failed: command=%s error=%s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if report:
        _write_stdout(report)
    if exit_code == EXIT_VALIDATION and args.command != "compare":
        print("error: validation failed", file=sys.stderr)
    return exit_code


if __name__ == "__main__":
    raise SystemExit(main())
