from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from time import monotonic

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg

from .config import EngineSettings
from .core.errors import SingularSystemError
from .core.inventory import matrices
from .core.models import Finding, Scenario, Severity, StageId, Tier


LOGGER = logging.getLogger(__name__)

UNASSIGNED_TIER = "Unassigned"


@dataclass(frozen=True, slots=True)
class ImpactCategory:
    id: str
    name: str
    unit: str

    def __post_init__(self) -> None:
        if not self.unit.strip():
            raise ValueError(f"Impact category '{self.id}' has an empty unit")


@dataclass(frozen=True, slots=True)
class CharacterizationTable:
    """
    Factors per unit of environmental flow, stated in the flow's own direction
    (per kg emitted, per kg extracted). Absent (category, flow) pairs are zero.
    """

    categories: tuple[ImpactCategory, ...]
    factors: Mapping[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "categories", tuple(self.categories))
        ids = [category.id for category in self.categories]
        duplicates = sorted({item for item in ids if ids.count(item) > 1})
        if duplicates:
            raise ValueError(f"Duplicate impact category ids: {', '.join(duplicates)}")
        known = set(ids)
        for (category_id, flow_id), factor in self.factors.items():
            if category_id not in known:
                raise ValueError(f"Factor for unknown category '{category_id}' (flow '{flow_id}')")
            if not math.isfinite(factor):
                raise ValueError(f"Non-finite factor for ({category_id}, {flow_id})")

    @property
    def category_ids(self) -> tuple[str, ...]:
        return tuple(category.id for category in self.categories)

    def known_flows(self) -> frozenset[str]:
        return frozenset(flow_id for _, flow_id in self.factors)

    def factor(self, category_id: str, flow_id: str) -> float:
        return float(self.factors.get((category_id, flow_id), 0.0))

    def matrix(self, flow_ids: tuple[str, ...] | list[str]) -> np.ndarray:
        out = np.zeros((len(self.categories), len(flow_ids)), dtype=float)
        for row, category in enumerate(self.categories):
            for column, flow_id in enumerate(flow_ids):
                out[row, column] = self.factor(category.id, flow_id)
        return out


@dataclass(frozen=True, slots=True)
class Characterization:
    impacts: np.ndarray
    findings: tuple[Finding, ...] = ()


@dataclass(frozen=True, slots=True)
class ScalingSolution:
    scaling: np.ndarray
    residual: float
    condition_estimate: float
    findings: tuple[Finding, ...] = ()


@dataclass(eq=False, slots=True)
class AssessmentResult:
    scenario_id: str
    categories: tuple[ImpactCategory, ...]
    totals: np.ndarray
    by_process: dict[str, np.ndarray]
    by_stage: dict[str, np.ndarray]
    by_tier: dict[str, np.ndarray]
    ai_subtotal: np.ndarray
    scaling: dict[str, float]
    process_stage: dict[str, str] = field(default_factory=dict)
    process_sub_process: dict[str, str | None] = field(default_factory=dict)
    process_tier: dict[str, str | None] = field(default_factory=dict)
    ai_processes: frozenset[str] = frozenset()
    findings: list[Finding] = field(default_factory=list)

    @property
    def category_ids(self) -> tuple[str, ...]:
        return tuple(category.id for category in self.categories)

    def total(self, category_id: str) -> float:
        return float(self.totals[self.category_ids.index(category_id)])

    def stage_total(self, stage_id: str, category_id: str) -> float:
        values = self.by_stage.get(stage_id)
        if values is None:
            return 0.0
        return float(values[self.category_ids.index(category_id)])


def solve_scaling(
    technosphere: sparse.spmatrix | np.ndarray,
    demand: np.ndarray,
    *,
    settings: EngineSettings | None = None,
) -> ScalingSolution:
    """Solve A s = f with a sparse LU factorization (partial pivoting)."""
    settings = settings or EngineSettings()
    matrix = sparse.csc_matrix(technosphere, dtype=float)
    rhs = np.asarray(demand, dtype=float)
    rows, columns = matrix.shape
    if rows != columns:
        raise SingularSystemError(f"Technosphere matrix must be square, got {rows}x{columns}")
    if not np.all(np.isfinite(matrix.data)):
        raise SingularSystemError("Technosphere matrix has non-finite entries")

    try:
        factor = sparse_linalg.splu(matrix, permc_spec="COLAMD", diag_pivot_thresh=1.0)
    except RuntimeError as exc:
        raise SingularSystemError(f"Technosphere matrix is singular: {exc}") from exc

    scaling = factor.solve(rhs)
    if not np.all(np.isfinite(scaling)):
        raise SingularSystemError("Scaling solution is not finite")

    residual = float(np.max(np.abs(matrix @ scaling - rhs))) if rows else 0.0
    limit = settings.residual_tolerance * max(1.0, float(np.max(np.abs(rhs))) if rows else 1.0)
    if residual > limit:
        raise SingularSystemError(f"No unique solution: residual {residual:.3e} exceeds {limit:.3e}")

    condition = _condition_estimate(matrix, factor)
    findings: list[Finding] = []
    if condition > settings.condition_cap:
        LOGGER.warning(
            "Technosphere ill-conditioned: condition_estimate=%.3e cap=%.3e",
            condition,
            settings.condition_cap,
        )
        findings.append(
            Finding(
                "IllConditioned",
                f"Condition estimate {condition:.3e} exceeds cap {settings.condition_cap:.3e}",
                severity=Severity.WARNING,
            )
        )
    return ScalingSolution(
        scaling=scaling,
        residual=residual,
        condition_estimate=condition,
        findings=tuple(findings),
    )


def characterize(table: CharacterizationTable, inventory: Mapping[str, float]) -> Characterization:
    """h[c] = sum_k Q[c, k] * g[k] over directional inventory amounts."""
    impacts = np.zeros(len(table.categories), dtype=float)
    known = table.known_flows()
    findings: list[Finding] = []
    for flow_id in sorted(inventory):
        amount = float(inventory[flow_id])
        if flow_id not in known:
            if amount != 0:
                findings.append(
                    Finding(
                        "UnknownFlow",
                        f"Environmental flow '{flow_id}' has no characterization factor",
                        severity=Severity.WARNING,
                        subject=flow_id,
                    )
                )
            continue
        for row, category in enumerate(table.categories):
            impacts[row] += table.factor(category.id, flow_id) * amount
    return Characterization(impacts=impacts, findings=tuple(findings))


def assess(
    scenario: Scenario,
    table: CharacterizationTable,
    *,
    settings: EngineSettings | None = None,
) -> AssessmentResult:
    started = monotonic()
    system = matrices(scenario)
    solution = solve_scaling(system.technosphere, system.demand, settings=settings)
    scaling = solution.scaling

    signs = np.array([scenario.flow(flow_id).sign for flow_id in system.environmental_flow_ids], dtype=float)
    signed_inventory = system.intervention @ scaling
    directional = signs * signed_inventory
    characterized = characterize(table, dict(zip(system.environmental_flow_ids, directional.tolist())))

    # Columns of Q carry the flow sign so that Q applies to the signed B.
    q_signed = table.matrix(system.environmental_flow_ids) * signs
    contributions = q_signed @ (system.intervention @ sparse.diags(scaling)).toarray()

    category_count = len(table.categories)
    by_process: dict[str, np.ndarray] = {}
    by_stage: dict[str, np.ndarray] = {stage.value: np.zeros(category_count) for stage in StageId}
    by_tier: dict[str, np.ndarray] = {}
    ai_subtotal = np.zeros(category_count)
    process_stage: dict[str, str] = {}
    process_sub_process: dict[str, str | None] = {}
    process_tier: dict[str, str | None] = {}
    ai_processes: set[str] = set()

    for column, process_id in enumerate(system.process_ids):
        process = scenario.process(process_id)
        values = (
            contributions[:, column].copy()
            if contributions.size
            else np.zeros(category_count)
        )
        by_process[process_id] = values
        stage_key = process.stage.stage_id.value
        by_stage[stage_key] = by_stage[stage_key] + values
        tier_key = process.tier.value if process.tier is not None else UNASSIGNED_TIER
        by_tier[tier_key] = by_tier.get(tier_key, np.zeros(category_count)) + values
        process_stage[process_id] = stage_key
        process_sub_process[process_id] = None if process.stage.sub_process is None else process.stage.sub_process.value
        process_tier[process_id] = None if process.tier is None else process.tier.value
        if process.ai_tagged:
            ai_processes.add(process_id)
            ai_subtotal = ai_subtotal + values

    for tier in Tier:
        by_tier.setdefault(tier.value, np.zeros(category_count))

    result = AssessmentResult(
        scenario_id=scenario.id,
        categories=table.categories,
        totals=characterized.impacts,
        by_process=dict(sorted(by_process.items())),
        by_stage=by_stage,
        by_tier=dict(sorted(by_tier.items())),
        ai_subtotal=ai_subtotal,
        scaling={process_id: float(value) for process_id, value in zip(system.process_ids, scaling)},
        process_stage=process_stage,
        process_sub_process=process_sub_process,
        process_tier=process_tier,
        ai_processes=frozenset(ai_processes),
        findings=[*solution.findings, *characterized.findings],
    )
    for finding in characterized.findings:
        LOGGER.warning("Characterization finding: scenario=%s %s", scenario.id, finding.message)

    LOGGER.info(
        "Assessment finished: scenario=%s processes=%s categories=%s findings=%s elapsed_sec=%.3f",
        scenario.id,
        len(system.process_ids),
        category_count,
        len(result.findings),
        monotonic() - started,
    )
    return result


def _condition_estimate(matrix: sparse.csc_matrix, factor: sparse_linalg.SuperLU) -> float:
    size = matrix.shape[0]
    if size == 0:
        return 1.0
    inverse = sparse_linalg.LinearOperator(
        shape=matrix.shape,
        matvec=factor.solve,
        rmatvec=lambda vector: factor.solve(vector, trans="T"),
        dtype=float,
    )
    try:
        inverse_norm = sparse_linalg.onenormest(inverse)
    except Exception:
        LOGGER.debug("Condition estimate failed; falling back to dense inverse norm", exc_info=True)
        inverse_norm = float(np.linalg.norm(np.linalg.inv(matrix.toarray()), 1))
    return float(sparse_linalg.norm(matrix, 1) * inverse_norm)
