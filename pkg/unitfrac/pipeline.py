"""
solve(): run the configured methods cheapest first and return the first
verified decomposition, with a report for every stage that ran
"""

import logging
from typing import Callable, Dict, Optional, Tuple

from .config import PipelineConfig
from .core import build_decomposition
from .exactmath import SmallestFactorTable
from .exceptions import ResourceLimitError
from .identities import scaled_identity, solve_identity
from .oracle import enumerate_all
from .parametric import parametric_first, witness_decomposition
from .schemas import Decomposition, MethodKind, SolveResult, StageReport
from .splitsearch import split_search

logger = logging.getLogger(__name__)

StageOutcome = Tuple[Optional[Decomposition], StageReport]


def _identity(n: int, cfg: PipelineConfig, table: Optional[SmallestFactorTable]) -> StageOutcome:
    found = solve_identity(n, factor_budget=cfg.factor_budget)
    if found is None:
        found = scaled_identity(n, factor_budget=cfg.factor_budget)
    if found is None:
        return None, StageReport(method="identity", status="exhausted", detail="no family applies to n or a divisor")
    detail = found.family if "scale" not in found.params else f"{found.family} scaled by {found.params['scale']}"
    return found, StageReport(method="identity", status="solved", detail=detail)


def _split(
    n: int,
    cfg: PipelineConfig,
    table: Optional[SmallestFactorTable],
    *,
    stage: str,
    r1_min: int,
    r1_max: int,
) -> StageOutcome:
    if r1_max < r1_min:
        return None, StageReport(method=stage, status="skipped", detail=f"r1_max={r1_max}")
    outcome = split_search(
        n, r1_min=r1_min, r1_max=r1_max, table=table, budget=cfg.factor_budget, cap=cfg.divisor_cap
    )
    if outcome.solved:
        w = outcome.witness
        return outcome.decomposition, StageReport(method=stage, status="solved", detail=f"r={w.r} r1={w.r1} a={w.a} b={w.b}")
    if outcome.inconclusive:
        return None, StageReport(method=stage, status="limit", detail=f"limits at r={outcome.limit_hits}")
    return None, StageReport(method=stage, status="exhausted", detail=f"r1 in [{r1_min}, {r1_max}]")


def _plain_split(n: int, cfg: PipelineConfig, table: Optional[SmallestFactorTable]) -> StageOutcome:
    return _split(n, cfg, table, stage="split", r1_min=1, r1_max=1)


def _multiplier(n: int, cfg: PipelineConfig, table: Optional[SmallestFactorTable]) -> StageOutcome:
    return _split(n, cfg, table, stage="multiplier", r1_min=2, r1_max=cfg.r1_max)


def _parametric(n: int, cfg: PipelineConfig, table: Optional[SmallestFactorTable]) -> StageOutcome:
    if n % 4 != 1:
        return None, StageReport(method="parametric", status="not-applicable", detail="n is not 1 mod 4")
    witness = parametric_first(n, cfg.w5_max, cfg.u5_max)
    if witness is None:
        return None, StageReport(
            method="parametric", status="exhausted", detail=f"w5 <= {cfg.w5_max}, u5 <= {cfg.u5_max}"
        )
    return witness_decomposition(witness), StageReport(
        method="parametric", status="solved", detail=f"w5={witness.w5} u5={witness.u5}"
    )


def _oracle(n: int, cfg: PipelineConfig, table: Optional[SmallestFactorTable]) -> StageOutcome:
    if n > cfg.oracle_max_n:
        return None, StageReport(method="oracle", status="skipped", detail=f"n > {cfg.oracle_max_n}")
    result = enumerate_all(n, max_solutions=1)
    if not result.solutions:
        return None, StageReport(method="oracle", status="exhausted")
    t = result.solutions[0]
    return build_decomposition(n, t, MethodKind.ORACLE), StageReport(method="oracle", status="solved")


STAGES: Dict[str, Callable[[int, PipelineConfig, Optional[SmallestFactorTable]], StageOutcome]] = {
    "identity": _identity,
    "split": _plain_split,
    "multiplier": _multiplier,
    "parametric": _parametric,
    "oracle": _oracle,
}


def solve(n: int, cfg: Optional[PipelineConfig] = None, *, table: Optional[SmallestFactorTable] = None) -> SolveResult:
    """
    First verified decomposition of 4/n over cfg.methods. Resource limits
    are reported per stage and the pipeline moves on.
    """
    if n < 2:
        raise ValueError("solve requires n >= 2")
    cfg = cfg or PipelineConfig()
    stages = []
    for method in cfg.methods:
        try:
            found, report = STAGES[method](n, cfg, table)
        except ResourceLimitError as e:
            logger.warning(f"{method} stage hit a resource limit for n={n}: {e}")
            found, report = None, StageReport(method=method, status="limit", detail=str(e))
        stages.append(report)
        logger.debug(f"n={n} {method}: {report.status} {report.detail or ''}")
        if found is not None:
            return SolveResult(n=n, decomposition=found, stages=stages)
    logger.info(f"No decomposition of 4/{n} found by {', '.join(cfg.methods)}")
    return SolveResult(n=n, stages=stages)


def solved_by(result: SolveResult) -> Optional[str]:
    """Stage name that produced the decomposition"""
    for stage in result.stages:
        if stage.status == "solved":
            return stage.method
    return None
