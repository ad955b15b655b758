"""
Range sieve over l (n = 24l + 1) or over n directly

Indices are split into chunks and solved in worker processes; results are
merged in index order, so the report does not depend on parallelism. The
cache is read and written only by the parent process.
"""

import csv
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from .cache import SolveCache
from .config import PipelineConfig
from .exactmath import SmallestFactorTable
from .pipeline import solve, solved_by
from .schemas import SieveReport, SolveResult

logger = logging.getLogger(__name__)

KINDS = ("l", "n")
DEFAULT_CHUNK = 200
ProgressCallback = Callable[[Dict[str, object]], None]


def index_to_n(kind: str, index: int) -> int:
    return 24 * index + 1 if kind == "l" else index


def _solve_chunk(job: Tuple[str, List[int], PipelineConfig]) -> List[SolveResult]:
    kind, indices, cfg = job
    # covers n and every x of the split stages; larger values fall back to trial division
    table = SmallestFactorTable(index_to_n(kind, max(indices))) if kind == "l" else None
    return [solve(index_to_n(kind, i), cfg, table=table) for i in indices]


def _chunks(indices: List[int], size: int) -> Iterator[List[int]]:
    for start in range(0, len(indices), size):
        yield indices[start : start + size]


def _progress_event(kind: str, index: int, result: SolveResult, cached: bool) -> Dict[str, object]:
    event: Dict[str, object] = {kind: index, "n": result.n, "solved": result.solved, "cached": cached}
    if result.decomposition is not None:
        event["method"] = result.decomposition.method_tag
        params = result.decomposition.params
        for key in ("r", "a", "b", "r1"):
            if key in params:
                event[key] = params[key]
    elif result.hit_limit:
        event["inconclusive"] = True
    return event


def sieve(
    kind: str,
    lo: int,
    hi: int,
    cfg: Optional[PipelineConfig] = None,
    *,
    methods: Optional[List[str]] = None,
    resume: bool = False,
    chunk: int = DEFAULT_CHUNK,
    progress: Optional[ProgressCallback] = None,
) -> SieveReport:
    """
    Solve every index in [lo, hi] with the methods in the filter and
    aggregate a SieveReport. With resume, cached answers are reused and
    only the rest is solved.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if lo < 1 or hi < lo or (kind == "n" and lo < 2):
        raise ValueError(f"bad {kind} range [{lo}, {hi}]")
    cfg = cfg or PipelineConfig()
    if methods:
        cfg = cfg.restricted(methods)
    cache = SolveCache(cfg.cache_path) if cfg.cache_path else None

    started = time.perf_counter()
    counts: Dict[str, int] = {}
    exceptions: List[int] = []
    inconclusive: List[int] = []
    cached = 0

    def tally(index: int, stage: Optional[str], limit: bool) -> None:
        if stage:
            counts[stage] = counts.get(stage, 0) + 1
        elif limit:
            inconclusive.append(index)
        else:
            exceptions.append(index)

    pending: List[int] = []
    for index in range(lo, hi + 1):
        hit = cache.lookup(index_to_n(kind, index), cfg) if cache and resume else None
        if hit is None:
            pending.append(index)
            continue
        stage, decomposition, limit = hit
        cached += 1
        tally(index, stage or None, limit)
        if progress:
            n = index_to_n(kind, index)
            result = SolveResult(n=n, decomposition=decomposition)
            progress(_progress_event(kind, index, result, cached=True))

    logger.info(f"Sieving {kind} in [{lo}, {hi}]: {len(pending)} to solve, {cached} from cache, methods {cfg.methods}")
    jobs = [(kind, part, cfg) for part in _chunks(pending, chunk)]
    if cfg.parallelism == 1:
        batches: Iterator[List[SolveResult]] = map(_solve_chunk, jobs)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=cfg.parallelism)
        batches = pool.map(_solve_chunk, jobs)
    try:
        for (_, part, _), results in zip(jobs, batches):
            for index, result in zip(part, results):
                stage = solved_by(result)
                tally(index, stage, result.hit_limit)
                if cache:
                    if result.decomposition is not None:
                        cache.record_hit(stage, result.decomposition, cfg)
                    else:
                        cache.record_miss(result.n, cfg, result.hit_limit)
                if progress:
                    progress(_progress_event(kind, index, result, cached=False))
            logger.debug(f"Finished chunk {part[0]}..{part[-1]}")
    finally:
        if pool is not None:
            pool.shutdown()

    exceptions.sort()
    inconclusive.sort()
    if inconclusive:
        logger.warning(f"{len(inconclusive)} indices are inconclusive: {inconclusive[:20]}")
    return SieveReport(
        kind=kind,
        lo=lo,
        hi=hi,
        methods=list(cfg.methods),
        counts=counts,
        exceptions=exceptions,
        inconclusive=inconclusive,
        cached=cached,
        wall_time_s=time.perf_counter() - started,
    )


def write_json(report: SieveReport, path: Path) -> None:
    Path(path).write_text(report.model_dump_json(indent=2), encoding="utf-8")


def render_text(report: SieveReport) -> str:
    """Aligned human summary"""
    size = report.hi - report.lo + 1
    rows = [
        ("range", f"{report.kind} in [{report.lo}, {report.hi}] ({size} indices)"),
        ("methods", ", ".join(report.methods)),
    ]
    rows += [(f"solved by {m}", str(c)) for m, c in sorted(report.counts.items())]
    rows += [
        ("exceptions", f"{len(report.exceptions)} {report.exceptions}"),
        ("inconclusive", f"{len(report.inconclusive)} {report.inconclusive}"),
        ("from cache", str(report.cached)),
        ("wall time", f"{report.wall_time_s:.2f}s"),
    ]
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label.ljust(width)}  {value}" for label, value in rows)


def write_csv(report: SieveReport, path: Path) -> None:
    """Exception table: one row per unresolved index"""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow([report.kind, "n", "status"])
        rows = [(i, "exception") for i in report.exceptions] + [(i, "inconclusive") for i in report.inconclusive]
        for index, status in sorted(rows):
            writer.writerow([index, index_to_n(report.kind, index), status])


def write_report(report: SieveReport, path: Path) -> None:
    """Format chosen by suffix: .json, .csv, anything else gets the text summary"""
    path = Path(path)
    if path.suffix == ".json":
        write_json(report, path)
    elif path.suffix == ".csv":
        write_csv(report, path)
    else:
        path.write_text(render_text(report) + "\n", encoding="utf-8")
    logger.info(f"Wrote sieve report to {path}")


def progress_writer(handle) -> ProgressCallback:
    def emit(event: Dict[str, object]) -> None:
        handle.write(json.dumps(event) + "\n")
        handle.flush()

    return emit
