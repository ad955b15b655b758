"""
Append-only JSON-lines cache for long sieve runs

Two record shapes share the file:
  hit   {"n", "x", "y", "z", "method", "params", "stage", "before"}  decomposition record plus solving stage
  miss  {"n", "miss": true, "key": ..., "inconclusive": bool}

A miss is keyed by the method set and bounds it was computed under, so a
rerun with the same settings does no solver work. A hit carries the
ordered stages that ran and failed before its stage; it is reused only
when the new order puts the same failed stages first, or none at all, so
a resumed run credits the stage a fresh run would. Every hit is re-verified
on load; a record that fails is logged and ignored.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from .config import PipelineConfig
from .schemas import Decomposition

logger = logging.getLogger(__name__)


def _bounds(cfg: PipelineConfig) -> str:
    return f"r1={cfg.r1_max}|w5={cfg.w5_max}|u5={cfg.u5_max}"


def miss_key(cfg: PipelineConfig) -> str:
    return f"{','.join(sorted(cfg.methods))}|{_bounds(cfg)}"


def before_key(cfg: PipelineConfig, stage: str) -> str:
    """Ordered stages ahead of stage in cfg plus their bounds; empty when stage runs first"""
    earlier = cfg.methods[: cfg.methods.index(stage)]
    return f"{','.join(earlier)}|{_bounds(cfg)}" if earlier else ""


class SolveCache:
    """In-memory view of the cache file plus an appender. Only one writer per file."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.hits: Dict[int, List[Tuple[str, str, Decomposition]]] = {}
        self.misses: Dict[Tuple[int, str], bool] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        loaded = rejected = 0
        with open(self.path, "r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    if record.get("miss"):
                        self.misses[(int(record["n"]), record["key"])] = bool(record.get("inconclusive"))
                    else:
                        decomposition = Decomposition.from_record(record)
                        self.hits.setdefault(decomposition.n, []).append(
                            (record["stage"], record.get("before", ""), decomposition)
                        )
                    loaded += 1
                except (ValueError, KeyError, ValidationError) as e:
                    # a torn final line after a crash lands here too
                    rejected += 1
                    logger.warning(f"Ignoring cache line {line_no} of {self.path}: {e}")
        logger.info(f"Loaded {loaded} cache records from {self.path} ({rejected} rejected)")

    def lookup(self, n: int, cfg: PipelineConfig) -> Optional[Tuple[str, Optional[Decomposition], bool]]:
        """
        (stage, decomposition, inconclusive) for a cached answer valid under cfg,
        or None. A hit counts only if its stage is in cfg.methods and the
        stages cfg runs ahead of it are the ones that failed when it was found.
        """
        for stage, before, decomposition in self.hits.get(n, []):
            if stage not in cfg.methods:
                continue
            expected = before_key(cfg, stage)
            if expected == "" or expected == before:
                return stage, decomposition, False
        key = (n, miss_key(cfg))
        if key in self.misses:
            return "", None, self.misses[key]
        return None

    def record_hit(self, stage: str, decomposition: Decomposition, cfg: PipelineConfig) -> None:
        before = before_key(cfg, stage)
        self._append({**decomposition.to_record(), "stage": stage, "before": before})
        self.hits.setdefault(decomposition.n, []).append((stage, before, decomposition))

    def record_miss(self, n: int, cfg: PipelineConfig, inconclusive: bool) -> None:
        key = miss_key(cfg)
        self._append({"n": n, "miss": True, "key": key, "inconclusive": inconclusive})
        self.misses[(n, key)] = inconclusive

    def _append(self, record: Dict[str, object]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(record, sort_keys=True) + "\n")
