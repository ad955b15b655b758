"""
Tests for the JSON-lines solve cache
"""

import json
import logging

from unitfrac.cache import SolveCache, before_key, miss_key
from unitfrac.config import PipelineConfig
from unitfrac.identities import apply_family
from unitfrac.splitsearch import search_m


def test_hits_survive_a_reload(tmp_path):
    path = tmp_path / "cache.jsonl"
    cache = SolveCache(path)
    decomposition = search_m(3).decomposition
    cache.record_hit("split", decomposition, PipelineConfig())

    reloaded = SolveCache(path)
    assert reloaded.lookup(13, PipelineConfig()) == ("split", decomposition, False)
    # a hit only counts when its stage is allowed
    assert reloaded.lookup(13, PipelineConfig(methods=["identity"])) is None
    # nothing runs ahead of split here, so the hit stands
    assert reloaded.lookup(13, PipelineConfig(methods=["split", "identity"])) == ("split", decomposition, False)


def test_hits_follow_the_stage_order(tmp_path):
    """A reordered run only reuses a hit when the same stages failed ahead of it"""
    path = tmp_path / "cache.jsonl"
    decomposition = search_m(3).decomposition
    SolveCache(path).record_hit("split", decomposition, PipelineConfig(methods=["split", "identity"]))

    reloaded = SolveCache(path)
    assert reloaded.lookup(13, PipelineConfig(methods=["split", "identity"])) is not None
    # identity now runs first and was never tried, so a fresh run could credit it
    assert reloaded.lookup(13, PipelineConfig(methods=["identity", "split"])) is None

    SolveCache(path).record_hit("split", decomposition, PipelineConfig(methods=["identity", "split"]))
    reloaded = SolveCache(path)
    assert reloaded.lookup(13, PipelineConfig(methods=["identity", "split"])) == ("split", decomposition, False)
    assert reloaded.lookup(13, PipelineConfig(methods=["identity", "split"], r1_max=50)) is None
    assert before_key(PipelineConfig(methods=["identity", "split"]), "split") == "identity|r1=100|w5=1000|u5=1000"
    assert before_key(PipelineConfig(methods=["identity", "split"]), "identity") == ""


def test_misses_need_a_matching_key(tmp_path):
    path = tmp_path / "cache.jsonl"
    cfg = PipelineConfig(methods=["split"])
    SolveCache(path).record_miss(409, cfg, inconclusive=False)

    reloaded = SolveCache(path)
    assert reloaded.lookup(409, cfg) == ("", None, False)
    assert reloaded.lookup(409, PipelineConfig(methods=["split"], r1_max=50)) is None
    assert miss_key(cfg) == "split|r1=100|w5=1000|u5=1000"


def test_bad_lines_are_rejected(tmp_path, caplog):
    """Torn lines and triples that fail verification are skipped with a warning"""
    path = tmp_path / "cache.jsonl"
    good = {**apply_family("F4", 7).to_record(), "stage": "identity"}
    forged = {**good, "n": 11}
    path.write_text("\n".join([json.dumps(good), json.dumps(forged), '{"n": 13, "x": 4']) + "\n")

    with caplog.at_level(logging.WARNING, logger="unitfrac.cache"):
        cache = SolveCache(path)
    assert list(cache.hits) == [7]
    assert sum("Ignoring cache line" in r.getMessage() for r in caplog.records) == 2


def test_missing_file_is_empty(tmp_path):
    cache = SolveCache(tmp_path / "absent" / "cache.jsonl")
    assert cache.hits == {} and cache.misses == {}
    cache.record_miss(5, PipelineConfig(), inconclusive=True)
    assert (tmp_path / "absent" / "cache.jsonl").exists()
