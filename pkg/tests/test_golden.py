"""
Tests for the twelve worked multiplier-split decompositions
"""

import pytest

from unitfrac.core import verify_triple
from unitfrac.golden import GOLDEN_L, check_item, golden_items, golden_suite
from unitfrac.schemas import UnitTriple


def test_every_item_verifies_and_replays():
    report = golden_suite()
    assert report.passed
    assert len(report.items) == 12
    assert [item.l for item in report.items] == list(GOLDEN_L)


@pytest.mark.parametrize(
    "label, n, triple",
    [
        ("i", 409, (104, 6544, 85072)),
        ("iv", 9601, (2405, 1248130, 46180810)),
        ("viii", 329617, (82405, 10864835554, 54324177770)),
        ("xii", 1726201, (431566, 13447105790, 98022323785)),
    ],
)
def test_selected_items(label, n, triple):
    item = next(i for i in golden_items() if i.label == label)
    assert item.n == n
    assert verify_triple(n, triple)
    assert sorted(item.triple.values) == sorted(triple)


def test_mislabeled_items_are_flagged():
    notes = {item.label: item.note for item in golden_suite().items}
    assert "102001" in notes["viii"]
    assert "1724209" in notes["xii"]
    assert all(note is None for label, note in notes.items() if label not in ("viii", "xii"))


def test_tampered_triple_fails():
    item = golden_items()[0]
    tampered = item.model_copy(update={"triple": UnitTriple.of(104, 6544, 85073)})
    checked = check_item(tampered)
    assert not checked.verified
    assert not checked.replayed


def test_bad_witness_is_noted():
    item = golden_items()[0].model_copy(update={"b": 12})
    checked = check_item(item)
    assert checked.verified
    assert not checked.replayed
    assert "does not replay" in checked.note
