"""
Tests for the exact verifier, canonical form and the Decomposition model
"""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from unitfrac.core import build_decomposition, canonicalize, scale, verify_triple, x_bounds
from unitfrac.exceptions import VerificationError
from unitfrac.schemas import Decomposition, MethodKind, UnitTriple


class TestVerify:
    def test_known_solutions(self):
        assert verify_triple(13, (4, 26, 52))
        assert verify_triple(13, (4, 20, 130))
        assert verify_triple(409, (104, 6544, 85072))
        assert verify_triple(1726201, (431566, 13447105790, 98022323785))
        assert verify_triple(6, UnitTriple.of(6, 6, 3))

    def test_rejects_wrong_triples(self):
        assert not verify_triple(13, (4, 20, 65))
        assert not verify_triple(7, (2, 2, 2))
        assert not verify_triple(13, (4, 26, 53))

    def test_rejects_degenerate_inputs(self):
        assert not verify_triple(1, (1, 2, 2))
        assert not verify_triple(5, (0, 5, 10))
        assert not verify_triple(5, (-2, 5, 10))

    def test_order_does_not_matter(self):
        for perm in itertools.permutations((104, 6544, 85072)):
            assert verify_triple(409, perm)

    @given(st.integers(min_value=1, max_value=10**6), st.integers(min_value=1, max_value=10**9))
    def test_scaling_preserves_solutions(self, k, m):
        """A solution for n = 4k - 1 scaled by m solves m*n"""
        n = 4 * k - 1
        t = (k, 2 * n * k, 2 * n * k)
        assert verify_triple(n, t)
        assert verify_triple(m * n, scale(t, m))


class TestCanonicalForm:
    def test_sorts(self):
        assert canonicalize((85072, 104, 6544)) == UnitTriple.of(104, 6544, 85072)
        assert str(canonicalize((3, 1, 2))) == "(1, 2, 3)"

    def test_x_bounds(self):
        assert x_bounds(13) == (4, 9)
        assert x_bounds(409) == (103, 306)
        assert x_bounds(2) == (1, 1)
        with pytest.raises(ValueError):
            x_bounds(1)

    def test_scale_rejects_zero(self):
        with pytest.raises(ValueError):
            scale((1, 2, 2), 0)


class TestDecomposition:
    def test_build_verifies(self):
        d = build_decomposition(13, (4, 26, 52), MethodKind.SPLIT, params={"r": 1, "a": 1, "b": 2})
        assert d.triple.values == (4, 26, 52)
        assert d.method_tag == "split"

    def test_build_rejects_bad_triple(self):
        with pytest.raises(VerificationError):
            build_decomposition(13, (4, 26, 53), MethodKind.MANUAL)

    def test_model_rejects_bad_triple(self):
        with pytest.raises(ValidationError):
            Decomposition(n=13, triple=UnitTriple.of(4, 20, 65), method=MethodKind.MANUAL)

    def test_family_tag(self):
        d = build_decomposition(7, (2, 28, 28), MethodKind.IDENTITY, family="F4", params={"m": 1})
        assert d.method_tag == "identity(F4)"

    def test_record_round_trip(self):
        d = build_decomposition(7, (2, 28, 28), MethodKind.IDENTITY, family="F4", params={"m": 1})
        record = d.to_record()
        assert record == {"n": 7, "x": 2, "y": 28, "z": 28, "method": "identity(F4)", "params": {"m": 1}}
        assert Decomposition.from_record(record) == d

    def test_record_with_bad_triple_rejected(self):
        record = {"n": 7, "x": 2, "y": 28, "z": 29, "method": "identity(F4)", "params": {}}
        with pytest.raises(ValueError):
            Decomposition.from_record(record)

    def test_record_with_unknown_tag_rejected(self):
        record = {"n": 7, "x": 2, "y": 28, "z": 28, "method": "Identity F4", "params": {}}
        with pytest.raises(ValueError):
            Decomposition.from_record(record)
