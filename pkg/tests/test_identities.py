"""
Tests for the identity families, the classifier and the residue atlas
"""

import pytest

from unitfrac.core import canonicalize, verify_triple
from unitfrac.exactmath import SmallestFactorTable
from unitfrac.exceptions import ConditionViolationError
from unitfrac.identities import (
    ATLAS_CHAIN,
    FAMILIES,
    apply_family,
    classify,
    families_table,
    possible_exceptions,
    residue_atlas,
    scaled_identity,
    solve_identity,
)
from unitfrac.parametric import corollary_family
from unitfrac.schemas import MethodKind, ResidueStatus


def _ids(n):
    return [m.family_id for m in classify(n)]


class TestApplyFamily:
    @pytest.mark.parametrize(
        "family_id, n, params, expected",
        [
            ("F4", 7, None, (2, 28, 28)),
            ("F8", 97, {"b": 1}, (25, 4850, 970)),
            ("F9", 33, None, (10, 165, 66)),
            ("F11", 33, None, (10, 165, 66)),
            ("F12", 41, None, (12, 492, 82)),
            ("F13", 17, None, (6, 102, 17)),
            ("F17", 241, None, (63, 30366, 1446)),
            ("F1", 6, None, (6, 6, 3)),
        ],
    )
    def test_examples(self, family_id, n, params, expected):
        d = apply_family(family_id, n, params)
        assert d.triple.values == expected
        assert d.family == family_id
        assert verify_triple(n, d.triple)

    def test_condition_violations(self):
        """Unmet conditions raise instead of producing a triple"""
        with pytest.raises(ConditionViolationError):
            apply_family("F4", 9)
        with pytest.raises(ConditionViolationError):
            apply_family("F1", 6, {"m": 4})
        with pytest.raises(ConditionViolationError):
            apply_family("F99", 5)
        with pytest.raises(ConditionViolationError):
            apply_family("F8", 97, {"b": 2})
        with pytest.raises(ConditionViolationError):
            apply_family("F8", 98, {"b": 1})

    def test_condition_error_is_a_value_error(self):
        with pytest.raises(ValueError):
            apply_family("F5", 7)

    def test_corollary_family_method(self):
        d = apply_family("F28", 5)
        assert d.method == MethodKind.COROLLARY
        assert d.triple.values == (5, 10, 2)


class TestClassify:
    def test_even_and_multiple_of_three(self):
        matches = {m.family_id: m.params for m in classify(6)}
        assert matches["F1"] == {"m": 3}
        assert matches["F2"] == {"m": 2}

    def test_three_mod_four(self):
        assert _ids(7) == ["F4", "F25", "F26", "F27"]

    def test_f8_parameters(self):
        matches = {m.family_id: m.params for m in classify(97)}
        assert matches["F8"] == {"l": 4, "b": 1}
        assert solve_identity(97).family == "F8"

    def test_f8_on_square_of_prime(self):
        """841 = 29^2 sits in an open class of both atlases"""
        assert _ids(841) == ["F8"]
        assert classify(841)[0].params == {"l": 35, "b": 9}

    def test_hard_primes_still_have_families(self):
        """409 and 577 defeat the plain split but not every identity"""
        assert _ids(409) == ["F13", "F22"]
        assert _ids(577) == ["F8", "F13", "F16"]
        d = solve_identity(577)
        assert d.params == {"l": 24, "b": 1}
        assert canonicalize(d.triple).values == (145, 33466, 167330)

    def test_lowest_id_wins(self):
        d = solve_identity(409)
        assert d.family == "F13"
        assert canonicalize(d.triple).values == (104, 6135, 638040)

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            classify(1)

    def test_f8_consistency(self):
        """5 | 24l+1 always puts n in F8; 7 | 24l+1 puts it in F10 (7 is 1 mod 3)"""
        for l in range(1, 3001):
            n = 24 * l + 1
            ids = _ids(n)
            if n % 5 == 0:
                assert "F8" in ids, n
            if n % 7 == 0:
                assert "F10" in ids, n

    def test_sound_over_small_n(self):
        """Every classified family yields a verified triple for n < 3000"""
        for n in range(2, 3000):
            for match in classify(n):
                assert not match.unknown
                assert verify_triple(n, apply_family(match.family_id, n, match.params).triple)

    @pytest.mark.slow
    def test_sound_over_parameter_grid(self):
        """Each family over its first 10^4 parameter values"""
        for family in FAMILIES.values():
            if family.id == "F8":
                for l in range(1, 10_001):
                    n = 24 * l + 1
                    match = next((m for m in classify(n) if m.family_id == "F8"), None)
                    if match is not None:
                        apply_family("F8", n, match.params)
            elif family.residue is not None:
                modulus, residue = family.residue
                for t in range(10_000):
                    n = residue + modulus * t
                    if n >= 2 and family.solve(n) is not None:
                        apply_family(family.id, n)
            else:
                fam = corollary_family(family.number - 27)
                for w6 in range(fam.w6_min, fam.w6_min + 10_000):
                    apply_family(family.id, fam.slope * w6 - fam.constant)


class TestScaledIdentity:
    def test_scales_divisor_solution(self):
        d = scaled_identity(841)
        assert d.family == "F3"
        assert d.params["scale"] == 29
        assert canonicalize(d.triple).values == (290, 841, 8410)

    def test_prime_has_no_proper_divisor(self):
        assert scaled_identity(409) is None


class TestResidueAtlas:
    def test_open_classes(self):
        assert possible_exceptions(120) == [1, 49]
        assert possible_exceptions(840) == [1, 121, 169, 289, 361, 529]

    def test_every_residue_classified(self):
        atlas = residue_atlas(840)
        assert [c.residue for c in atlas] == list(range(840))
        assert atlas[769].family == "F24"
        assert atlas[241].family == "F17"
        assert atlas[1].status == ResidueStatus.POSSIBLE_EXCEPTION

    def test_only_chain_moduli(self):
        with pytest.raises(ValueError):
            residue_atlas(100)

    def test_primes_outside_open_classes_are_covered(self, primes_below_10k):
        """A chain family applies to every prime whose class mod 840 is closed"""
        open_classes = set(possible_exceptions(840))
        for p in primes_below_10k:
            if p % 840 in open_classes:
                continue
            assert set(_ids(p)) & set(ATLAS_CHAIN), p

    @pytest.mark.slow
    def test_primes_to_1e5_are_covered(self):
        table = SmallestFactorTable(10**5)
        open_classes = set(possible_exceptions(840))
        for p in range(2, 10**5 + 1):
            if table.smallest_factor(p) != p or p % 840 in open_classes:
                continue
            assert set(_ids(p)) & set(ATLAS_CHAIN), p


def test_families_table():
    rows = families_table()
    assert [row[0] for row in rows] == [f"F{i}" for i in range(1, 32)]
    assert all(len(row) == 4 and all(row) for row in rows)
