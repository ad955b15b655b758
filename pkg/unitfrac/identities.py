"""
Closed-form identity families F1..F31 and the classifier that picks them

Each family has a condition on n that determines its parameters, and a
generator turning (n, params) into a triple. Every generated triple goes
through core.build_decomposition, so a wrong formula can never escape.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from .core import build_decomposition, scale
from .exactmath import DEFAULT_FACTOR_BUDGET, divisors, factorize
from .exceptions import ConditionViolationError, ResourceLimitError
from .parametric import case2_triple, corollary_decomposition, corollary_match
from .schemas import (
    Decomposition,
    FamilyMatch,
    MethodKind,
    ResidueClassification,
    ResidueStatus,
)

logger = logging.getLogger(__name__)

Params = Dict[str, int]
Triple = Tuple[int, int, int]


@dataclass(frozen=True)
class IdentityFamily:
    id: str
    condition: str
    formula: str
    derivation: str
    # (M, r) when the condition is exactly n = r (mod M)
    residue: Optional[Tuple[int, int]] = None
    solve: Optional[Callable[[int], Optional[Params]]] = None
    generate: Optional[Callable[[int, Params], Triple]] = None
    method: MethodKind = MethodKind.IDENTITY

    @property
    def number(self) -> int:
        return int(self.id[1:])


def _residue_family(
    fid: str,
    modulus: int,
    residue: int,
    name: str,
    offset: int,
    step: int,
    minimum: int,
    generate: Callable[[int, Params], Triple],
    condition: str,
    formula: str,
    derivation: str,
) -> IdentityFamily:
    """A family whose single parameter is (n + offset) / step on the class n = residue (mod modulus)"""

    def solve(n: int) -> Optional[Params]:
        if n % modulus != residue:
            return None
        value = (n + offset) // step
        return {name: value} if value >= minimum else None

    return IdentityFamily(fid, condition, formula, derivation, (modulus, residue), solve, generate)


def _f8_generate(n: int, params: Params) -> Triple:
    l, b = params["l"], params["b"]
    q = 3 * b + 2
    f = n * (6 * l + 1) // q
    return (6 * l + 1, q * (b + 1) * f, (b + 1) * f)


def _corollary_family(fid: str, u5: int) -> IdentityFamily:
    def solve(n: int) -> Optional[Params]:
        w6 = corollary_match(n, u5)
        return {"u5": u5, "w6": w6} if w6 is not None else None

    def generate(n: int, params: Params) -> Triple:
        return corollary_decomposition(params["u5"], params["w6"]).triple.values

    slope = 16 * u5 - 4
    constant = 4 * u5 * u5 + 4 * u5 - 1
    return IdentityFamily(
        fid,
        f"n = {slope}w6 - {constant}",
        f"(u5 n, v4 n, u5 v4), u5={u5}, v4=4w6-{u5 + 1}",
        f"w2 = 1 slice of the (w5, u5) search, u5 = {u5}",
        None,
        solve,
        generate,
        MethodKind.COROLLARY,
    )


def _case2_family(fid: str, formula: str) -> IdentityFamily:
    def solve(n: int) -> Optional[Params]:
        return {"u": (n + 1) // 4} if n % 4 == 3 else None

    def generate(n: int, params: Params) -> Triple:
        return case2_triple(fid, n)

    return IdentityFamily(fid, "n = 4u - 1", formula, "p = 3 (mod 4) closed form", (4, 3), solve, generate)


# F8 is classified separately since it needs factorizations
FAMILIES: Dict[str, IdentityFamily] = {
    f.id: f
    for f in [
        _residue_family("F1", 2, 0, "m", 0, 2, 1, lambda n, p: (2 * p["m"], 2 * p["m"], p["m"]),
                        "n = 2m", "(2m, 2m, m)", "n even"),
        _residue_family("F2", 3, 0, "m", 0, 3, 1, lambda n, p: (2 * p["m"], 2 * p["m"], 3 * p["m"]),
                        "n = 3m", "(2m, 2m, 3m)", "n divisible by 3"),
        _residue_family("F3", 3, 2, "m", -2, 3, 0, lambda n, p: (n, p["m"] + 1, (p["m"] + 1) * n),
                        "n = 3m + 2", "(3m+2, m+1, (m+1)(3m+2))", "n = 2 (mod 3)"),
        _residue_family("F4", 4, 3, "m", -3, 4, 0,
                        lambda n, p: (p["m"] + 1, 2 * n * (p["m"] + 1), 2 * n * (p["m"] + 1)),
                        "n = 4m + 3", "(m+1, 2n(m+1), 2n(m+1))", "n = 3 (mod 4)"),
        _residue_family("F5", 8, 5, "k", 3, 8, 1, lambda n, p: (2 * p["k"], 2 * p["k"] * n, p["k"] * n),
                        "n = 8k - 3", "(2k, 2kn, kn)", "m = 2k - 1 in n = 4m + 1"),
        _residue_family("F6", 24, 9, "l", 15, 24, 1,
                        lambda n, p: (6 * p["l"] - 3, 2 * (2 * p["l"] - 1) * n, 2 * (2 * p["l"] - 1) * n),
                        "n = 24l - 15", "(6l-3, 2(2l-1)n, 2(2l-1)n)", "k = 3l - 2 in n = 8k + 1"),
        _residue_family("F7", 24, 17, "l", 7, 24, 1,
                        lambda n, p: (6 * p["l"] - 1, 2 * p["l"] * (6 * p["l"] - 1) * n, 2 * p["l"] * n),
                        "n = 24l - 7", "(6l-1, 2l(6l-1)n, 2ln)", "k = 3l - 1 in n = 8k + 1"),
        IdentityFamily("F8", "n = 24l + 1, 3b + 2 divides (6l+1)(24l+1)",
                       "(6l+1, (3b+2)(b+1)f, (b+1)f), f = n(6l+1)/(3b+2)",
                       "4/n - 1/(6l+1) = 3/(n(6l+1))", None, None, _f8_generate),
        _residue_family("F9", 40, 33, "b", 7, 40, 1,
                        lambda n, p: (10 * p["b"], 5 * p["b"] * n, 2 * p["b"] * n),
                        "n = 40b - 7", "(10b, 5bn, 2bn)", "3l + 1 = 5b"),
        _residue_family("F10", 56, 49, "b", 7, 56, 1,
                        lambda n, p: (14 * p["b"], 4 * p["b"] * n, 4 * p["b"] * n),
                        "n = 56b - 7", "(14b, 4bn, 4bn)", "3l + 1 = 7b"),
        _residue_family("F11", 56, 33, "b", -33, 56, 0,
                        lambda n, p: (2 * (7 * p["b"] + 5), (p["b"] + 1) * (7 * p["b"] + 5) * n,
                                      2 * (p["b"] + 1) * n),
                        "n = 56b + 33", "(2(7b+5), (b+1)(7b+5)n, 2(b+1)n)", "3l + 1 = 7b + 5"),
        _residue_family("F12", 56, 41, "b", -41, 56, 0,
                        lambda n, p: (2 * (7 * p["b"] + 6), 2 * (p["b"] + 1) * (7 * p["b"] + 6) * n,
                                      2 * (p["b"] + 1) * n),
                        "n = 56b + 41", "(2(7b+6), 2(b+1)(7b+6)n, 2(b+1)n)", "3l + 1 = 7b + 6"),
        _residue_family("F13", 56, 17, "b", -17, 56, 0,
                        lambda n, p: (2 * (7 * p["b"] + 3), 2 * (2 * p["b"] + 1) * (7 * p["b"] + 3) * n,
                                      (2 * p["b"] + 1) * n),
                        "n = 56b + 17", "(2(7b+3), 2(2b+1)(7b+3)n, (2b+1)n)", "3l + 1 = 7b + 3"),
        _residue_family("F14", 120, 25, "b", 95, 120, 1,
                        lambda n, p: (30 * p["b"] - 23, 10 * (24 * p["b"] - 19) * (30 * p["b"] - 23),
                                      2 * (24 * p["b"] - 19) * (30 * p["b"] - 23)),
                        "n = 120b - 95", "(30b-23, 10(24b-19)(30b-23), 2(24b-19)(30b-23))",
                        "l = 5b - 4 in n = 24l + 1"),
        _residue_family("F15", 120, 73, "b", 47, 120, 1,
                        lambda n, p: (30 * p["b"] - 10, 5 * n * (3 * p["b"] - 1), 2 * n * (3 * p["b"] - 1)),
                        "n = 120b - 47", "(30b-10, 5n(3b-1), 2n(3b-1))", "l = 5b - 2 in n = 24l + 1"),
        _residue_family("F16", 120, 97, "b", 23, 120, 1,
                        lambda n, p: (30 * p["b"] - 5, 10 * n * (6 * p["b"] - 1), 2 * n * (6 * p["b"] - 1)),
                        "n = 120b - 23", "(30b-5, 10n(6b-1), 2n(6b-1))", "l = 5b - 1 in n = 24l + 1"),
        _residue_family("F17", 840, 241, "c", 599, 840, 1,
                        lambda n, p: (210 * p["c"] - 147, 42 * (10 * p["c"] - 7) * n, 2 * (10 * p["c"] - 7) * n),
                        "n = 840c - 599", "(210c-147, 42(10c-7)n, 2(10c-7)n)", "n = 120b + 1, b = 7c - 5"),
        _residue_family("F18", 840, 481, "c", 359, 840, 1,
                        lambda n, p: (210 * p["c"] - 88, (15 * p["c"] - 6) * (105 * p["c"] - 44) * n,
                                      2 * (15 * p["c"] - 6) * n),
                        "n = 840c - 359", "(210c-88, (15c-6)(105c-44)n, 2(15c-6)n)", "n = 120b + 1, b = 7c - 3"),
        _residue_family("F19", 840, 601, "c", 239, 840, 1,
                        lambda n, p: (210 * p["c"] - 58, 2 * (15 * p["c"] - 4) * (105 * p["c"] - 29) * n,
                                      2 * (15 * p["c"] - 4) * n),
                        "n = 840c - 239", "(210c-58, 2(15c-4)(105c-29)n, 2(15c-4)n)",
                        "n = 120b + 1, b = 7c - 2"),
        _residue_family("F20", 840, 721, "c", 119, 840, 1,
                        lambda n, p: (210 * p["c"] - 28, 28 * (15 * p["c"] - 2) * (120 * p["c"] - 17),
                                      28 * (15 * p["c"] - 2) * (120 * p["c"] - 17)),
                        "n = 840c - 119", "(210c-28, 28(15c-2)(120c-17), 28(15c-2)(120c-17))",
                        "n = 120b + 1, b = 7c - 1"),
        _residue_family("F21", 840, 49, "c", 791, 840, 1,
                        lambda n, p: (210 * p["c"] - 196, 28 * (120 * p["c"] - 113) * (15 * p["c"] - 14),
                                      28 * (120 * p["c"] - 113) * (15 * p["c"] - 14)),
                        "n = 840c - 791", "(210c-196, 28(120c-113)(15c-14), 28(120c-113)(15c-14))",
                        "n = 120b - 71, b = 7c - 6"),
        _residue_family("F22", 840, 409, "c", 431, 840, 1,
                        lambda n, p: (210 * p["c"] - 106, 30 * (2 * p["c"] - 1) * (105 * p["c"] - 53) * n,
                                      15 * (2 * p["c"] - 1) * n),
                        "n = 840c - 431", "(210c-106, 30(2c-1)(105c-53)n, 15(2c-1)n)",
                        "n = 120b - 71, b = 7c - 3"),
        _residue_family("F23", 840, 649, "c", 191, 840, 1,
                        lambda n, p: (210 * p["c"] - 46, 3 * (5 * p["c"] - 1) * (105 * p["c"] - 23) * n,
                                      6 * (5 * p["c"] - 1) * n),
                        "n = 840c - 191", "(210c-46, 3(5c-1)(105c-23)n, 6(5c-1)n)", "n = 120b - 71, b = 7c - 1"),
        _residue_family("F24", 840, 769, "c", 71, 840, 1,
                        lambda n, p: (210 * p["c"] - 16, 2 * (15 * p["c"] - 1) * (105 * p["c"] - 8) * n,
                                      2 * (15 * p["c"] - 1) * n),
                        "n = 840c - 71", "(210c-16, 2(15c-1)(105c-8)n, 2(15c-1)n)", "n = 120b - 71, b = 7c"),
        _case2_family("F25", "(n(n+1)/2, n(n+1)/2, (n+1)/4)"),
        _case2_family("F26", "((n+1)/2, (n+1)/2, n(n+1)/4)"),
        _case2_family("F27", "(n(n+1)/4, (n+1)/4 + 1, ((n+1)/4)((n+1)/4 + 1))"),
        _corollary_family("F28", 1),
        _corollary_family("F29", 2),
        _corollary_family("F30", 3),
        _corollary_family("F31", 4),
    ]
}

# Families whose residue conditions make up the mod-120 and mod-840 coverage chain
ATLAS_CHAIN = ("F1", "F2", "F3", "F4", "F5", "F6", "F7", "F14", "F15", "F16",
               "F17", "F18", "F19", "F20", "F21", "F22", "F23", "F24")
ATLAS_MODULI = (120, 840)


def families_table() -> List[Tuple[str, str, str, str]]:
    """(id, condition, triple, derivation) rows in id order"""
    return [(f.id, f.condition, f.formula, f.derivation) for f in FAMILIES.values()]


def _f8_factor(l: int, budget: int) -> Optional[int]:
    """Smallest prime q = 2 (mod 3) dividing (6l+1)(24l+1)"""
    candidates = [
        q
        for base in (6 * l + 1, 24 * l + 1)
        for q in factorize(base, budget=budget).primes
        if q % 3 == 2
    ]
    return min(candidates) if candidates else None


def classify(n: int, *, factor_budget: int = DEFAULT_FACTOR_BUDGET) -> List[FamilyMatch]:
    """
    Every family whose condition n satisfies, in ascending id order.
    F8 is reported with unknown=True when factoring hits its budget.
    """
    if n < 2:
        raise ValueError("classify requires n >= 2")
    matches: List[FamilyMatch] = []
    for family in FAMILIES.values():
        if family.id == "F8":
            if n % 24 != 1:
                continue
            l = (n - 1) // 24
            try:
                q = _f8_factor(l, factor_budget)
            except ResourceLimitError as e:
                logger.warning(f"F8 undecided for n={n}: {e}")
                matches.append(FamilyMatch(family_id="F8", params={"l": l}, unknown=True))
                continue
            if q is not None:
                matches.append(FamilyMatch(family_id="F8", params={"l": l, "b": (q - 2) // 3}))
            continue
        params = family.solve(n)
        if params is not None:
            matches.append(FamilyMatch(family_id=family.id, params=params))
    return matches


def _check_condition(family: IdentityFamily, n: int, params: Params) -> None:
    if family.id == "F8":
        if n % 24 != 1:
            raise ConditionViolationError(f"F8 needs n = 1 (mod 24), got {n}")
        l = (n - 1) // 24
        b = params.get("b")
        if params.get("l", l) != l or b is None or b < 1:
            raise ConditionViolationError(f"F8 needs l={l} and b >= 1, got {params}")
        if ((6 * l + 1) * n) % (3 * b + 2):
            raise ConditionViolationError(f"{3 * b + 2} divides neither 6l+1 nor 24l+1 for n={n}")
        return
    solved = family.solve(n)
    if solved is None:
        raise ConditionViolationError(f"{n} does not satisfy {family.id}: {family.condition}")
    if params and any(params.get(k, v) != v for k, v in solved.items()):
        raise ConditionViolationError(f"{family.id} parameters for n={n} are {solved}, got {params}")


def apply_family(family_id: str, n: int, params: Optional[Params] = None) -> Decomposition:
    """Verified decomposition of 4/n from one family"""
    family = FAMILIES.get(family_id)
    if family is None:
        raise ConditionViolationError(f"unknown family {family_id}")
    params = dict(params or {})
    _check_condition(family, n, params)
    if family.id != "F8":
        params = {**family.solve(n), **params}
    else:
        params.setdefault("l", (n - 1) // 24)
    return build_decomposition(n, family.generate(n, params), family.method, family=family.id, params=params)


def solve_identity(n: int, *, factor_budget: int = DEFAULT_FACTOR_BUDGET) -> Optional[Decomposition]:
    """Lowest-numbered family that applies, or None"""
    for match in classify(n, factor_budget=factor_budget):
        if not match.unknown:
            return apply_family(match.family_id, n, match.params)
    return None


def scaled_identity(
    n: int,
    *,
    factor_budget: int = DEFAULT_FACTOR_BUDGET,
) -> Optional[Decomposition]:
    """
    For composite n without a direct family: solve a proper divisor d
    (ascending) and scale by n/d.
    """
    for d in divisors(factorize(n, budget=factor_budget)):
        if d == 1 or d == n:
            continue
        inner = solve_identity(d, factor_budget=factor_budget)
        if inner is None:
            continue
        m = n // d
        return build_decomposition(
            n,
            scale(inner.triple, m),
            inner.method,
            family=inner.family,
            params={**inner.params, "scale": m},
        )
    return None


def residue_atlas(modulus: int) -> List[ResidueClassification]:
    """
    Classify every residue mod 120 or 840 by the first chain family whose
    residue condition covers it.
    """
    if modulus not in ATLAS_MODULI:
        raise ValueError(f"modulus must be one of {ATLAS_MODULI}")
    chain = [FAMILIES[fid] for fid in ATLAS_CHAIN if modulus % FAMILIES[fid].residue[0] == 0]
    atlas = []
    for r in range(modulus):
        family = next((f for f in chain if r % f.residue[0] == f.residue[1]), None)
        atlas.append(
            ResidueClassification(
                modulus=modulus,
                residue=r,
                status=ResidueStatus.RESOLVED if family else ResidueStatus.POSSIBLE_EXCEPTION,
                family=family.id if family else None,
            )
        )
    return atlas


def possible_exceptions(modulus: int) -> List[int]:
    return [c.residue for c in residue_atlas(modulus) if c.status == ResidueStatus.POSSIBLE_EXCEPTION]
