"""
Parametric solutions for primes by residue mod 4

p = 3 (mod 4) has three closed forms. p = 1 (mod 4) is searched over
(w5, u5): with w4 = 4*w5 + 3 and w3 = w5 + (p+3)/4, any u5 for which
denom = w4*u5 - w3 divides u5^2 gives w2 = u5^2/denom, v4 = w4*w2 - u5 and

    4/p = 1/(u5*p) + 1/(v4*p) + 1/w3

Fixing w2 = 1 turns the search into linear prime families in w6.
"""

import logging
from typing import Dict, Iterator, List, Optional

from .core import build_decomposition
from .exactmath import divisors, factorize, gcd
from .exceptions import ConditionViolationError, ResidueMismatchError
from .schemas import Case3Entry, CorollaryFamily, Decomposition, MethodKind, ParametricWitness

logger = logging.getLogger(__name__)

CASE2_FAMILIES = ("F25", "F26", "F27")


def _require_residue(p: int, residue: int) -> None:
    if p < 2 or p % 4 != residue:
        raise ResidueMismatchError(f"{p} is not {residue} mod 4")


def case2_triple(family_id: str, p: int) -> tuple:
    """Closed form for p = 3 (mod 4), u = (p+1)/4"""
    _require_residue(p, 3)
    u = (p + 1) // 4
    if family_id == "F25":
        return (2 * p * u, 2 * p * u, u)
    if family_id == "F26":
        return (2 * u, 2 * u, p * u)
    if family_id == "F27":
        return (p * u, u + 1, u * (u + 1))
    raise ValueError(f"{family_id} is not a p = 3 (mod 4) closed form")


def case2_forms(p: int) -> List[Decomposition]:
    _require_residue(p, 3)
    u = (p + 1) // 4
    return [
        build_decomposition(p, case2_triple(fid, p), MethodKind.IDENTITY, family=fid, params={"u": u})
        for fid in CASE2_FAMILIES
    ]


def parametric_step(p: int, w5: int, u5: int) -> Optional[ParametricWitness]:
    """
    One (w5, u5) step. u5 must exceed floor(w3/w4) so the denominator
    is positive.
    """
    _require_residue(p, 1)
    if w5 < 0 or u5 < 1:
        raise ConditionViolationError(f"need w5 >= 0 and u5 >= 1, got w5={w5}, u5={u5}")
    w4 = 4 * w5 + 3
    w3 = w5 + (p + 3) // 4
    if u5 <= w3 // w4:
        raise ConditionViolationError(f"u5={u5} must exceed {w3 // w4} for p={p}, w5={w5}")
    denom = w4 * u5 - w3
    square = u5 * u5
    if square % denom:
        return None
    w2 = square // denom
    return ParametricWitness(p=p, w5=w5, u5=u5, w2=w2, v4=w4 * w2 - u5, w3=w3, w4=w4)


def witness_decomposition(witness: ParametricWitness) -> Decomposition:
    return build_decomposition(
        witness.p,
        (witness.u5 * witness.p, witness.v4 * witness.p, witness.w3),
        MethodKind.PARAMETRIC,
        params={"w5": witness.w5, "u5": witness.u5, "w2": witness.w2, "v4": witness.v4, "w3": witness.w3},
    )


def iter_parametric(p: int, w5_max: int, u5_max: int, *, w5_min: int = 0) -> Iterator[ParametricWitness]:
    """Witnesses in (w5, u5) order, both bounds inclusive"""
    _require_residue(p, 1)
    base = (p + 3) // 4
    for w5 in range(w5_min, w5_max + 1):
        w4 = 4 * w5 + 3
        w3 = w5 + base
        for u5 in range(max(1, w3 // w4 + 1), u5_max + 1):
            denom = w4 * u5 - w3
            square = u5 * u5
            if square % denom == 0:
                w2 = square // denom
                yield ParametricWitness(p=p, w5=w5, u5=u5, w2=w2, v4=w4 * w2 - u5, w3=w3, w4=w4)


def parametric_search(p: int, w5_max: int, u5_max: int) -> List[ParametricWitness]:
    witnesses = list(iter_parametric(p, w5_max, u5_max))
    logger.debug(f"Parametric search for p={p} (w5 <= {w5_max}, u5 <= {u5_max}) found {len(witnesses)} witnesses")
    return witnesses


def parametric_first(p: int, w5_max: int, u5_max: int) -> Optional[ParametricWitness]:
    return next(iter_parametric(p, w5_max, u5_max), None)


def slice_counts(p: int, w5_max: int, u5_max: int) -> Dict[int, int]:
    """Witness count per w5 slice; a zero means that slice is exhausted to u5_max"""
    counts = {w5: 0 for w5 in range(w5_max + 1)}
    for witness in iter_parametric(p, w5_max, u5_max):
        counts[witness.w5] += 1
    return counts


def remark_holds(witness: ParametricWitness) -> bool:
    """u5*v4*(4w5+3) == ((p+3)/4 + w5)*(u5+v4)"""
    lhs = witness.u5 * witness.v4 * (4 * witness.w5 + 3)
    rhs = ((witness.p + 3) // 4 + witness.w5) * (witness.u5 + witness.v4)
    return lhs == rhs


def case3_primes_from(u5: int, v4: int) -> List[Case3Entry]:
    """
    Every (w2, w3, w4, p) reachable from a fixed pair (u5, v4): w2 runs
    over the common divisors of u5+v4 and u5*v4. p is not tested for
    primality.
    """
    if u5 < 1 or v4 < 1:
        raise ConditionViolationError("u5 and v4 must be positive")
    total, product = u5 + v4, u5 * v4
    entries = []
    for w2 in divisors(factorize(gcd(total, product))):
        w4 = total // w2
        w3 = product // w2
        p = 4 * w3 - w4
        if p > 0:
            entries.append(Case3Entry(w2=w2, w3=w3, w4=w4, p=p))
    return entries


def corollary_family(u5: int) -> CorollaryFamily:
    """
    w2 = 1 forces u5 + v4 = 4*w6 - 1, giving p = (16*u5 - 4)*w6 - (4*u5^2 + 4*u5 - 1).
    """
    if u5 < 1:
        raise ConditionViolationError("u5 must be positive")
    slope = 16 * u5 - 4
    constant = 4 * u5 * u5 + 4 * u5 - 1
    # v4 = 4*w6 - u5 - 1 >= 1 and p > 0
    w6_min = max(-(-(u5 + 2) // 4), constant // slope + 1)
    return CorollaryFamily(u5=u5, slope=slope, constant=constant, offset=(-constant) % slope, w6_min=w6_min)


def corollary_families(u5_max: int) -> List[CorollaryFamily]:
    if u5_max < 1:
        raise ConditionViolationError("u5_max must be positive")
    return [corollary_family(u5) for u5 in range(1, u5_max + 1)]


def corollary_decomposition(u5: int, w6: int, *, family: Optional[str] = None) -> Decomposition:
    fam = corollary_family(u5)
    if w6 < fam.w6_min:
        raise ConditionViolationError(f"w6={w6} is below {fam.w6_min} for u5={u5}")
    p = fam.slope * w6 - fam.constant
    v4 = 4 * w6 - u5 - 1
    return build_decomposition(
        p,
        (u5 * p, v4 * p, u5 * v4),
        MethodKind.COROLLARY,
        family=family,
        params={"u5": u5, "w6": w6, "w7": (p - fam.offset) // fam.slope, "v4": v4},
    )


def corollary_match(n: int, u5: int) -> Optional[int]:
    """w6 placing n in the u5 corollary family, if any"""
    fam = corollary_family(u5)
    if (n + fam.constant) % fam.slope:
        return None
    w6 = (n + fam.constant) // fam.slope
    return w6 if w6 >= fam.w6_min else None
