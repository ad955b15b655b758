"""
Divisor-pair split search

Subtract 1/x for x = floor(n/4) + r. What is left is (4x - n)/(n x); if its
numerator, optionally scaled by r1, splits as a + b with both parts
dividing r1*n*x, then

    4/n = 1/x + 1/(r1*n*x/b) + 1/(r1*n*x/a)

For n = 4m+1 the numerator is 4r - 1 and a <= b means a <= 2r - 1.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Iterator, List, NamedTuple, Optional, Tuple

from .core import build_decomposition, x_bounds
from .exactmath import (
    DEFAULT_DIVISOR_CAP,
    DEFAULT_FACTOR_BUDGET,
    Factorization,
    SmallestFactorTable,
    combine,
    divisors,
    factorize,
    gcd,
)
from .exceptions import ConditionViolationError, ResourceLimitError
from .schemas import Decomposition, MethodKind, SplitOutcome, SplitWitness

logger = logging.getLogger(__name__)

DEFAULT_CHUNK = 250


class UnitPair(NamedTuple):
    """num/den = 1/y + 1/z found with scale r2 and the split r2*num = a + b"""

    r2: int
    a: int
    b: int
    y: int
    z: int


def divisor_pair_split(
    target: int,
    modulus: int,
    *,
    factorization: Optional[Factorization] = None,
    budget: int = DEFAULT_FACTOR_BUDGET,
    cap: int = DEFAULT_DIVISOR_CAP,
) -> Optional[Tuple[int, int]]:
    """
    (a, b) with a + b = target, a <= b and both dividing modulus, smallest a first.
    Only divisors of modulus up to target/2 are generated.
    """
    if target < 2 or modulus < 1:
        raise ConditionViolationError(f"need target >= 2 and modulus >= 1, got {target}, {modulus}")
    f = factorization if factorization is not None else factorize(modulus, budget=budget)
    for a in divisors(f, limit=target // 2, cap=cap):
        if modulus % (target - a) == 0:
            return (a, target - a)
    return None


def _witness(n: int, x: int, r: int, r1: int, a: int, b: int) -> SplitWitness:
    d = gcd(a, b)
    y1, z1 = a // d, b // d
    return SplitWitness(r=r, a=a, b=b, r1=r1, d=d, y1=y1, z1=z1, g=r1 * n * x // (d * y1 * z1))


def make_witness(n: int, r: int, a: int, b: int, r1: int = 1) -> SplitWitness:
    """Witness for offset r from the bare (r, a, b, r1); replay() checks it"""
    return _witness(n, n // 4 + r, r, r1, a, b)


def replay(witness: SplitWitness, n: int) -> Tuple[int, int, int]:
    """Triple rebuilt from (r, a, b, r1) alone"""
    x = n // 4 + witness.r
    if witness.a + witness.b != (4 * x - n) * witness.r1:
        raise ConditionViolationError(f"a + b must equal (4x - n) r1 for n={n}, x={x}")
    scaled = witness.r1 * n * x
    if scaled % witness.a or scaled % witness.b:
        raise ConditionViolationError(f"a={witness.a}, b={witness.b} must both divide {scaled}")
    return (x, scaled // witness.b, scaled // witness.a)


def _decomposition(n: int, witness: SplitWitness) -> Decomposition:
    method = MethodKind.SPLIT if witness.r1 == 1 else MethodKind.MULTIPLIER_SPLIT
    return build_decomposition(n, replay(witness, n), method, params=witness.model_dump())


def _factor(value: int, table: Optional[SmallestFactorTable], budget: int) -> Factorization:
    return factorize(value, budget=budget, table=table)


def _try_split(
    n: int,
    x: int,
    r1: int,
    nx: Factorization,
    table: Optional[SmallestFactorTable],
    budget: int,
    cap: int,
) -> Optional[SplitWitness]:
    target = (4 * x - n) * r1
    if target < 2:
        return None
    f = combine(_factor(r1, table, budget), nx)
    pair = divisor_pair_split(target, r1 * n * x, factorization=f, cap=cap)
    if pair is None:
        return None
    return _witness(n, x, x - n // 4, r1, *pair)


def split_at(
    n: int,
    x: int,
    r1: int = 1,
    *,
    table: Optional[SmallestFactorTable] = None,
    budget: int = DEFAULT_FACTOR_BUDGET,
    cap: int = DEFAULT_DIVISOR_CAP,
) -> Optional[SplitWitness]:
    """Try a single first denominator x with multiplier r1"""
    nx = combine(_factor(n, table, budget), _factor(x, table, budget))
    return _try_split(n, x, r1, nx, table, budget, cap)


def split_search(
    n: int,
    *,
    r1_max: int = 1,
    r1_min: int = 1,
    index: Optional[int] = None,
    table: Optional[SmallestFactorTable] = None,
    budget: int = DEFAULT_FACTOR_BUDGET,
    cap: int = DEFAULT_DIVISOR_CAP,
) -> SplitOutcome:
    """
    Scan r = 1 .. floor(3n/4) - floor(n/4), then r1, then a; first hit wins.
    Offsets that hit a resource limit are recorded, and an unsolved
    outcome with any of them is inconclusive.
    """
    if n < 2:
        raise ValueError("split search requires n >= 2")
    if r1_min < 1 or r1_max < r1_min:
        raise ConditionViolationError(f"bad multiplier range [{r1_min}, {r1_max}]")
    index = n if index is None else index
    lo, hi = x_bounds(n)
    nf = _factor(n, table, budget)
    limit_hits: List[int] = []
    for x in range(lo, hi + 1):
        try:
            # n*x is factored once per offset and shared by every multiplier
            nx = combine(nf, _factor(x, table, budget))
            for r1 in range(r1_min, r1_max + 1):
                witness = _try_split(n, x, r1, nx, table, budget, cap)
                if witness is not None:
                    return SplitOutcome(
                        index=index,
                        n=n,
                        solved=True,
                        witness=witness,
                        decomposition=_decomposition(n, witness),
                        limit_hits=limit_hits,
                    )
        except ResourceLimitError as e:
            logger.warning(f"Resource limit at n={n}, x={x}: {e}")
            limit_hits.append(x - n // 4)
    return SplitOutcome(index=index, n=n, solved=False, inconclusive=bool(limit_hits), limit_hits=limit_hits)


def search_m(m: int, **kwargs) -> SplitOutcome:
    """n = 4m + 1, x = m + r for r = 1 .. 2m"""
    if m < 1:
        raise ValueError("search_m requires m >= 1")
    return split_search(4 * m + 1, index=m, **kwargs)


def search_l(l: int, **kwargs) -> SplitOutcome:
    """n = 24l + 1, x = 6l + r for r = 1 .. 12l"""
    if l < 1:
        raise ValueError("search_l requires l >= 1")
    return split_search(24 * l + 1, index=l, **kwargs)


def multiplier_search(l: int, r1_max: int, *, r1_min: int = 1, **kwargs) -> SplitOutcome:
    """search_l with the numerator scaled by r1 = r1_min .. r1_max"""
    if l < 1:
        raise ValueError("multiplier_search requires l >= 1")
    return split_search(24 * l + 1, r1_max=r1_max, r1_min=r1_min, index=l, **kwargs)


def iter_witnesses(
    n: int,
    *,
    r1_max: int = 1,
    budget: int = DEFAULT_FACTOR_BUDGET,
    cap: int = DEFAULT_DIVISOR_CAP,
) -> Iterator[SplitWitness]:
    """Every witness in (r, r1, a) order, not only the first"""
    lo, hi = x_bounds(n)
    nf = factorize(n, budget=budget)
    for x in range(lo, hi + 1):
        for r1 in range(1, r1_max + 1):
            target = (4 * x - n) * r1
            if target < 2:
                continue
            modulus = r1 * n * x
            f = combine(combine(factorize(r1), nf), factorize(x, budget=budget))
            for a in divisors(f, limit=target // 2, cap=cap):
                if modulus % (target - a) == 0:
                    yield _witness(n, x, x - n // 4, r1, a, target - a)


def unit_pair_split(numerator: int, denominator: int, r2_max: int) -> Optional[UnitPair]:
    """
    Write numerator/denominator as 1/y + 1/z by scaling both by r2 and
    splitting the scaled numerator into two divisors of the scaled denominator.
    """
    if numerator < 1 or denominator < 1:
        raise ConditionViolationError("numerator and denominator must be positive")
    df = factorize(denominator)
    for r2 in range(1, r2_max + 1):
        target = r2 * numerator
        if target < 2:
            continue
        modulus = r2 * denominator
        pair = divisor_pair_split(target, modulus, factorization=combine(factorize(r2), df))
        if pair is not None:
            a, b = pair
            return UnitPair(r2=r2, a=a, b=b, y=modulus // a, z=modulus // b)
    return None


def _search_chunk(job: Tuple[int, int, int, int, int]) -> List[SplitOutcome]:
    l_lo, l_hi, r1_max, budget, cap = job
    table = SmallestFactorTable(24 * l_hi + 1)
    return [
        split_search(24 * l + 1, r1_max=r1_max, index=l, table=table, budget=budget, cap=cap)
        for l in range(l_lo, l_hi + 1)
    ]


def iter_outcomes(
    l_lo: int,
    l_hi: int,
    *,
    r1_max: int = 1,
    parallelism: int = 1,
    chunk: int = DEFAULT_CHUNK,
    budget: int = DEFAULT_FACTOR_BUDGET,
    cap: int = DEFAULT_DIVISOR_CAP,
) -> Iterator[SplitOutcome]:
    """
    Outcomes for l = l_lo .. l_hi in ascending l, whatever the parallelism.
    Chunks go to worker processes; map() keeps their order.
    """
    if l_lo < 1 or l_hi < l_lo:
        raise ValueError(f"bad l range [{l_lo}, {l_hi}]")
    jobs = [(lo, min(lo + chunk - 1, l_hi), r1_max, budget, cap) for lo in range(l_lo, l_hi + 1, chunk)]
    if parallelism == 1:
        for job in jobs:
            yield from _search_chunk(job)
        return
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        for outcomes in pool.map(_search_chunk, jobs):
            yield from outcomes


class ExceptionList(list):
    """
    Ascending l left unsolved by the split search. The ones in
    .inconclusive hit a resource limit and are not known exceptions.
    """

    def __init__(self, values: Iterable[int] = (), inconclusive: Iterable[int] = ()):
        super().__init__(values)
        self.inconclusive: List[int] = sorted(inconclusive)

    @property
    def definite(self) -> List[int]:
        flagged = set(self.inconclusive)
        return [l for l in self if l not in flagged]


def exception_sieve(l_lo: int, l_hi: int, *, parallelism: int = 1, **kwargs) -> ExceptionList:
    """
    Every l in range whose plain split search fails, ascending. l that hit
    a resource limit stay in the list and are flagged in .inconclusive.
    """
    exceptions, inconclusive = [], []
    for outcome in iter_outcomes(l_lo, l_hi, parallelism=parallelism, **kwargs):
        if outcome.solved:
            continue
        if outcome.inconclusive:
            logger.warning(f"l={outcome.index} is inconclusive (limits hit at r={outcome.limit_hits})")
            inconclusive.append(outcome.index)
        exceptions.append(outcome.index)
    logger.info(
        f"Exception sieve over l in [{l_lo}, {l_hi}] found {len(exceptions)} exceptions"
        f" ({len(inconclusive)} inconclusive)"
    )
    return ExceptionList(exceptions, inconclusive)
