"""
Exact integer substrate for every search
Primality, factorization, divisor enumeration and gcd over Python ints,
with gmpy2 doing the modular arithmetic and numpy backing the
smallest-prime-factor table used by the sieve.

All functions are pure. Randomized internals take an explicit seed so a
run can be replayed.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import gmpy2
import numpy as np

from .exceptions import ResourceLimitError

logger = logging.getLogger(__name__)

MAX_FACTOR_BITS = 96
DEFAULT_FACTOR_BUDGET = 2_000_000
DEFAULT_DIVISOR_CAP = 10**6

# The first twelve primes are a complete Miller-Rabin witness set below this bound (> 2^64)
_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# 4^-64 = 2^-128
_PROBABILISTIC_ROUNDS = 64
_TRIAL_LIMIT = 1000


def _primes_below(limit: int) -> List[int]:
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return [i for i in range(limit) if sieve[i]]


_SMALL_PRIMES = tuple(_primes_below(_TRIAL_LIMIT))


def check_width(value: int, bits: int = 128) -> int:
    """
    Guard a value that is about to enter fixed-width storage.
    Raises ResourceLimitError instead of letting it wrap.
    """
    if value < 0 or value.bit_length() > bits:
        raise ResourceLimitError(f"{value} does not fit in {bits} unsigned bits")
    return value


def gcd(a: int, b: int) -> int:
    """Greatest common divisor of two non-negative integers, not both zero"""
    if a < 0 or b < 0:
        raise ValueError("gcd is defined here for non-negative integers only")
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    return int(gmpy2.gcd(a, b))


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = gmpy2.powmod(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = gmpy2.powmod(x, 2, n)
        if x == n - 1:
            return True
    return False


def is_prime(n: int, *, seed: Optional[int] = None) -> bool:
    """
    Miller-Rabin primality test.

    Deterministic below 3.3e24 (so for every 64-bit input) using the first
    twelve primes as witnesses. Above that bound 64 random bases are drawn
    from random.Random(seed), giving an error probability below 2^-128.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < _TRIAL_LIMIT * _TRIAL_LIMIT:
        return True

    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    if n < _DETERMINISTIC_BOUND:
        witnesses: Iterable[int] = _WITNESSES
    else:
        rng = random.Random(seed)
        witnesses = [rng.randrange(2, n - 1) for _ in range(_PROBABILISTIC_ROUNDS)]
    return all(_strong_probable_prime(n, a, d, s) for a in witnesses)


@dataclass(frozen=True)
class Factorization:
    """
    Prime factorization of base as ((prime, exponent), ...) with strictly
    increasing primes. factorize(1) has no factors.
    """

    base: int
    factors: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        primes = [p for p, _ in self.factors]
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise ValueError("primes must be strictly increasing")
        if any(e < 1 for _, e in self.factors):
            raise ValueError("exponents must be positive")
        if math.prod(p**e for p, e in self.factors) != self.base:
            raise ValueError(f"factors do not multiply to {self.base}")

    @classmethod
    def from_counts(cls, counts: Dict[int, int]) -> "Factorization":
        factors = tuple(sorted(counts.items()))
        return cls(base=math.prod(p**e for p, e in factors), factors=factors)

    @property
    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    @property
    def divisor_count(self) -> int:
        return math.prod(e + 1 for _, e in self.factors)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.factors)

    def __mul__(self, other: "Factorization") -> "Factorization":
        return combine(self, other)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def combine(f: Factorization, g: Factorization) -> Factorization:
    """Factorization of f.base * g.base without refactoring"""
    counts = f.as_dict()
    for p, e in g.factors:
        counts[p] = counts.get(p, 0) + e
    return Factorization(base=f.base * g.base, factors=tuple(sorted(counts.items())))


def square(f: Factorization) -> Factorization:
    return Factorization(base=f.base * f.base, factors=tuple((p, 2 * e) for p, e in f.factors))


class _Budget:
    """Iteration allowance shared by every Pollard-Brent call of one factorize()"""

    def __init__(self, limit: int):
        self.remaining = limit

    def spend(self, steps: int) -> None:
        self.remaining -= steps
        if self.remaining < 0:
            raise ResourceLimitError("factorization work budget exhausted")


def _brent(n: int, rng: random.Random, budget: _Budget) -> int:
    """Non-trivial factor of the odd composite n (Pollard rho, Brent's cycle detection)"""
    mn = gmpy2.mpz(n)
    while True:
        y = gmpy2.mpz(rng.randrange(1, n))
        c = gmpy2.mpz(rng.randrange(1, n))
        m = 128
        g = r = q = gmpy2.mpz(1)
        x = ys = y
        while g == 1:
            x = y
            for _ in range(int(r)):
                y = (y * y + c) % mn
            k = 0
            while k < r and g == 1:
                ys = y
                steps = min(m, int(r) - k)
                for _ in range(steps):
                    y = (y * y + c) % mn
                    q = q * abs(x - y) % mn
                budget.spend(steps)
                g = gmpy2.gcd(q, mn)
                k += m
            r *= 2
        if g == mn:
            # batch overshot, walk back one step at a time
            while True:
                ys = (ys * ys + c) % mn
                budget.spend(1)
                g = gmpy2.gcd(abs(x - ys), mn)
                if g > 1:
                    break
        if g != mn:
            return int(g)
        logger.debug(f"Pollard-Brent cycle collapsed on {n}, retrying with a new constant")


def factorize(
    n: int,
    *,
    budget: int = DEFAULT_FACTOR_BUDGET,
    seed: int = 0,
    table: Optional["SmallestFactorTable"] = None,
) -> Factorization:
    """
    Complete prime factorization of n >= 1.

    Trial division by primes below 1000, then Pollard-Brent on what is left.
    budget caps the total rho iterations; running out raises
    ResourceLimitError so the caller can mark the input inconclusive.
    """
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    if n.bit_length() > MAX_FACTOR_BITS:
        raise ResourceLimitError(f"refusing to factor a {n.bit_length()}-bit number")
    if table is not None and n <= table.limit:
        return table.factorize(n)

    counts: Dict[int, int] = {}
    m = n
    trial_complete = True
    for p in _SMALL_PRIMES:
        if p * p > m:
            trial_complete = False
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            counts[p] = e

    if m > 1:
        if not trial_complete:
            counts[m] = counts.get(m, 0) + 1
        else:
            rng = random.Random(seed)
            allowance = _Budget(budget)
            stack = [m]
            while stack:
                c = stack.pop()
                if is_prime(c, seed=seed):
                    counts[c] = counts.get(c, 0) + 1
                    continue
                root = int(gmpy2.isqrt(c))
                if root * root == c:
                    stack.extend((root, root))
                    continue
                d = _brent(c, rng, allowance)
                stack.extend((d, c // d))

    return Factorization(base=n, factors=tuple(sorted(counts.items())))


def divisors(
    f: Factorization,
    *,
    limit: Optional[int] = None,
    cap: int = DEFAULT_DIVISOR_CAP,
) -> List[int]:
    """
    Divisors of f.base in increasing order, optionally only those <= limit.
    More than cap divisors raises ResourceLimitError.
    """
    if limit is None and f.divisor_count > cap:
        raise ResourceLimitError(f"{f.base} has {f.divisor_count} divisors (cap {cap})")
    divs = [1]
    for p, e in f.factors:
        grown = []
        for d in divs:
            q = d
            for _ in range(e):
                q *= p
                if limit is not None and q > limit:
                    break
                grown.append(q)
        divs.extend(grown)
        if len(divs) > cap:
            raise ResourceLimitError(f"divisor enumeration of {f.base} exceeded cap {cap}")
    divs.sort()
    return divs


class SmallestFactorTable:
    """
    Smallest-prime-factor sieve up to limit, so that every factorization
    below limit is a chain of table lookups. The sieve builds one per worker.
    """

    def __init__(self, limit: int):
        # uint32 storage
        check_width(limit, 32)
        spf = np.zeros(limit + 1, dtype=np.uint32)
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p] == 0:
                block = spf[p * p :: p]
                block[block == 0] = p
        self._spf = spf
        self.limit = limit
        logger.debug(f"Built smallest-factor table up to {limit}")

    def smallest_factor(self, n: int) -> int:
        if n < 2 or n > self.limit:
            raise ValueError(f"{n} outside table range [2, {self.limit}]")
        p = int(self._spf[n])
        return p or n

    def factorize(self, n: int) -> Factorization:
        if n < 1 or n > self.limit:
            raise ValueError(f"{n} outside table range [1, {self.limit}]")
        counts: Dict[int, int] = {}
        m = n
        while m > 1:
            p = int(self._spf[m]) or m
            counts[p] = counts.get(p, 0) + 1
            m //= p
        return Factorization(base=n, factors=tuple(sorted(counts.items())))
