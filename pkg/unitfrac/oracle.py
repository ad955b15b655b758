"""
Brute-force enumeration of every canonical solution, the ground truth the
other methods are checked against
"""

import logging
from typing import List, Optional

from .core import x_bounds
from .exactmath import divisors, factorize, gcd, square
from .schemas import OracleResult, UnitTriple

logger = logging.getLogger(__name__)


def enumerate_all(n: int, max_solutions: Optional[int] = None) -> OracleResult:
    """
    All (x, y, z) with x <= y <= z and 4/n = 1/x + 1/y + 1/z, in
    lexicographic order.

    For each x the remainder num/den = 4/n - 1/x (lowest terms) must equal
    1/y + 1/z with y <= z, so den/num < y <= 2den/num. Writing
    (num*y - den)(num*z - den) = den^2, the first factor runs over divisors
    d <= den of den^2, giving y = (d + den)/num and z = (den^2/d + den)/num.
    """
    if n < 2:
        raise ValueError("enumerate_all requires n >= 2")
    if max_solutions is not None and max_solutions < 1:
        raise ValueError("max_solutions must be positive")
    solutions: List[UnitTriple] = []
    lo, hi = x_bounds(n)
    for x in range(lo, hi + 1):
        num, den = 4 * x - n, n * x
        g = gcd(num, den)
        num, den = num // g, den // g
        den_squared = square(factorize(den))
        for d in divisors(den_squared, limit=den):
            if (d + den) % num:
                continue
            y = (d + den) // num
            e = den_squared.base // d
            if (e + den) % num or y < x:
                continue
            z = (e + den) // num
            solutions.append(UnitTriple(x=x, y=y, z=z))
            if max_solutions is not None and len(solutions) >= max_solutions:
                logger.debug(f"Oracle for n={n} truncated at {max_solutions} solutions")
                return OracleResult(n=n, solutions=solutions, exhausted=False)
    return OracleResult(n=n, solutions=solutions, exhausted=True)


def count_solutions(n: int) -> int:
    return len(enumerate_all(n).solutions)
