"""
The exact verifier and the decomposition constructors every method goes through
"""

import logging
from typing import Dict, Optional, Tuple, Union

from .exceptions import VerificationError
from .schemas import Decomposition, MethodKind, UnitTriple

logger = logging.getLogger(__name__)

TripleLike = Union[UnitTriple, Tuple[int, int, int]]


def _values(t: TripleLike) -> Tuple[int, int, int]:
    if isinstance(t, UnitTriple):
        return t.values
    x, y, z = t
    return (x, y, z)


def verify_triple(n: int, t: TripleLike) -> bool:
    """
    True iff 4/n = 1/x + 1/y + 1/z, checked as n(xy + yz + zx) == 4xyz
    over Python ints.
    """
    x, y, z = _values(t)
    if n < 2 or min(x, y, z) < 1:
        return False
    return n * (x * y + y * z + z * x) == 4 * x * y * z


def canonicalize(t: TripleLike) -> UnitTriple:
    x, y, z = sorted(_values(t))
    return UnitTriple(x=x, y=y, z=z)


def x_bounds(n: int) -> Tuple[int, int]:
    """
    Range of the smallest denominator of any canonical solution.
    1/x < 4/n forces x > n/4; 3/x >= 4/n forces x <= 3n/4.
    """
    if n < 2:
        raise ValueError("x_bounds requires n >= 2")
    return (n // 4 + 1, (3 * n) // 4)


def scale(t: TripleLike, m: int) -> UnitTriple:
    """A solution for n lifted to one for m*n"""
    if m < 1:
        raise ValueError("scale factor must be positive")
    x, y, z = _values(t)
    return UnitTriple(x=m * x, y=m * y, z=m * z)


def build_decomposition(
    n: int,
    triple: TripleLike,
    method: MethodKind,
    *,
    family: Optional[str] = None,
    params: Optional[Dict[str, int]] = None,
) -> Decomposition:
    """
    Verify first, then construct. A failing triple means a generator bug
    and raises VerificationError; nothing unverified is ever returned.
    """
    x, y, z = _values(triple)
    if not verify_triple(n, (x, y, z)):
        label = f"{method.value}({family})" if family else method.value
        logger.error(f"{label} produced ({x}, {y}, {z}) which does not satisfy 4/{n}")
        raise VerificationError(f"{label}: ({x}, {y}, {z}) is not a decomposition of 4/{n}")
    return Decomposition(
        n=n,
        triple=UnitTriple(x=x, y=y, z=z),
        method=method,
        family=family,
        params=dict(params or {}),
    )
