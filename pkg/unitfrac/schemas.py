"""
Pydantic models for unitfrac
Decompositions, witnesses, search outcomes and the reports the CLI and
the HTTP service return
"""

import re
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class MethodKind(str, Enum):
    """How a decomposition was found"""

    IDENTITY = "identity"
    SPLIT = "split"
    MULTIPLIER_SPLIT = "multiplier-split"
    PARAMETRIC = "parametric"
    COROLLARY = "corollary"
    ORACLE = "oracle"
    MANUAL = "manual"


_TAG_PATTERN = re.compile(r"^(?P<method>[a-z-]+)(?:\((?P<family>F\d+)\))?$")


class UnitTriple(BaseModel):
    """
    Three positive denominators (x, y, z)
    """

    model_config = ConfigDict(frozen=True)

    x: int = Field(..., ge=1, description="First denominator")
    y: int = Field(..., ge=1, description="Second denominator")
    z: int = Field(..., ge=1, description="Third denominator")

    @classmethod
    def of(cls, x: int, y: int, z: int) -> "UnitTriple":
        return cls(x=x, y=y, z=z)

    @property
    def values(self) -> Tuple[int, int, int]:
        return (self.x, self.y, self.z)

    def __str__(self) -> str:
        return f"({self.x}, {self.y}, {self.z})"


class Decomposition(BaseModel):
    """
    A verified triple for 4/n plus the witness that produced it.
    Construction fails if the triple does not satisfy the equation.
    """

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "n": 409,
                "triple": {"x": 104, "y": 6544, "z": 85072},
                "method": "multiplier-split",
                "family": None,
                "params": {"r": 2, "a": 1, "b": 13, "r1": 2},
            }
        },
    )

    n: int = Field(..., ge=2, description="Denominator of 4/n")
    triple: UnitTriple
    method: MethodKind
    family: Optional[str] = Field(None, description="Identity family id (F1..F31) when relevant")
    params: Dict[str, int] = Field(default_factory=dict, description="Witness parameters")

    @model_validator(mode="after")
    def _check_equation(self) -> "Decomposition":
        from .core import verify_triple

        if not verify_triple(self.n, self.triple):
            raise ValueError(f"4/{self.n} != 1/{self.triple.x} + 1/{self.triple.y} + 1/{self.triple.z}")
        return self

    @property
    def method_tag(self) -> str:
        if self.family:
            return f"{self.method.value}({self.family})"
        return self.method.value

    def to_record(self) -> Dict[str, object]:
        """Flat JSON record used by the cache and the CLI"""
        return {
            "n": self.n,
            "x": self.triple.x,
            "y": self.triple.y,
            "z": self.triple.z,
            "method": self.method_tag,
            "params": dict(self.params),
        }

    @classmethod
    def from_record(cls, record: Dict[str, object]) -> "Decomposition":
        match = _TAG_PATTERN.match(str(record["method"]))
        if not match:
            raise ValueError(f"unknown method tag {record['method']!r}")
        return cls(
            n=record["n"],
            triple=UnitTriple(x=record["x"], y=record["y"], z=record["z"]),
            method=MethodKind(match.group("method")),
            family=match.group("family"),
            params=record.get("params") or {},
        )


class FamilyMatch(BaseModel):
    """One identity family whose condition n satisfies"""

    family_id: str
    params: Dict[str, int] = Field(default_factory=dict)
    unknown: bool = Field(False, description="Applicability undecided because a resource limit was hit")


class ResidueStatus(str, Enum):
    RESOLVED = "resolved"
    POSSIBLE_EXCEPTION = "possible-exception"


class ResidueClassification(BaseModel):
    modulus: int
    residue: int
    status: ResidueStatus
    family: Optional[str] = None


class SplitWitness(BaseModel):
    """
    Certificate of a divisor-pair split: a + b = (4r-1)*r1 where a and b
    both divide r1*n*x, with x the first denominator.
    """

    model_config = ConfigDict(frozen=True)

    r: int = Field(..., ge=1)
    a: int = Field(..., ge=1)
    b: int = Field(..., ge=1)
    r1: int = Field(1, ge=1)
    d: int = Field(..., ge=1)
    y1: int = Field(..., ge=1)
    z1: int = Field(..., ge=1)
    g: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _check_parts(self) -> "SplitWitness":
        if self.a > self.b:
            raise ValueError("split witness requires a <= b")
        if self.d * self.y1 != self.a or self.d * self.z1 != self.b:
            raise ValueError("a, b must equal d*y1, d*z1")
        return self


class SplitOutcome(BaseModel):
    index: int = Field(..., description="l for n = 24l+1, m for n = 4m+1, or n itself")
    n: int
    solved: bool
    witness: Optional[SplitWitness] = None
    decomposition: Optional[Decomposition] = None
    inconclusive: bool = False
    limit_hits: List[int] = Field(default_factory=list, description="Offsets r that hit a resource limit")

    @model_validator(mode="after")
    def _check_solved(self) -> "SplitOutcome":
        present = self.witness is not None and self.decomposition is not None
        if self.solved != present:
            raise ValueError("solved outcomes carry both witness and decomposition, unsolved carry neither")
        return self

    def progress_event(self) -> Dict[str, object]:
        event: Dict[str, object] = {"index": self.index, "n": self.n, "solved": self.solved}
        if self.witness is not None:
            event.update(r=self.witness.r, a=self.witness.a, b=self.witness.b, r1=self.witness.r1)
        if self.inconclusive:
            event["inconclusive"] = True
        return event


class ParametricWitness(BaseModel):
    """
    (w5, u5) witness for p = 1 (mod 4): x = u5*p, y = v4*p, z = w3
    """

    model_config = ConfigDict(frozen=True)

    p: int = Field(..., ge=2)
    w5: int = Field(..., ge=0)
    u5: int = Field(..., ge=1)
    w2: int = Field(..., ge=1)
    v4: int = Field(..., ge=1)
    w3: int = Field(..., ge=1)
    w4: int = Field(..., ge=1)
    w6: Optional[int] = None
    w7: Optional[int] = None

    @model_validator(mode="after")
    def _check_algebra(self) -> "ParametricWitness":
        if self.u5 * self.v4 != self.w2 * self.w3:
            raise ValueError("u5*v4 must equal w2*w3")
        if self.u5 + self.v4 != self.w2 * self.w4:
            raise ValueError("u5+v4 must equal w2*w4")
        if self.p != 4 * self.w3 - self.w4:
            raise ValueError("p must equal 4*w3 - w4")
        return self


class CorollaryFamily(BaseModel):
    """
    Linear family of primes reached with w2 = 1 and a fixed u5:
    p = slope*w6 - constant = slope*w7 + offset.
    """

    u5: int = Field(..., ge=1)
    slope: int
    constant: int
    offset: int
    w6_min: int

    def describe(self) -> str:
        return f"p = {self.slope}w6 - {self.constant} = {self.slope}w7 + {self.offset}"


class Case3Entry(BaseModel):
    w2: int
    w3: int
    w4: int
    p: int


class OracleResult(BaseModel):
    n: int
    solutions: List[UnitTriple]
    exhausted: bool


class StageReport(BaseModel):
    """Outcome of one pipeline stage for one n"""

    method: str
    status: str = Field(..., description="solved, exhausted, skipped, not-applicable or limit")
    detail: Optional[str] = None


class SolveResult(BaseModel):
    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "n": 6,
                "decomposition": {
                    "n": 6,
                    "triple": {"x": 6, "y": 6, "z": 3},
                    "method": "identity",
                    "family": "F1",
                    "params": {"m": 3},
                },
                "stages": [{"method": "identity", "status": "solved", "detail": "F1"}],
            }
        }
    )

    n: int
    decomposition: Optional[Decomposition] = None
    stages: List[StageReport] = Field(default_factory=list)

    @property
    def solved(self) -> bool:
        return self.decomposition is not None

    @property
    def hit_limit(self) -> bool:
        return any(stage.status == "limit" for stage in self.stages)


class SieveReport(BaseModel):
    """
    Per-range statistics. Every index is counted exactly once: solved
    (under its method tag), exception, or inconclusive.
    """

    kind: str = Field(..., description="'l' for n = 24l+1, 'n' for a direct range")
    lo: int
    hi: int
    methods: List[str]
    counts: Dict[str, int] = Field(default_factory=dict)
    exceptions: List[int] = Field(default_factory=list)
    inconclusive: List[int] = Field(default_factory=list)
    cached: int = Field(0, description="Indices answered from the cache")
    wall_time_s: float = 0.0

    @model_validator(mode="after")
    def _check_totals(self) -> "SieveReport":
        size = self.hi - self.lo + 1
        if sum(self.counts.values()) + len(self.exceptions) + len(self.inconclusive) != size:
            raise ValueError("counts, exceptions and inconclusive must cover the range exactly once")
        if set(self.exceptions) & set(self.inconclusive):
            raise ValueError("an index cannot be both an exception and inconclusive")
        return self


class VerifyRequest(BaseModel):
    model_config = ConfigDict(
        json_schema_extra={"example": {"n": 1726201, "x": 431566, "y": 13447105790, "z": 98022323785}}
    )

    n: int = Field(..., ge=2)
    x: int = Field(..., ge=1)
    y: int = Field(..., ge=1)
    z: int = Field(..., ge=1)


class VerifyReport(BaseModel):
    n: int
    triple: UnitTriple
    valid: bool
    lhs: str = Field(..., description="n*(xy+yz+zx)")
    rhs: str = Field(..., description="4xyz")


class GoldenItem(BaseModel):
    label: str
    l: int
    n: int
    printed_n: int = Field(..., description="n as printed in the concluding line of the worked example")
    triple: UnitTriple
    r: int
    r1: int
    a: int
    b: int
    verified: bool = False
    replayed: bool = False
    note: Optional[str] = None


class GoldenReport(BaseModel):
    items: List[GoldenItem]

    @property
    def passed(self) -> bool:
        return all(item.verified and item.replayed for item in self.items)
