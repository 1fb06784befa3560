"""
Rigid Symbol Toolkit - Data Models
"""

from pydantic import BaseModel, ConfigDict, Field, field_validator
from typing import Optional, List, Dict, Any, Tuple
from enum import Enum


class Theory(str, Enum):
    B = "B"  # SO(2n+1)
    C = "C"  # Sp(2n)
    D = "D"  # SO(2n)

    @property
    def offset(self) -> int:
        """The row-parity offset t of the theory"""
        return {"B": -1, "C": 0, "D": 1}[self.value]

    @property
    def dual(self) -> "Theory":
        return {"B": Theory.C, "C": Theory.B, "D": Theory.D}[self.value]


class RowRole(str, Enum):
    UNPAIRED_FIRST = "unpaired-first"
    FIRST_OF_PAIR = "first-of-pair"
    SECOND_OF_PAIR = "second-of-pair"


class Placement(str, Enum):
    TOP = "top"
    BOTTOM = "bottom"


class RigidityClause(str, Enum):
    GAP = "gap"
    MULTIPLICITY_TWO = "multiplicity-2"


class TransferCase(str, Enum):
    EE = "EE"
    OO = "OO"
    CE = "CE"
    CO = "CO"
    BO = "BO"
    BE = "BE"
    OE = "OE"
    EO = "EO"
    IDENTITY = "identity"


class ProblemKind(str, Enum):
    I = "I"  # opposite side of the symbol class is empty
    II = "II"  # both sides populated, counts differ


class StructuralTag(str, Enum):
    IC = "IC"
    IB = "IB"
    IIC = "IIC"
    IIB = "IIB"
    NONE = "none"


class LengthMode(str, Enum):
    WRITTEN = "written"  # number of parts
    CONJUGATE = "conjugate"  # largest part


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIP = "skip"


class Partition(BaseModel):
    """Weakly decreasing sequence of positive parts; () is the empty partition"""
    model_config = ConfigDict(frozen=True)

    parts: Tuple[int, ...] = ()

    @field_validator("parts")
    @classmethod
    def _check_parts(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        for i, part in enumerate(v):
            if part <= 0:
                raise ValueError(f"part {part} is not positive")
            if i and part > v[i - 1]:
                raise ValueError(f"parts not weakly decreasing at {v[i - 1]}, {part}")
        return v

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(parts=tuple(parts))

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def largest(self) -> int:
        return self.parts[0] if self.parts else 0

    @property
    def is_empty(self) -> bool:
        return not self.parts

    def multiplicity(self, value: int) -> int:
        return self.parts.count(value)

    def multiplicities(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for part in self.parts:
            counts[part] = counts.get(part, 0) + 1
        return counts

    def to_text(self) -> str:
        """Exponent notation with descending part values, '-' for the empty partition"""
        if not self.parts:
            return "-"
        terms = []
        for value, count in sorted(self.multiplicities().items(), reverse=True):
            terms.append(str(value) if count == 1 else f"{value}^{count}")
        return " ".join(terms)

    def __str__(self) -> str:
        return self.to_text()


class Symbol(BaseModel):
    """Two-row symbol; equality is padded equality (leading zeros are ignored)"""
    model_config = ConfigDict(frozen=True)

    top: Tuple[int, ...] = ()
    bottom: Tuple[int, ...] = ()

    @field_validator("top", "bottom")
    @classmethod
    def _check_entries(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(entry < 0 for entry in v):
            raise ValueError("symbol entries must be non-negative")
        return v

    @staticmethod
    def _strip(row: Tuple[int, ...]) -> Tuple[int, ...]:
        i = 0
        while i < len(row) and row[i] == 0:
            i += 1
        return row[i:]

    def canonical(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return self._strip(self.top), self._strip(self.bottom)

    def literal_equals(self, other: "Symbol") -> bool:
        return self.top == other.top and self.bottom == other.bottom

    @property
    def is_empty(self) -> bool:
        return self.canonical() == ((), ())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Symbol):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def to_text(self) -> str:
        top = " ".join(str(x) for x in self.top) or "-"
        bottom = " ".join(str(x) for x in self.bottom) or "-"
        return f"top: {top} / bottom: {bottom}"

    def to_export(self) -> Dict[str, List[int]]:
        return {"top": list(self.top), "bottom": list(self.bottom)}

    def __str__(self) -> str:
        return self.to_text()


class RowContribution(BaseModel):
    """Contribution of one conjugate row: L right-aligned 1s in one symbol row"""
    model_config = ConfigDict(frozen=True)

    index: Optional[int] = Field(default=None, ge=1)  # None for position-only lookups
    length: int = Field(..., ge=0)
    placement: Placement
    count: int = Field(..., ge=0)


class PairStructure(BaseModel):
    """Conjugate rows of a partition with their pairwise-row roles"""
    model_config = ConfigDict(frozen=True)

    theory: Theory
    rows: Tuple[int, ...]
    roles: Tuple[RowRole, ...]
    pairs: Tuple[Tuple[int, int], ...] = ()  # 1-based (first, second) indices
    leftover: Optional[int] = None  # index of a first-of-pair row without partner

    @property
    def pairing(self) -> List[Tuple[int, RowRole]]:
        return [(i + 1, role) for i, role in enumerate(self.roles)]


class RigidityViolation(BaseModel):
    """Which rigidity clause fails and at which part value"""
    model_config = ConfigDict(frozen=True)

    clause: RigidityClause
    part: int
    theory: Theory

    def describe(self) -> str:
        if self.clause == RigidityClause.GAP:
            return f"gap below part {self.part} ({self.theory.value} rigidity)"
        return f"part {self.part} appears exactly twice ({self.theory.value} rigidity)"


class SurfaceOperator(BaseModel):
    """Factor pair (first; second) of a rigid surface operator of rank n.

    B operators hold the B factor first and the D factor second. C and D pairs
    are unordered and stored in canonical order (larger size first, equal sizes by
    ascending parts). Build through partition_service.make_operator.
    """
    model_config = ConfigDict(frozen=True)

    theory: Theory
    rank: int = Field(..., ge=0)
    first: Partition
    second: Partition = Partition()

    @property
    def is_unipotent(self) -> bool:
        return self.second.is_empty

    @property
    def factors(self) -> Tuple[Partition, Partition]:
        return self.first, self.second

    def sort_key(self) -> Tuple:
        return (self.theory.value, self.rank, self.first.size, self.first.parts, self.second.parts)

    def to_text(self) -> str:
        return f"({self.first.to_text()}; {self.second.to_text()})_{self.theory.value}"

    def __str__(self) -> str:
        return self.to_text()


class DimensionTerms(BaseModel):
    """s_k (parts >= k) and r_k (parts == k) for k = 1..largest part"""
    model_config = ConfigDict(frozen=True)

    s: Tuple[int, ...] = ()
    r: Tuple[int, ...] = ()


class MapOutcome(BaseModel):
    """Result of a transfer algorithm, kept even when rigidity fails"""
    model_config = ConfigDict(frozen=True)

    map_name: str
    case: TransferCase
    source: SurfaceOperator
    theory: Theory
    first: Partition
    second: Partition
    rigidity_ok: bool
    violation: Optional[RigidityViolation] = None
    violation_factor: Optional[str] = None  # "first" or "second"
    operator: Optional[SurfaceOperator] = None

    def describe(self) -> str:
        pair = f"({self.first.to_text()}; {self.second.to_text()})_{self.theory.value}"
        if self.rigidity_ok:
            return f"{self.case.value}: {pair}"
        return f"{self.case.value}: {pair} violates rigidity in {self.violation_factor} factor: {self.violation.describe()}"


class SymbolClass(BaseModel):
    """B and C operators of one rank sharing a symbol"""
    model_config = ConfigDict(frozen=True)

    symbol: Symbol
    b_members: Tuple[SurfaceOperator, ...] = ()
    c_members: Tuple[SurfaceOperator, ...] = ()

    @property
    def balanced(self) -> bool:
        return len(self.b_members) == len(self.c_members)

    @property
    def surplus(self) -> int:
        return len(self.b_members) - len(self.c_members)


class ProblematicOperator(BaseModel):
    """Surplus operator of an unbalanced class with its structural annotation"""
    model_config = ConfigDict(frozen=True)

    operator: SurfaceOperator
    kind: ProblemKind
    structural_tag: StructuralTag
    structural_tag_conjugate: StructuralTag
    agrees: bool
    agrees_conjugate: bool


class MismatchReport(BaseModel):
    """Per-rank census, symbol classes and problematic operators"""
    model_config = ConfigDict(frozen=True)

    rank: int
    n_b: int
    n_c: int
    classes: Tuple[SymbolClass, ...] = ()
    problematic: Tuple[ProblematicOperator, ...] = ()
    agreement_written: int = 0
    agreement_conjugate: int = 0

    @property
    def type_one(self) -> List[ProblematicOperator]:
        return [p for p in self.problematic if p.kind == ProblemKind.I]

    @property
    def type_two(self) -> List[ProblematicOperator]:
        return [p for p in self.problematic if p.kind == ProblemKind.II]

    @property
    def unbalanced_classes(self) -> List[SymbolClass]:
        return [c for c in self.classes if not c.balanced]


class MismatchRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    rank: int
    n_b: int
    n_c: int
    diff: int
    excess_ratio: float


class AppendixRow(BaseModel):
    """One row of the SO(13)/Sp(12) fixture table"""
    model_config = ConfigDict(frozen=True)

    num: int
    type: str
    sp12_first: Optional[Partition] = None
    sp12_second: Optional[Partition] = None
    so13_first: Partition
    so13_second: Partition
    dim: int
    symbol: Symbol
    fingerprint: str = ""

    @property
    def has_sp12(self) -> bool:
        return self.sp12_first is not None


class RowVerdict(BaseModel):
    """Verification outcome of one fixture row, per checked column"""
    num: int
    checks: Dict[str, Verdict] = Field(default_factory=dict)
    messages: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v != Verdict.FAIL for v in self.checks.values())


class VerificationReport(BaseModel):
    rows: List[RowVerdict] = Field(default_factory=list)
    columns: Dict[str, Dict[str, int]] = Field(default_factory=dict)
    unmatched_sp12: List[int] = Field(default_factory=list)
    table_checks: Dict[str, Verdict] = Field(default_factory=dict)  # whole-table census and surplus checks
    table_messages: List[str] = Field(default_factory=list)
    first_mismatch: Optional[str] = None

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows) and Verdict.FAIL not in self.table_checks.values()


class OutputRecord(BaseModel):
    """Machine-readable output of one CLI command"""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(..., alias="schema")
    command: str
    inputs: Dict[str, Any] = Field(default_factory=dict)
    results: Any = None
    verdicts: Optional[Dict[str, Any]] = None
