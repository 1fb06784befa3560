"""
Rigid Symbol Toolkit - Partition Service

Partitions, their B/C/D classification and rigidity, conjugation, addition and
the pairwise structure of conjugate rows. "Rows" below always means rows of
the transposed diagram, i.e. conjugate(λ).parts.
"""

import re
import logging
from itertools import zip_longest
from typing import Iterator, List, Optional, Sequence, Tuple

from models.schemas import (
    Partition, Theory, RowRole, PairStructure, RigidityViolation,
    RigidityClause, SurfaceOperator
)
from utils.exceptions import PartitionParseError, DomainError

logger = logging.getLogger(__name__)

EMPTY = Partition()
EMPTY_TOKENS = ("-", "0", "∅")
_TERM = re.compile(r"^(\d+)(?:\^\{?(\d+)\}?)?$", re.ASCII)
_PAIR = re.compile(r"^\((?P<body>.*)\)(?:_(?P<theory>[BCDbcd]))?$")


def parse_partition(text: str) -> Partition:
    """Parse exponent notation ("3^2 2^3 1^2"), a bracket list or "-" for ∅"""
    stripped = text.strip()
    if not stripped:
        raise PartitionParseError("empty partition text", token=text)
    if stripped in EMPTY_TOKENS:
        return EMPTY

    parts: List[int] = []
    if stripped.startswith("["):
        if not stripped.endswith("]"):
            raise PartitionParseError("unterminated bracket list", token=stripped)
        inner = stripped[1:-1].strip()
        tokens = [t.strip() for t in inner.split(",")] if inner else []
        for token in tokens:
            if not (token.isascii() and token.isdecimal()):
                raise PartitionParseError("malformed part", token=token)
            value = int(token)
            if value == 0:
                raise PartitionParseError("zero part", token=token)
            if parts and value > parts[-1]:
                raise PartitionParseError("parts must be weakly decreasing", token=token)
            parts.append(value)
        return Partition(parts=tuple(parts))

    for token in stripped.split():
        match = _TERM.match(token)
        if not match:
            raise PartitionParseError("malformed term", token=token)
        value = int(match.group(1))
        count = int(match.group(2)) if match.group(2) is not None else 1
        if value == 0:
            raise PartitionParseError("zero part", token=token)
        if count == 0:
            raise PartitionParseError("zero multiplicity", token=token)
        if parts and value > parts[-1]:
            raise PartitionParseError("part values must be listed in descending order", token=token)
        parts.extend([value] * count)
    return Partition(parts=tuple(parts))


def format_partition(partition: Partition) -> str:
    return partition.to_text()


def parse_pair(text: str) -> Tuple[Partition, Partition, Optional[Theory]]:
    """Parse "(first;second)" with an optional "_B"/"_C"/"_D" suffix"""
    match = _PAIR.match(text.strip())
    if not match:
        raise PartitionParseError("operator must be written (first;second)", token=text)
    body = match.group("body")
    if ";" in body:
        pieces = body.split(";")
    elif "[" not in body:
        pieces = body.split(",")
    else:
        raise PartitionParseError("bracket factors must be separated by ';'", token=body)
    if len(pieces) != 2:
        raise PartitionParseError("operator needs exactly two factors", token=body)
    theory = Theory(match.group("theory").upper()) if match.group("theory") else None
    return parse_partition(pieces[0]), parse_partition(pieces[1]), theory


def conjugate(partition: Partition) -> Partition:
    """Transpose of the Young diagram: result_j = #{i : λ_i >= j}"""
    parts = partition.parts
    return Partition(parts=tuple(
        sum(1 for p in parts if p >= j) for j in range(1, partition.largest + 1)
    ))


def conjugate_rows(partition: Partition) -> Tuple[int, ...]:
    return conjugate(partition).parts


def from_conjugate_rows(rows: Sequence[int]) -> Partition:
    """Sort rows descending, drop empty rows and conjugate back"""
    if any(r < 0 for r in rows):
        raise DomainError(f"negative row length in {list(rows)}")
    ordered = tuple(sorted((r for r in rows if r > 0), reverse=True))
    return conjugate(Partition(parts=ordered))


def add(partition: Partition, other: Partition) -> Partition:
    """Part-wise sum, missing parts read as 0"""
    return Partition(parts=tuple(
        a + b for a, b in zip_longest(partition.parts, other.parts, fillvalue=0)
    ))


def validity_problem(partition: Partition, theory: Theory) -> Optional[str]:
    """Describe why the partition is not a valid partition of the theory"""
    counts = partition.multiplicities()
    if theory == Theory.C:
        for value in sorted(counts, reverse=True):
            if value % 2 == 1 and counts[value] % 2 == 1:
                return f"odd part {value} appears an odd number of times (C validity)"
        return None

    for value in sorted(counts, reverse=True):
        if value % 2 == 0 and counts[value] % 2 == 1:
            return f"even part {value} appears an odd number of times ({theory.value} validity)"
    if theory == Theory.B and partition.size % 2 == 0:
        return f"size {partition.size} is not odd (B validity)"
    if theory == Theory.D and partition.size % 2 == 1:
        return f"size {partition.size} is not even (D validity)"
    return None


def is_valid(partition: Partition, theory: Theory) -> bool:
    return validity_problem(partition, theory) is None


def rigidity_violation(partition: Partition, theory: Theory) -> Optional[RigidityViolation]:
    """First failing rigidity clause of a valid partition, or None when rigid"""
    problem = validity_problem(partition, theory)
    if problem:
        raise DomainError(f"{partition} is not a valid {theory.value} partition: {problem}", rule=problem)

    parts = partition.parts
    # The trailing virtual zero counts: the smallest part must be 1
    for i, part in enumerate(parts):
        following = parts[i + 1] if i + 1 < len(parts) else 0
        if part - following > 1:
            return RigidityViolation(clause=RigidityClause.GAP, part=part, theory=theory)

    restricted_parity = 0 if theory == Theory.C else 1
    counts = partition.multiplicities()
    for value in sorted(counts, reverse=True):
        if value % 2 == restricted_parity and counts[value] == 2:
            return RigidityViolation(clause=RigidityClause.MULTIPLICITY_TWO, part=value, theory=theory)
    return None


def is_rigid(partition: Partition, theory: Theory) -> bool:
    return rigidity_violation(partition, theory) is None


def row_role(index: int, theory: Theory) -> RowRole:
    """Role of the index-th conjugate row (1-based) in the pairwise structure"""
    if (index + theory.offset + 1) % 2 == 0:
        return RowRole.FIRST_OF_PAIR
    if index == 1 and theory != Theory.C:
        return RowRole.UNPAIRED_FIRST
    return RowRole.SECOND_OF_PAIR


def pair_structure(partition: Partition, theory: Theory) -> PairStructure:
    """Conjugate rows with roles: B/D pair (2,3),(4,5),...; C pairs (1,2),(3,4),..."""
    problem = validity_problem(partition, theory)
    if problem:
        raise DomainError(f"{partition} is not a valid {theory.value} partition: {problem}", rule=problem)
    if partition.is_empty:
        raise DomainError("the empty partition has no rows")

    rows = conjugate_rows(partition)
    roles = tuple(row_role(i, theory) for i in range(1, len(rows) + 1))
    pairs = []
    leftover = None
    for i, role in enumerate(roles, start=1):
        if role != RowRole.FIRST_OF_PAIR:
            continue
        if i < len(rows):
            pairs.append((i, i + 1))
        else:
            leftover = i
    return PairStructure(theory=theory, rows=rows, roles=roles, pairs=tuple(pairs), leftover=leftover)


def split_by_conj_parity(partition: Partition) -> Tuple[Partition, Partition]:
    """(λ_odd, λ_even): the odd-length and even-length conjugate rows of λ"""
    rows = conjugate_rows(partition)
    odd = from_conjugate_rows([r for r in rows if r % 2 == 1])
    even = from_conjugate_rows([r for r in rows if r % 2 == 0])
    return odd, even


def has_only_odd_rows(partition: Partition) -> bool:
    return all(r % 2 == 1 for r in conjugate_rows(partition))


def has_only_even_rows(partition: Partition) -> bool:
    return all(r % 2 == 0 for r in conjugate_rows(partition))


def _partition_tuples(n: int, max_part: int) -> Iterator[Tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partition_tuples(n - first, first):
            yield (first,) + rest


def all_partitions(n: int) -> Iterator[Partition]:
    """Every partition of n, lexicographically descending"""
    if n < 0:
        return
    for parts in _partition_tuples(n, n):
        yield Partition(parts=parts)


def factor_theories(theory: Theory) -> Tuple[Theory, Theory]:
    """Theories of the (first, second) factors of an operator"""
    if theory == Theory.B:
        return Theory.B, Theory.D
    return theory, theory


def _check_factor(partition: Partition, theory: Theory, position: str) -> None:
    if partition.is_empty and theory != Theory.B:
        return
    problem = validity_problem(partition, theory)
    if problem:
        raise DomainError(f"{position} factor {partition} is not a valid {theory.value} partition: {problem}", rule=problem)
    violation = rigidity_violation(partition, theory)
    if violation:
        raise DomainError(f"{position} factor {partition} is not rigid: {violation.describe()}", rule=violation.describe())


def make_operator(theory: Theory, first: Partition, second: Partition = EMPTY,
                  rank: Optional[int] = None) -> SurfaceOperator:
    """Validate a factor pair and return it as a canonical SurfaceOperator"""
    first_theory, second_theory = factor_theories(theory)
    _check_factor(first, first_theory, "first")
    _check_factor(second, second_theory, "second")

    total = first.size + second.size
    if theory == Theory.B:
        computed_rank = (total - 1) // 2
    else:
        if total % 2:
            raise DomainError(f"factor sizes sum to {total}, not even")
        computed_rank = total // 2
        # Unordered pair: larger size first, equal sizes by ascending parts
        if (-second.size, second.parts) < (-first.size, first.parts):
            first, second = second, first

    # (1; ∅)_B is the only rank-0 operator
    if total == 0:
        raise DomainError("both factors are empty")
    if rank is not None and rank != computed_rank:
        raise DomainError(
            f"factor sizes sum to {total}, which is rank {computed_rank} in {theory.value}, not rank {rank}"
        )
    return SurfaceOperator(theory=theory, rank=computed_rank, first=first, second=second)


def parse_operator(text: str, theory: Optional[Theory] = None, rank: Optional[int] = None) -> SurfaceOperator:
    first, second, suffix = parse_pair(text)
    if theory is None:
        theory = suffix
    elif suffix is not None and suffix != theory:
        raise PartitionParseError(f"operator suffix _{suffix.value} contradicts theory {theory.value}", token=text)
    if theory is None:
        raise PartitionParseError("operator theory not given", token=text)
    return make_operator(theory, first, second, rank=rank)
