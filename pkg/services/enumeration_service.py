"""
Rigid Symbol Toolkit - Enumeration Service
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from models.schemas import (
    Partition, Theory, SurfaceOperator, Symbol, SymbolClass, ProblematicOperator,
    ProblemKind, StructuralTag, LengthMode, MismatchReport, MismatchRow
)
from services.partition_service import (
    EMPTY, all_partitions, is_valid, is_rigid, has_only_odd_rows, has_only_even_rows
)
from services.duality_service import even_odd_factors
from services.symbol_service import operator_symbol
from utils.exceptions import DomainError
from utils.settings import get_settings

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def rigid_partitions(theory: Theory, size: int) -> Tuple[Partition, ...]:
    """Rigid partitions of size N, lexicographically descending; wrong parity gives ()"""
    if size < 0:
        raise DomainError(f"size {size} is negative")
    if size == 0:
        return ()
    return tuple(p for p in all_partitions(size) if is_valid(p, theory) and is_rigid(p, theory))


def _factors(theory: Theory, size: int) -> Tuple[Partition, ...]:
    if size == 0 and theory != Theory.B:
        return (EMPTY,)
    return rigid_partitions(theory, size)


@lru_cache(maxsize=None)
def rigid_operators(theory: Theory, rank: int) -> Tuple[SurfaceOperator, ...]:
    """Every rigid surface operator of the theory at rank n, in sort_key order"""
    if rank < 1:
        raise DomainError(f"rank {rank} is not positive")

    operators: List[SurfaceOperator] = []
    if theory == Theory.B:
        for k in range(rank + 1):
            for first in _factors(Theory.B, 2 * k + 1):
                for second in _factors(Theory.D, 2 * (rank - k)):
                    operators.append(SurfaceOperator(theory=theory, rank=rank, first=first, second=second))
    else:
        # Unordered pairs: larger size first, equal sizes by ascending parts
        for a in range(rank, (rank - 1) // 2, -1):
            b = rank - a
            larger = _factors(theory, 2 * a)
            smaller = _factors(theory, 2 * b)
            for i, first in enumerate(larger):
                candidates = smaller[:i + 1] if a == b else smaller
                for second in candidates:
                    operators.append(SurfaceOperator(theory=theory, rank=rank, first=first, second=second))

    operators.sort(key=lambda op: op.sort_key())
    logger.debug(f"{len(operators)} rigid {theory.value} operators at rank {rank}")
    return tuple(operators)


def _written_length(partition: Partition) -> int:
    return partition.length


def _conjugate_length(partition: Partition) -> int:
    return partition.largest


def structural_tag(operator: SurfaceOperator, length_mode: LengthMode = LengthMode.WRITTEN) -> StructuralTag:
    """Shape-based problematic tag: IIC/IIB for the odd/even shape, IC/IB for lengths differing by one"""
    length = _written_length if length_mode == LengthMode.WRITTEN else _conjugate_length
    first, second = operator.factors
    both_present = not first.is_empty and not second.is_empty
    lengths_adjacent = abs(length(first) - length(second)) == 1

    if operator.theory == Theory.C:
        if both_present and even_odd_factors(operator) is not None:
            return StructuralTag.IIC
        return StructuralTag.IC if lengths_adjacent else StructuralTag.NONE
    if operator.theory == Theory.B:
        if both_present and has_only_odd_rows(first) and has_only_even_rows(second):
            return StructuralTag.IIB
        return StructuralTag.IB if lengths_adjacent else StructuralTag.NONE
    return StructuralTag.NONE


def _tag_matches(tag: StructuralTag, kind: ProblemKind) -> bool:
    if kind == ProblemKind.I:
        return tag in (StructuralTag.IC, StructuralTag.IB)
    return tag in (StructuralTag.IIC, StructuralTag.IIB)


def _census(rank: int) -> Tuple[int, int, int]:
    return rank, len(rigid_operators(Theory.B, rank)), len(rigid_operators(Theory.C, rank))


class EnumerationService:
    """Service for rank-level censuses, symbol classes and the B/C mismatch"""

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or get_settings().max_workers

    def rigid_partitions(self, theory: Theory, size: int) -> List[Partition]:
        return list(rigid_partitions(theory, size))

    def rigid_operators(self, theory: Theory, rank: int) -> List[SurfaceOperator]:
        return list(rigid_operators(theory, rank))

    def group_by_symbol(self, rank: int) -> List[SymbolClass]:
        """B and C operators of rank n bucketed by canonical symbol"""
        buckets: Dict[Symbol, Tuple[List[SurfaceOperator], List[SurfaceOperator]]] = {}
        for theory, slot in ((Theory.B, 0), (Theory.C, 1)):
            for operator in rigid_operators(theory, rank):
                symbol = operator_symbol(operator)
                buckets.setdefault(symbol, ([], []))[slot].append(operator)

        classes = [
            SymbolClass(
                symbol=Symbol(top=symbol.canonical()[0], bottom=symbol.canonical()[1]),
                b_members=tuple(b_members),
                c_members=tuple(c_members),
            )
            for symbol, (b_members, c_members) in buckets.items()
        ]
        classes.sort(key=lambda c: c.symbol.canonical())
        logger.info(f"Rank {rank}: {len(classes)} symbol classes")
        return classes

    def find_duals(self, operator: SurfaceOperator) -> List[SurfaceOperator]:
        """Operators of the dual theory at the same rank with an equal symbol"""
        symbol = operator_symbol(operator)
        return [
            candidate for candidate in rigid_operators(operator.theory.dual, operator.rank)
            if operator_symbol(candidate) == symbol
        ]

    def mismatch_series(self, max_rank: int, min_rank: int = 1) -> List[MismatchRow]:
        """n_B, n_C and their difference for every rank in min_rank..max_rank"""
        if min_rank < 1 or max_rank < min_rank:
            raise DomainError(f"rank range {min_rank}..{max_rank} is empty or not positive")

        ranks = list(range(min_rank, max_rank + 1))
        if self.max_workers > 1 and len(ranks) > 1:
            logger.info(f"Counting ranks {min_rank}..{max_rank} with {self.max_workers} workers")
            with ProcessPoolExecutor(max_workers=self.max_workers) as executor:
                counts = list(executor.map(_census, ranks))
        else:
            counts = [_census(rank) for rank in ranks]

        rows = []
        for rank, n_b, n_c in sorted(counts):
            diff = n_b - n_c
            rows.append(MismatchRow(
                rank=rank, n_b=n_b, n_c=n_c, diff=diff,
                excess_ratio=float(Fraction(diff, n_b)) if n_b else 0.0,
            ))
            logger.info(f"Rank {rank}: n_B={n_b} n_C={n_c} diff={diff}")
        return rows

    def classify_problematic(self, rank: int) -> MismatchReport:
        """Surplus operators of unbalanced symbol classes, tagged I or II"""
        classes = self.group_by_symbol(rank)
        problematic: List[ProblematicOperator] = []

        for symbol_class in classes:
            if symbol_class.balanced:
                continue
            b_members, c_members = symbol_class.b_members, symbol_class.c_members
            if not b_members or not c_members:
                kind = ProblemKind.I
                surplus = b_members or c_members
            else:
                kind = ProblemKind.II
                surplus = b_members if len(b_members) > len(c_members) else c_members

            for operator in surplus:
                tag = structural_tag(operator, LengthMode.WRITTEN)
                tag_conjugate = structural_tag(operator, LengthMode.CONJUGATE)
                agrees = _tag_matches(tag, kind)
                if not agrees:
                    logger.warning(f"{operator}: symbol classes give type {kind.value}, shape gives {tag.value}")
                problematic.append(ProblematicOperator(
                    operator=operator,
                    kind=kind,
                    structural_tag=tag,
                    structural_tag_conjugate=tag_conjugate,
                    agrees=agrees,
                    agrees_conjugate=_tag_matches(tag_conjugate, kind),
                ))

        n_b = sum(len(c.b_members) for c in classes)
        n_c = sum(len(c.c_members) for c in classes)
        return MismatchReport(
            rank=rank,
            n_b=n_b,
            n_c=n_c,
            classes=tuple(classes),
            problematic=tuple(problematic),
            agreement_written=sum(1 for p in problematic if p.agrees),
            agreement_conjugate=sum(1 for p in problematic if p.agrees_conjugate),
        )
