"""
Rigid Symbol Toolkit - Symbol Service

Symbol of a partition in the B (t=-1), C (t=0) and D (t=1) theories, computed
directly or as a sum of per-row contributions, and the symbol of an operator.
"""

import logging
from typing import Sequence, Tuple

from models.schemas import (
    Partition, Theory, Symbol, RowContribution, Placement, RowRole, SurfaceOperator
)
from services.partition_service import (
    validity_problem, rigidity_violation, conjugate_rows, factor_theories
)
from utils.exceptions import DomainError

logger = logging.getLogger(__name__)

EMPTY_SYMBOL = Symbol()


def _b_rows(parts: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """B rule: s_k = λ_k + l - k, odd members 2f+1 -> f_i - i + 1, even members 2g -> g_i - i + 1"""
    length = len(parts)
    values = [part + length - k for k, part in enumerate(parts, start=1)]
    odd = sorted(v for v in values if v % 2 == 1)
    even = sorted(v for v in values if v % 2 == 0)
    top = tuple((v - 1) // 2 - i for i, v in enumerate(odd))
    bottom = tuple(v // 2 - i for i, v in enumerate(even))
    return top, bottom


def compute_symbol(partition: Partition, theory: Theory) -> Symbol:
    """Symbol of a valid partition; the empty partition has the empty symbol"""
    problem = validity_problem(partition, theory)
    if problem and not (partition.is_empty and theory != Theory.B):
        raise DomainError(f"{partition} is not a valid {theory.value} partition: {problem}", rule=problem)
    if partition.is_empty:
        return EMPTY_SYMBOL

    parts = partition.parts
    if theory == Theory.B:
        top, bottom = _b_rows(parts)
    elif theory == Theory.C:
        if len(parts) % 2 == 0:
            top, bottom = _b_rows(parts)
            top = (0,) + top
        else:
            top, bottom = _b_rows(parts + (0,))
            bottom = bottom[1:]
    else:
        top, bottom = _b_rows(parts + (0,))
        bottom = bottom[2:]
    return Symbol(top=top, bottom=bottom)


def _contribution(length: int, index_parity: int) -> Tuple[Placement, int]:
    if length % 2 != index_parity:
        placement = Placement.TOP
        count = (length + 1) // 2 if length % 2 else length // 2
    else:
        placement = Placement.BOTTOM
        count = (length - 1) // 2 if length % 2 else length // 2
    return placement, count


def row_contribution(index: int, partition: Partition, theory: Theory) -> RowContribution:
    """Contribution of the index-th conjugate row; top iff parity(len) != parity(i+t+1)"""
    rows = conjugate_rows(partition)
    if not 1 <= index <= len(rows):
        raise DomainError(f"row index {index} out of range 1..{len(rows)}")
    length = rows[index - 1]
    placement, count = _contribution(length, (index + theory.offset + 1) % 2)
    return RowContribution(index=index, length=length, placement=placement, count=count)


def contribution_by_position(length: int, role: RowRole) -> RowContribution:
    """Contribution of a row of given length by its place in the pairwise rows alone"""
    if length < 0:
        raise DomainError(f"negative row length {length}")
    index_parity = 0 if role == RowRole.FIRST_OF_PAIR else 1
    placement, count = _contribution(length, index_parity)
    return RowContribution(length=length, placement=placement, count=count)


def same_contribution(length_a: int, role_a: RowRole, length_b: int, role_b: RowRole) -> bool:
    a = contribution_by_position(length_a, role_a)
    b = contribution_by_position(length_b, role_b)
    return (a.placement, a.count) == (b.placement, b.count) or (a.count == b.count == 0)


def contribution_symbol(contribution: RowContribution) -> Symbol:
    ones = (1,) * contribution.count
    if contribution.placement == Placement.TOP:
        return Symbol(top=ones)
    return Symbol(bottom=ones)


def _add_rows(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    width = max(len(a), len(b))
    a = (0,) * (width - len(a)) + a
    b = (0,) * (width - len(b)) + b
    return tuple(x + y for x, y in zip(a, b))


def add_symbols(a: Symbol, b: Symbol) -> Symbol:
    """Right-align both rows, pad with leading zeros, add entry-wise"""
    return Symbol(top=_add_rows(a.top, b.top), bottom=_add_rows(a.bottom, b.bottom))


def compute_via_rows(partition: Partition, theory: Theory) -> Symbol:
    """Symbol as the right-aligned sum of the per-row contributions"""
    violation = rigidity_violation(partition, theory) if not partition.is_empty else None
    if violation:
        raise DomainError(f"{partition} is not rigid: {violation.describe()}", rule=violation.describe())

    total = EMPTY_SYMBOL
    for index in range(1, partition.largest + 1):
        total = add_symbols(total, contribution_symbol(row_contribution(index, partition, theory)))
    return total


def operator_symbol(operator: SurfaceOperator) -> Symbol:
    """σ(λ') + σ(λ''), each factor computed in its own theory"""
    first_theory, second_theory = factor_theories(operator.theory)
    return add_symbols(
        compute_symbol(operator.first, first_theory),
        compute_symbol(operator.second, second_theory),
    )
