"""
Rigid Symbol Toolkit - Duality Service

Symbol-preserving maps between the B, C and D theories. Every map works on the
conjugate rows of its input and returns through from_conjugate_rows:

- x_s / y_s and their inverses shift boxes inside pairwise rows
- wb, wc, wcc, cb_eo and eo compose them into operator maps
- transfer_c_to_b / transfer_b_to_c move the longest row between factors
- within_theory_moves searches one-step rearrangements inside a theory
"""

import logging
from collections import Counter
from typing import List, Optional, Sequence, Tuple

from models.schemas import (
    Partition, Theory, SurfaceOperator, MapOutcome, TransferCase, RigidityViolation
)
from services.partition_service import (
    add, conjugate_rows, from_conjugate_rows, split_by_conj_parity,
    has_only_odd_rows, has_only_even_rows, rigidity_violation, validity_problem,
    make_operator
)
from services.symbol_service import operator_symbol
from utils.exceptions import DomainError

logger = logging.getLogger(__name__)


def shift_pairwise_rows(rows: Sequence[int], theory: Theory, inverse: bool = False) -> Tuple[int, ...]:
    """Shift one box inside every pair of conjugate rows.

    B/D pairing leaves row 1 alone and pairs (2,3), (4,5), ...; C pairs (1,2),
    (3,4), .... Forward: a lone first row loses a box, each pair (a, b) becomes
    (a+1, b-1). Inverse undoes it. A missing partner is read as a zero row.
    """
    step = -1 if inverse else 1
    shifted = list(rows)
    start = 0
    if theory != Theory.C:
        if not shifted:
            shifted.append(0)
        shifted[0] -= step
        start = 1
    if (len(shifted) - start) % 2:
        shifted.append(0)
    for i in range(start, len(shifted), 2):
        shifted[i] += step
        shifted[i + 1] -= step
    return tuple(shifted)


def _require_rigid(partition: Partition, theory: Theory, map_name: str) -> None:
    if partition.is_empty and theory != Theory.B:
        return
    problem = validity_problem(partition, theory)
    if problem:
        raise DomainError(f"{map_name}: {partition} is not a valid {theory.value} partition: {problem}", rule=problem)
    violation = rigidity_violation(partition, theory)
    if violation:
        raise DomainError(f"{map_name}: {partition} is not rigid: {violation.describe()}", rule=violation.describe())


def _require(partition: Partition, theory: Theory, rows_even: bool, map_name: str) -> None:
    _require_rigid(partition, theory, map_name)
    if rows_even and not has_only_even_rows(partition):
        raise DomainError(f"{map_name}: {partition} has an odd conjugate row", rule="all conjugate rows even")
    if not rows_even and not has_only_odd_rows(partition):
        raise DomainError(f"{map_name}: {partition} has an even conjugate row", rule="all conjugate rows odd")


def _apply(partition: Partition, theory: Theory, inverse: bool) -> Partition:
    return from_conjugate_rows(shift_pairwise_rows(conjugate_rows(partition), theory, inverse=inverse))


def x_s(partition: Partition) -> Partition:
    """Rigid B partition with odd conjugate rows -> rigid C partition with even rows"""
    _require(partition, Theory.B, rows_even=False, map_name="x_s")
    return _apply(partition, Theory.B, inverse=False)


def x_s_inv(partition: Partition) -> Partition:
    """Rigid C partition with even conjugate rows (or ∅) -> rigid B partition with odd rows"""
    _require(partition, Theory.C, rows_even=True, map_name="x_s_inv")
    return _apply(partition, Theory.B, inverse=True)


def y_s(partition: Partition) -> Partition:
    """Rigid C partition with odd conjugate rows -> rigid D partition with even rows"""
    _require(partition, Theory.C, rows_even=False, map_name="y_s")
    return _apply(partition, Theory.C, inverse=False)


def y_s_inv(partition: Partition) -> Partition:
    """Rigid D partition with even conjugate rows -> rigid C partition with odd rows"""
    _require(partition, Theory.D, rows_even=True, map_name="y_s_inv")
    return _apply(partition, Theory.C, inverse=True)


def wb(partition: Partition) -> SurfaceOperator:
    """(λ; ∅)_B -> (x_s(λ_odd); λ_even)_C"""
    _require_rigid(partition, Theory.B, "wb")
    odd, even = split_by_conj_parity(partition)
    return make_operator(Theory.C, x_s(odd), even)


def wc(partition: Partition) -> SurfaceOperator:
    """(λ; ∅)_C -> (x_s_inv(λ_even); y_s(λ_odd))_B"""
    _require_rigid(partition, Theory.C, "wc")
    odd, even = split_by_conj_parity(partition)
    return make_operator(Theory.B, x_s_inv(even), y_s(odd))


def wcc(rho: Partition) -> SurfaceOperator:
    """(ρ; ρ)_C -> (ρ_even + x_s_inv(ρ_even); ρ_odd + y_s(ρ_odd))_B"""
    _require_rigid(rho, Theory.C, "wcc")
    odd, even = split_by_conj_parity(rho)
    return make_operator(Theory.B, add(even, x_s_inv(even)), add(odd, y_s(odd)))


def even_odd_factors(operator: SurfaceOperator) -> Optional[Tuple[Partition, Partition]]:
    """(all-even-rows factor, all-odd-rows factor) of a C operator, in either position"""
    first, second = operator.factors
    for even, odd in ((first, second), (second, first)):
        if has_only_even_rows(even) and has_only_odd_rows(odd):
            return even, odd
    return None


def cb_eo(operator: SurfaceOperator) -> SurfaceOperator:
    """(λ_even; ρ_odd)_C -> (x_s_inv(λ_even); y_s(ρ_odd))_B, factors identified by shape"""
    if operator.theory != Theory.C:
        raise DomainError(f"cb_eo: {operator} is not a C operator")
    shape = even_odd_factors(operator)
    if shape is None:
        raise DomainError(
            f"cb_eo: {operator} has no factor with only even conjugate rows next to one with only odd rows",
            rule="even/odd conjugate shape",
        )
    even, odd = shape
    return make_operator(Theory.B, x_s_inv(even), y_s(odd))


def eo(operator: SurfaceOperator) -> SurfaceOperator:
    """(λ_odd; ρ_even)_B -> (x_s(λ_odd); y_s_inv(ρ_even))_C, inverse of cb_eo"""
    if operator.theory != Theory.B:
        raise DomainError(f"eo: {operator} is not a B operator")
    b_factor, d_factor = operator.factors
    if not has_only_odd_rows(b_factor) or not has_only_even_rows(d_factor):
        raise DomainError(
            f"eo: {operator} needs only odd conjugate rows in the B factor and only even rows in the D factor",
            rule="odd/even conjugate shape",
        )
    return make_operator(Theory.C, x_s(b_factor), y_s_inv(d_factor))


def _check_factor(partition: Partition, theory: Theory) -> Optional[RigidityViolation]:
    if partition.is_empty and theory != Theory.B:
        return None
    problem = validity_problem(partition, theory)
    if problem:
        raise DomainError(f"transfer produced an invalid {theory.value} factor {partition}: {problem}", rule=problem)
    return rigidity_violation(partition, theory)


def _outcome(map_name: str, case: TransferCase, source: SurfaceOperator, theory: Theory,
             first: Partition, second: Partition, first_theory: Theory, second_theory: Theory) -> MapOutcome:
    for factor, partition, factor_theory in (("first", first, first_theory), ("second", second, second_theory)):
        violation = _check_factor(partition, factor_theory)
        if violation:
            logger.debug(f"{map_name} {source} -> {factor} factor {partition}: {violation.describe()}")
            return MapOutcome(
                map_name=map_name, case=case, source=source, theory=theory, first=first, second=second,
                rigidity_ok=False, violation=violation, violation_factor=factor,
            )
    operator = make_operator(theory, first, second, rank=source.rank)
    return MapOutcome(
        map_name=map_name, case=case, source=source, theory=theory, first=first, second=second,
        rigidity_ok=True, operator=operator,
    )


def transfer_c_to_b(operator: SurfaceOperator) -> MapOutcome:
    """Move the longest conjugate row to the other factor, one box longer.

    The source is the factor holding the longest first row. On a tie it is
    the factor with the smaller size, then the smaller parts. The odd-size
    result is the B factor, the even-size one the D factor. The case is
    EE/OO when both first rows share a parity (an empty factor adopts the
    other's) and CE/CO otherwise, by the longest row.
    """
    if operator.theory != Theory.C:
        raise DomainError(f"transfer_c_to_b: {operator} is not a C operator")
    first, second = operator.factors
    if first.is_empty and second.is_empty:
        raise DomainError("transfer_c_to_b: both factors are empty")

    r1, r2 = first.length, second.length  # first conjugate row = number of parts
    if r1 != r2:
        source, target = (first, second) if r1 > r2 else (second, first)
    else:
        source, target = sorted((first, second), key=lambda p: (p.size, p.parts))
    longest = max(r1, r2)

    p1 = r1 % 2 if not first.is_empty else r2 % 2
    p2 = r2 % 2 if not second.is_empty else r1 % 2
    if p1 == p2:
        case = TransferCase.EE if p1 == 0 else TransferCase.OO
    else:
        case = TransferCase.CE if longest % 2 == 0 else TransferCase.CO

    shortened = from_conjugate_rows(conjugate_rows(source)[1:])
    lengthened = from_conjugate_rows((longest + 1,) + conjugate_rows(target))
    if shortened.size % 2:
        b_factor, d_factor = shortened, lengthened
    else:
        b_factor, d_factor = lengthened, shortened
    return _outcome("transfer_c_to_b", case, operator, Theory.B, b_factor, d_factor, Theory.B, Theory.D)


def transfer_b_to_c(operator: SurfaceOperator) -> MapOutcome:
    """Shorten the overall longest conjugate row by one box and move it across.

    BO when the longest row sits in the B factor, BE when it sits in the D
    factor. The factor derived from the B factor is reported first.
    """
    if operator.theory != Theory.B:
        raise DomainError(f"transfer_b_to_c: {operator} is not a B operator")
    b_factor, d_factor = operator.factors
    b_rows, d_rows = conjugate_rows(b_factor), conjugate_rows(d_factor)
    rb = b_rows[0] if b_rows else 0
    rd = d_rows[0] if d_rows else 0
    if max(rb, rd) < 1:
        raise DomainError(f"transfer_b_to_c: {operator} has no row to transfer")

    if rb > rd:
        case = TransferCase.BO
        first = from_conjugate_rows(b_rows[1:])
        second = from_conjugate_rows((rb - 1,) + d_rows)
    else:
        case = TransferCase.BE
        first = from_conjugate_rows((rd - 1,) + b_rows)
        second = from_conjugate_rows(d_rows[1:])
    return _outcome("transfer_b_to_c", case, operator, Theory.C, first, second, Theory.C, Theory.C)


def _remove_one(rows: Sequence[int], value: int) -> List[int]:
    remaining = list(rows)
    if value:
        remaining.remove(value)
    return remaining


def _pairs(rows: Sequence[int]) -> List[Tuple[int, int]]:
    """Distinct (x, y) picks of two rows, x >= y, with 0 standing for no second row"""
    counts = Counter(rows)
    pairs = {(x, 0) for x in counts}
    for x in counts:
        for y in counts:
            if y < x or (y == x and counts[x] >= 2):
                pairs.add((x, y))
    return sorted(pairs)


def within_theory_moves(operator: SurfaceOperator) -> List[SurfaceOperator]:
    """Symbol-equal rigid operators one move away, same theory and rank.

    Two kinds of move are tried:

    - exchange: one conjugate row from each factor (a zero row stands for
      "nothing") trade places, either unchanged or with one box passed
      from one moved row to the other;
    - relocation: a pair of rows leaves one factor for the other, again
      unchanged or with one box passed between the two.
    """
    symbol = operator_symbol(operator)
    first_rows = conjugate_rows(operator.first)
    second_rows = conjugate_rows(operator.second)

    proposals = []
    for a in sorted(set(first_rows) | {0}):
        for b in sorted(set(second_rows) | {0}):
            for shift in (0, 1, -1):
                if a == b and shift == 0:
                    continue
                proposals.append((
                    _remove_one(first_rows, a) + [b + shift],
                    _remove_one(second_rows, b) + [a - shift],
                ))
    for source, target, forward in ((first_rows, second_rows, True), (second_rows, first_rows, False)):
        for x, y in _pairs(source):
            remaining = _remove_one(_remove_one(source, x), y)
            for shift in (0, 1, -1):
                moved = list(target) + [x + shift, y - shift]
                proposals.append((remaining, moved) if forward else (moved, remaining))

    found = {}
    for new_first, new_second in proposals:
        if min(new_first, default=0) < 0 or min(new_second, default=0) < 0:
            continue
        try:
            candidate = make_operator(
                operator.theory,
                from_conjugate_rows(new_first),
                from_conjugate_rows(new_second),
                rank=operator.rank,
            )
        except DomainError:
            continue
        if candidate == operator or candidate in found:
            continue
        if operator_symbol(candidate) == symbol:
            found[candidate] = None
    moves = sorted(found, key=lambda op: op.sort_key())
    logger.debug(f"{len(moves)} within-theory moves from {operator}")
    return moves


def constructive_dual(operator: SurfaceOperator) -> MapOutcome:
    """Transfer map with the even/odd composite as fallback; D maps to itself"""
    if operator.theory == Theory.D:
        return MapOutcome(
            map_name="identity", case=TransferCase.IDENTITY, source=operator, theory=Theory.D,
            first=operator.first, second=operator.second, rigidity_ok=True, operator=operator,
        )

    if operator.theory == Theory.C:
        outcome = transfer_c_to_b(operator)
        if outcome.rigidity_ok or even_odd_factors(operator) is None:
            return outcome
        dual = cb_eo(operator)
        case = TransferCase.OE
    else:
        outcome = transfer_b_to_c(operator)
        if outcome.rigidity_ok or not (has_only_odd_rows(operator.first) and has_only_even_rows(operator.second)):
            return outcome
        dual = eo(operator)
        case = TransferCase.EO

    logger.info(f"{outcome.map_name} breaks rigidity for {operator}, using {case.value} instead")
    return MapOutcome(
        map_name="cb_eo" if case == TransferCase.OE else "eo", case=case, source=operator,
        theory=dual.theory, first=dual.first, second=dual.second, rigidity_ok=True, operator=dual,
    )


def preserves_symbol(source: SurfaceOperator, image: SurfaceOperator) -> bool:
    return operator_symbol(source) == operator_symbol(image)


MAPS_ON_PARTITIONS = {
    "xs": x_s,
    "xs-inv": x_s_inv,
    "ys": y_s,
    "ys-inv": y_s_inv,
}

MAP_DOMAINS = {
    "xs": Theory.B,
    "xs-inv": Theory.C,
    "ys": Theory.C,
    "ys-inv": Theory.D,
    "wb": Theory.B,
    "wc": Theory.C,
    "wcc": Theory.C,
}

MAP_CODOMAINS = {
    "xs": Theory.C,
    "xs-inv": Theory.B,
    "ys": Theory.D,
    "ys-inv": Theory.C,
}
