"""
Rigid Symbol Toolkit - Dimension Service

Orbit dimension of a rigid surface operator from the s_k / r_k counts of its
two factors. Arithmetic is exact: half-sums are combined as Fractions.
"""

import logging
from fractions import Fraction

from models.schemas import Partition, Theory, DimensionTerms, SurfaceOperator
from services.partition_service import factor_theories, validity_problem
from utils.exceptions import DomainError

logger = logging.getLogger(__name__)


def dimension_terms(partition: Partition) -> DimensionTerms:
    """s_k = #{parts >= k}, r_k = #{parts == k} for k = 1..largest part"""
    parts = partition.parts
    largest = partition.largest
    s = tuple(sum(1 for p in parts if p >= k) for k in range(1, largest + 1))
    r = tuple(partition.multiplicity(k) for k in range(1, largest + 1))
    return DimensionTerms(s=s, r=r)


def _half_square_sum(terms: DimensionTerms) -> Fraction:
    return Fraction(sum(x * x for x in terms.s), 2)


def _half_odd_r_sum(terms: DimensionTerms) -> Fraction:
    # r is indexed from k = 1, so odd k sit at even offsets
    return Fraction(sum(terms.r[0::2]), 2)


def dimension(operator: SurfaceOperator) -> int:
    """Dimension of the operator's orbit in its theory of rank n"""
    first_theory, second_theory = factor_theories(operator.theory)
    for partition, theory in ((operator.first, first_theory), (operator.second, second_theory)):
        if partition.is_empty and theory != Theory.B:
            continue
        problem = validity_problem(partition, theory)
        if problem:
            raise DomainError(f"{operator} has an invalid factor {partition}: {problem}", rule=problem)

    n = operator.rank
    first = dimension_terms(operator.first)
    second = dimension_terms(operator.second)

    if operator.theory == Theory.D:
        total = Fraction(2 * n * n - n)
    else:
        total = Fraction(2 * n * n + n)
    total -= _half_square_sum(first) + _half_square_sum(second)

    odd_r = _half_odd_r_sum(first) + _half_odd_r_sum(second)
    if operator.theory == Theory.C:
        total -= odd_r
    else:
        total += odd_r

    if total.denominator != 1 or total < 0:
        raise DomainError(f"dimension of {operator} is not a non-negative integer: {total}")
    logger.debug(f"dimension {operator} = {total}")
    return int(total)
