#!/usr/bin/env python3
"""
Test script for rigid censuses, symbol classes, duals, the mismatch series
and the problematic-operator classification
"""

import pytest

from models.schemas import LengthMode, StructuralTag, Theory
from services.duality_service import constructive_dual, within_theory_moves
from services.enumeration_service import (
    EnumerationService, rigid_operators, rigid_partitions, structural_tag
)
from services.partition_service import (
    all_partitions, is_rigid, is_valid, make_operator, parse_operator, parse_partition
)
from services.symbol_service import operator_symbol
from utils.exceptions import DomainError

P = parse_partition

DIFFS = {1: 0, 2: 0, 3: 0, 4: 1, 5: 2, 6: 4, 7: 5, 8: 9}
SLOW_DIFFS = {9: 12, 10: 17, 11: 23}


def op(text, theory=None):
    return parse_operator(text, theory=theory)


def brute_force_operators(theory, rank):
    """Every factor pair of the right total size, filtered without rigid_partitions"""
    total = 2 * rank + (1 if theory == Theory.B else 0)
    found = set()
    for size in range(total + 1):
        for first in all_partitions(size):
            for second in all_partitions(total - size):
                try:
                    found.add(make_operator(theory, first, second, rank=rank))
                except DomainError:
                    continue
    return found


class TestRigidPartitions:
    def test_b13(self):
        expected = {P("1^13"), P("2^2 1^9"), P("2^4 1^5"), P("2^6 1"), P("3 2^2 1^6")}
        assert set(rigid_partitions(Theory.B, 13)) == expected

    def test_c12(self):
        expected = {P("1^12"), P("2 1^10"), P("2^3 1^6"), P("2^4 1^4"), P("2^5 1^2"), P("3^2 2 1^4")}
        assert set(rigid_partitions(Theory.C, 12)) == expected

    def test_d2_is_empty(self):
        assert rigid_partitions(Theory.D, 2) == ()

    def test_wrong_parity_is_empty(self):
        assert rigid_partitions(Theory.C, 7) == ()
        assert rigid_partitions(Theory.B, 6) == ()

    def test_descending_order(self, theory):
        for size in range(1, 20):
            listing = [p.parts for p in rigid_partitions(theory, size)]
            assert listing == sorted(listing, reverse=True)

    def test_negative_size(self):
        with pytest.raises(DomainError):
            rigid_partitions(Theory.B, -1)


class TestRigidOperators:
    def test_appendix_census(self, appendix_rows):
        b_ops = {make_operator(Theory.B, r.so13_first, r.so13_second) for r in appendix_rows}
        c_ops = {make_operator(Theory.C, r.sp12_first, r.sp12_second) for r in appendix_rows if r.has_sp12}
        assert len(rigid_operators(Theory.B, 6)) == 24
        assert len(rigid_operators(Theory.C, 6)) == 20
        assert set(rigid_operators(Theory.B, 6)) == b_ops
        assert set(rigid_operators(Theory.C, 6)) == c_ops

    @pytest.mark.parametrize("rank", range(1, 6))
    def test_matches_brute_force(self, theory, rank):
        assert set(rigid_operators(theory, rank)) == brute_force_operators(theory, rank)

    def test_rank_one(self):
        assert rigid_operators(Theory.B, 1) == (op("(1^3;-)_B"),)
        assert rigid_operators(Theory.C, 1) == (op("(1^2;-)_C"),)

    def test_invariants(self, theory):
        for rank in range(1, 8):
            listing = rigid_operators(theory, rank)
            assert len(set(listing)) == len(listing)
            for operator in listing:
                assert operator.first.size + operator.second.size == 2 * rank + (theory == Theory.B)
                if theory == Theory.B:
                    assert operator.first.size % 2 == 1
                    assert operator.second.is_empty or is_rigid(operator.second, Theory.D)
                if theory != Theory.B:
                    for factor in operator.factors:
                        assert factor.is_empty or is_valid(factor, theory)

    def test_rank_must_be_positive(self):
        with pytest.raises(DomainError):
            rigid_operators(Theory.C, 0)

    def test_equal_size_factors_ascend(self):
        for rank in range(1, 9):
            for operator in rigid_operators(Theory.C, rank):
                if operator.first.size == operator.second.size:
                    assert operator.first.parts <= operator.second.parts
                else:
                    assert operator.first.size > operator.second.size

    def test_deterministic(self):
        assert EnumerationService().rigid_operators(Theory.B, 7) == list(rigid_operators(Theory.B, 7))


def class_of(classes, operator):
    return next(c for c in classes if operator in c.b_members + c.c_members)


def move_closure(start):
    reached = set(start)
    frontier = list(reached)
    while frontier:
        for move in within_theory_moves(frontier.pop()):
            if move not in reached:
                reached.add(move)
                frontier.append(move)
    return reached


class TestSymbolClasses:
    def test_type_two_class(self, enumeration):
        target = class_of(enumeration.group_by_symbol(6), op("(2^3 1^2;1^4)_C"))
        assert set(target.b_members) == {op("(1^5;2^2 1^4)_B"), op("(2^2 1^3;1^6)_B")}
        assert target.c_members == (op("(2^3 1^2;1^4)_C"),)

    def test_type_one_class(self, enumeration):
        target = class_of(enumeration.group_by_symbol(6), op("(2^4 1;1^4)_B"))
        assert target.b_members == (op("(2^4 1;1^4)_B"),)
        assert target.c_members == ()

    def test_balanced_classes_at_rank_6(self, enumeration):
        classes = enumeration.group_by_symbol(6)
        balanced = [c for c in classes if c.balanced]
        assert len(balanced) == 15
        assert sum(len(c.b_members) for c in balanced) == 19
        assert sum(len(c.c_members) for c in balanced) == 19
        # every Sp(12) operator has a symbol partner
        assert all(c.b_members for c in classes if c.c_members)

    def test_surplus_sums_to_diff(self, enumeration):
        for rank in range(1, 8):
            classes = enumeration.group_by_symbol(rank)
            n_b = len(rigid_operators(Theory.B, rank))
            n_c = len(rigid_operators(Theory.C, rank))
            assert sum(c.surplus for c in classes) == n_b - n_c

    def test_balanced_classes_are_reached_by_transfer_and_moves(self, enumeration):
        uncovered = []
        for rank in range(1, 8):
            for symbol_class in enumeration.group_by_symbol(rank):
                if not symbol_class.balanced:
                    continue
                for sources, targets in (
                    (symbol_class.c_members, symbol_class.b_members),
                    (symbol_class.b_members, symbol_class.c_members),
                ):
                    images = [constructive_dual(m) for m in sources]
                    reached = move_closure(o.operator for o in images if o.rigidity_ok)
                    if not set(targets) <= reached:
                        uncovered.append(symbol_class)
                        break
        assert uncovered == [class_of(enumeration.group_by_symbol(7), op("(3^2 2 1^2;1^4)_C"))]
        exception = uncovered[0]
        assert exception.b_members == (op("(2^2 1^3;2^2 1^4)_B"),)
        assert exception.c_members == (op("(3^2 2 1^2;1^4)_C"),)
        for member in exception.b_members + exception.c_members:
            assert not constructive_dual(member).rigidity_ok

    def test_pair_relocation_joins_a_class(self):
        assert op("(1^9;1^4)_B") in within_theory_moves(op("(3 2^2 1^6;-)_B"))
        assert op("(3 2^2 1^6;-)_B") in within_theory_moves(op("(1^9;1^4)_B"))

    def test_members_share_symbol(self, enumeration):
        for symbol_class in enumeration.group_by_symbol(6):
            for member in symbol_class.b_members + symbol_class.c_members:
                assert operator_symbol(member) == symbol_class.symbol


class TestFindDuals:
    def test_type_two(self, enumeration):
        duals = enumeration.find_duals(op("(2^3 1^2;1^4)_C"))
        assert set(duals) == {op("(1^5;2^2 1^4)_B"), op("(2^2 1^3;1^6)_B")}

    def test_no_dual(self, enumeration):
        assert enumeration.find_duals(op("(2^4 1;1^4)_B")) == []

    def test_unipotent(self, enumeration):
        assert enumeration.find_duals(op("(1^13;-)_B")) == [op("(1^12;-)_C")]

    def test_d_includes_itself(self, enumeration):
        source = op("(2^2 1^4;-)_D")
        assert source in enumeration.find_duals(source)


class TestMismatchSeries:
    def test_diffs_up_to_8(self, enumeration):
        rows = enumeration.mismatch_series(8)
        assert {row.rank: row.diff for row in rows} == DIFFS
        assert all(row.diff == row.n_b - row.n_c for row in rows)
        six = rows[5]
        assert (six.n_b, six.n_c) == (24, 20)
        assert six.excess_ratio == pytest.approx(4 / 24)

    @pytest.mark.slow
    def test_diffs_9_to_11(self, enumeration):
        rows = enumeration.mismatch_series(11, min_rank=9)
        assert {row.rank: row.diff for row in rows} == SLOW_DIFFS

    def test_worker_pool_matches(self):
        assert EnumerationService(max_workers=2).mismatch_series(5) == EnumerationService(max_workers=1).mismatch_series(5)

    def test_bad_range(self, enumeration):
        with pytest.raises(DomainError):
            enumeration.mismatch_series(0)


class TestClassification:
    def test_rank_6(self, enumeration):
        report = enumeration.classify_problematic(6)
        type_one = {p.operator for p in report.type_one}
        type_two = {p.operator for p in report.type_two}
        assert type_one == {op("(2^4 1;1^4)_B"), op("(1^5;3 2^2 1)_B"), op("(2^2 1;3 2^2 1)_B")}
        assert type_two == {op("(1^5;2^2 1^4)_B"), op("(2^2 1^3;1^6)_B")}
        assert all(p.operator.theory == Theory.B for p in report.problematic)
        assert (report.n_b, report.n_c) == (24, 20)

    def test_structural_agreement_at_rank_6(self, enumeration):
        report = enumeration.classify_problematic(6)
        assert report.agreement_written == 4
        assert report.agreement_conjugate == 3

    def test_no_problems_below_rank_4(self, enumeration):
        for rank in range(1, 4):
            assert enumeration.classify_problematic(rank).problematic == ()


class TestStructuralTag:
    @pytest.mark.parametrize("text,written,conjugate", [
        ("(2^4 1;1^4)_B", StructuralTag.IB, StructuralTag.IB),
        ("(1^5;3 2^2 1)_B", StructuralTag.IB, StructuralTag.NONE),
        ("(1^5;2^2 1^4)_B", StructuralTag.IIB, StructuralTag.IIB),
        ("(1^6;2 1^4)_C", StructuralTag.IIC, StructuralTag.IIC),
        ("(2 1^4;2 1^4)_C", StructuralTag.NONE, StructuralTag.NONE),
    ])
    def test_tags(self, text, written, conjugate):
        operator = op(text)
        assert structural_tag(operator, LengthMode.WRITTEN) == written
        assert structural_tag(operator, LengthMode.CONJUGATE) == conjugate

    def test_unipotent_is_never_type_two(self):
        assert structural_tag(op("(2^3 1^6;-)_C")) != StructuralTag.IIC

    def test_d_has_no_tag(self):
        assert structural_tag(op("(2^2 1^4;-)_D")) == StructuralTag.NONE

