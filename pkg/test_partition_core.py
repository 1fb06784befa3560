#!/usr/bin/env python3
"""
Test script for partition parsing, conjugation, validity, rigidity and the
pairwise structure of conjugate rows
"""

import pytest
from hypothesis import given, strategies as st

from models.schemas import (
    Partition, Theory, RowRole, RigidityClause
)
from services.enumeration_service import rigid_partitions
from services.partition_service import (
    EMPTY, add, all_partitions, conjugate, conjugate_rows, format_partition,
    from_conjugate_rows, has_only_even_rows, has_only_odd_rows, is_rigid, is_valid,
    make_operator, pair_structure, parse_operator, parse_pair, parse_partition,
    rigidity_violation, split_by_conj_parity
)
from utils.exceptions import DomainError, PartitionParseError

P = parse_partition

B16 = "5 4^2 3^3 2^4 1^3"


class TestParsing:
    def test_exponent_notation(self):
        assert P("2^2 1^9").parts == (2, 2) + (1,) * 9

    def test_empty_tokens(self):
        assert P("-") == EMPTY
        assert P("0") == EMPTY
        assert P("∅") == EMPTY

    def test_bracket_list_normalizes(self):
        assert format_partition(P("[5,4,4,3,3,3,2,2,2,2,1,1,1]")) == B16

    def test_braced_exponent(self):
        assert P("1^{13}") == P("1^13")

    @pytest.mark.parametrize("text,token", [
        ("3 4", "4"),
        ("2^0", "2^0"),
        ("0 1", "0"),
        ("2 x", "x"),
        ("[1,2]", "2"),
        ("[²]", "²"),
        ("[1,٣]", "٣"),
        ("٣ 1", "٣"),
    ])
    def test_errors_name_the_token(self, text, token):
        with pytest.raises(PartitionParseError) as info:
            P(text)
        assert info.value.token == token
        assert repr(token) in str(info.value)

    def test_blank_text(self):
        with pytest.raises(PartitionParseError):
            P("   ")

    def test_pair(self):
        first, second, theory = parse_pair("(2 1^8;1^2)_C")
        assert (first, second, theory) == (P("2 1^8"), P("1^2"), Theory.C)

    def test_pair_with_comma_and_empty(self):
        first, second, theory = parse_pair("(1^12,-)")
        assert first == P("1^12") and second == EMPTY and theory is None

    def test_pair_needs_parentheses(self):
        with pytest.raises(PartitionParseError):
            parse_pair("1^3;1^10")

    @given(st.lists(st.integers(min_value=1, max_value=9), max_size=15))
    def test_format_then_parse_is_identity(self, parts):
        partition = Partition(parts=tuple(sorted(parts, reverse=True)))
        assert P(format_partition(partition)) == partition


class TestConjugate:
    def test_examples(self):
        assert conjugate_rows(P("2^4 1^8")) == (12, 4)
        assert conjugate(EMPTY) == EMPTY
        assert conjugate_rows(P(B16)) == (13, 10, 6, 3, 1)

    def test_involution_up_to_30(self):
        for n in range(31):
            for partition in all_partitions(n):
                assert conjugate(conjugate(partition)) == partition

    def test_from_conjugate_rows_sorts_and_drops_zeros(self):
        assert from_conjugate_rows([4, 0, 12]) == P("2^4 1^8")

    def test_from_conjugate_rows_rejects_negative(self):
        with pytest.raises(DomainError):
            from_conjugate_rows([3, -1])

    def test_all_partitions_counts(self):
        assert [len(list(all_partitions(n))) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]


class TestAdd:
    def test_examples(self):
        assert add(P("2 1^4"), P("1^6")) == P("3 2^4 1")
        assert add(P("3 1"), EMPTY) == P("3 1")
        assert add(P("1^3"), P("1^3")) == P("2^3")

    @given(st.lists(st.integers(1, 6), max_size=8), st.lists(st.integers(1, 6), max_size=8))
    def test_conjugate_rows_merge(self, a, b):
        la = Partition(parts=tuple(sorted(a, reverse=True)))
        lb = Partition(parts=tuple(sorted(b, reverse=True)))
        merged = sorted(conjugate_rows(la) + conjugate_rows(lb), reverse=True)
        assert tuple(merged) == conjugate_rows(add(la, lb))


class TestValidityAndRigidity:
    def test_validity_examples(self):
        assert not is_valid(P("3^2 2^3 1^2"), Theory.D)
        assert is_valid(P("2^2 1^9"), Theory.B)
        assert is_valid(P("2 1^10"), Theory.C)

    def test_size_parity(self):
        assert not is_valid(P("1^2"), Theory.B)
        assert not is_valid(P("1^3"), Theory.D)

    def test_rigidity_examples(self):
        assert not is_rigid(P("1^2"), Theory.D)
        assert is_rigid(P("3 2^2 1^6"), Theory.B)
        assert not is_rigid(P("3^3 2^2"), Theory.B)

    def test_violation_names_clause_and_part(self):
        violation = rigidity_violation(P("2^2"), Theory.C)
        assert violation.clause == RigidityClause.GAP
        violation = rigidity_violation(P("2^2 1^2"), Theory.C)
        assert violation.clause == RigidityClause.MULTIPLICITY_TWO
        assert violation.part == 2
        assert violation.describe() == "part 2 appears exactly twice (C rigidity)"

    def test_trailing_gap(self):
        violation = rigidity_violation(P("3^3 2^2"), Theory.B)
        assert violation.clause == RigidityClause.GAP
        assert violation.part == 2
        assert violation.describe() == "gap below part 2 (B rigidity)"

    def test_invalid_partition_is_a_domain_error(self):
        with pytest.raises(DomainError):
            is_rigid(P("2 1"), Theory.B)

    def test_smallest_part_is_one(self, theory):
        for size in range(1, 27):
            for partition in rigid_partitions(theory, size):
                assert partition.parts[-1] == 1

    def test_first_rows_parity(self, theory):
        for size in range(1, 27):
            for partition in rigid_partitions(theory, size):
                rows = conjugate_rows(partition)
                if theory == Theory.B:
                    assert rows[0] % 2 == 1
                elif theory == Theory.D:
                    assert rows[0] % 2 == 0
                elif len(rows) > 1:
                    assert rows[0] % 2 == rows[1] % 2


class TestPairStructure:
    def test_b_leftover_row(self):
        structure = pair_structure(P("2^2 1^9"), Theory.B)
        assert structure.rows == (11, 2)
        assert structure.roles == (RowRole.UNPAIRED_FIRST, RowRole.FIRST_OF_PAIR)
        assert structure.pairs == ()
        assert structure.leftover == 2

    def test_c_pairs_from_first_row(self):
        structure = pair_structure(P("2 1^10"), Theory.C)
        assert structure.rows == (11, 1)
        assert structure.pairs == ((1, 2),)

    def test_d_valid_but_not_rigid(self):
        structure = pair_structure(P("3^2 2^2 1^2"), Theory.D)
        assert structure.rows == (6, 4, 2)
        assert structure.roles[0] == RowRole.UNPAIRED_FIRST
        assert structure.pairs == ((2, 3),)

    def test_rejects_invalid_and_empty(self):
        with pytest.raises(DomainError):
            pair_structure(P("3^2 2^3 1^2"), Theory.D)
        with pytest.raises(DomainError):
            pair_structure(EMPTY, Theory.C)

    def test_rigid_pairs_close(self, theory):
        for size in range(1, 27):
            for partition in rigid_partitions(theory, size):
                structure = pair_structure(partition, theory)
                for first, second in structure.pairs:
                    assert structure.rows[first - 1] % 2 == structure.rows[second - 1] % 2


class TestSplit:
    def test_b16_split(self):
        odd, even = split_by_conj_parity(P(B16))
        assert odd == P("3 2^2 1^10")
        assert even == P("2^6 1^4")

    def test_single_odd_row(self):
        assert split_by_conj_parity(P("1^13")) == (P("1^13"), EMPTY)
        assert split_by_conj_parity(P("2 1^10")) == (P("2 1^10"), EMPTY)

    def test_reconstitutes(self):
        for n in range(1, 16):
            for partition in all_partitions(n):
                odd, even = split_by_conj_parity(partition)
                assert has_only_odd_rows(odd) and has_only_even_rows(even)
                assert from_conjugate_rows(conjugate_rows(odd) + conjugate_rows(even)) == partition


class TestOperators:
    def test_c_pair_is_unordered(self):
        op = make_operator(Theory.C, P("1^2"), P("2 1^8"))
        assert (op.first, op.second) == (P("2 1^8"), P("1^2"))
        assert op.rank == 6

    def test_equal_sizes_order_by_ascending_parts(self):
        for first, second in ((P("2 1^4"), P("1^6")), (P("1^6"), P("2 1^4"))):
            op = make_operator(Theory.C, first, second)
            assert (op.first, op.second) == (P("1^6"), P("2 1^4"))
            assert op.to_text() == "(1^6; 2 1^4)_C"

    def test_rank_mismatch(self):
        with pytest.raises(DomainError):
            make_operator(Theory.B, P("1^3"), P("1^10"), rank=5)

    def test_non_rigid_factor(self):
        with pytest.raises(DomainError) as info:
            parse_operator("(1;1^2)_B")
        assert "exactly twice" in str(info.value)

    def test_b_zero_factor(self):
        op = parse_operator("(1; 1^12)", theory=Theory.B)
        assert op.rank == 6
        assert op.to_text() == "(1; 1^12)_B"

    def test_suffix_conflict(self):
        with pytest.raises(PartitionParseError):
            parse_operator("(1^12;-)_C", theory=Theory.B)
