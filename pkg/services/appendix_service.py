"""
Rigid Symbol Toolkit - Appendix Verification Service

Recomputes every row of the SO(13)/Sp(12) table: symbols, dimensions, the
census in both directions, the symbol pairing, the surplus of every symbol
class and, where the Type column names one, the map that produces the SO(13)
operator from the Sp(12) one.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from models.schemas import (
    AppendixRow, RowVerdict, SurfaceOperator, SymbolClass, Theory, Verdict, VerificationReport
)
from services.dimension_service import dimension
from services.duality_service import cb_eo, constructive_dual, wb, wc, wcc
from services.enumeration_service import EnumerationService, rigid_operators
from services.partition_service import make_operator
from services.symbol_service import operator_symbol
from utils.exceptions import DomainError, FixtureError
from utils.fixtures import load_appendix

logger = logging.getLogger(__name__)

APPENDIX_RANK = 6
CHECKS = ("so13_symbol", "so13_dim", "sp12_symbol", "sp12_dim", "census", "pairing", "map")


class AppendixVerificationService:
    """Service for reproducing the SO(13)/Sp(12) table"""

    def __init__(self, fixture_path: Optional[Path] = None):
        self.fixture_path = fixture_path
        self.enumeration = EnumerationService(max_workers=1)
        self._classes: Optional[List[SymbolClass]] = None

    @property
    def classes(self) -> List[SymbolClass]:
        if self._classes is None:
            self._classes = self.enumeration.group_by_symbol(APPENDIX_RANK)
        return self._classes

    def _class_of(self, operator: SurfaceOperator) -> Optional[SymbolClass]:
        members = "b_members" if operator.theory == Theory.B else "c_members"
        return next((c for c in self.classes if operator in getattr(c, members)), None)

    def _operators(self, row: AppendixRow) -> Tuple[SurfaceOperator, Optional[SurfaceOperator]]:
        try:
            b_op = make_operator(Theory.B, row.so13_first, row.so13_second, rank=APPENDIX_RANK)
            c_op = None
            if row.has_sp12:
                c_op = make_operator(Theory.C, row.sp12_first, row.sp12_second, rank=APPENDIX_RANK)
        except DomainError as e:
            raise FixtureError(f"row {row.num}: {e}") from e
        return b_op, c_op

    def reconstruct(self, row: AppendixRow) -> Optional[Tuple[str, SurfaceOperator, SurfaceOperator]]:
        """(map name, image, expected) for the map the Type column names, None when no map applies"""
        b_op, c_op = self._operators(row)
        if c_op is None:
            return None
        if row.type == "CB_eo":
            return "cb_eo", cb_eo(c_op), b_op
        if row.type != "CB":
            return None
        if c_op.is_unipotent:
            return "wc", wc(c_op.first), b_op
        if b_op.is_unipotent:
            return "wb", wb(b_op.first), c_op
        if c_op.first == c_op.second:
            return "wcc", wcc(c_op.first), b_op
        outcome = constructive_dual(c_op)
        if not outcome.rigidity_ok:
            raise DomainError(f"row {row.num}: {outcome.describe()}")
        return outcome.case.value, outcome.operator, b_op

    def verify_row(self, row: AppendixRow) -> RowVerdict:
        verdict = RowVerdict(num=row.num)
        b_op, c_op = self._operators(row)

        def record(check: str, expected: Any, computed: Any, skip: bool = False) -> None:
            if skip:
                verdict.checks[check] = Verdict.SKIP
                return
            ok = expected == computed
            verdict.checks[check] = Verdict.PASS if ok else Verdict.FAIL
            if not ok:
                verdict.messages.append(f"row {row.num} column {check}: expected {expected}, computed {computed}")

        record("so13_symbol", row.symbol, operator_symbol(b_op))
        record("so13_dim", row.dim, dimension(b_op))
        record("sp12_symbol", row.symbol, operator_symbol(c_op) if c_op else None, skip=c_op is None)
        record("sp12_dim", row.dim, dimension(c_op) if c_op else None, skip=c_op is None)

        in_census = b_op in rigid_operators(Theory.B, APPENDIX_RANK) and (
            c_op is None or c_op in rigid_operators(Theory.C, APPENDIX_RANK)
        )
        record("census", True, in_census)

        if c_op is not None:
            duals = self.enumeration.find_duals(c_op)
            record("pairing", b_op.to_text(), b_op.to_text() if b_op in duals else f"no {b_op.to_text()} among {len(duals)} duals")
        else:
            # An SO(13) operator without a partner must sit in the surplus of its class
            symbol_class = self._class_of(b_op)
            if symbol_class is None:
                state = "no symbol class"
            elif symbol_class.surplus > 0:
                state = "surplus"
            else:
                state = f"balanced class ({len(symbol_class.b_members)} B, {len(symbol_class.c_members)} C)"
            record("pairing", "surplus", state)

        try:
            rebuilt = self.reconstruct(row)
        except DomainError as e:
            verdict.checks["map"] = Verdict.FAIL
            verdict.messages.append(f"row {row.num} column map: {e}")
        else:
            if rebuilt is None:
                record("map", None, None, skip=True)
            else:
                name, image, expected = rebuilt
                record("map", f"{name} -> {expected.to_text()}", f"{name} -> {image.to_text()}")
        return verdict

    def unmatched_rows(self, rows: List[AppendixRow]) -> List[int]:
        """Rows whose SO(13) operator is left over once every Sp(12) class member is paired"""
        available = {id(c): list(c.c_members) for c in self.classes}
        unmatched = []
        for row in rows:
            b_op, c_op = self._operators(row)
            symbol_class = self._class_of(b_op)
            partners = available.get(id(symbol_class), [])
            if c_op is not None and c_op in partners:
                partners.remove(c_op)
            else:
                unmatched.append(row.num)
        return unmatched

    def _check_table(self, rows: List[AppendixRow], unmatched: List[int], report: VerificationReport) -> None:
        operators = [self._operators(row) for row in rows]

        def record(check: str, problems: List[str]) -> None:
            report.table_checks[check] = Verdict.FAIL if problems else Verdict.PASS
            report.table_messages.extend(f"table check {check}: {problem}" for problem in problems)

        for check, theory, listed in (
            ("census_b", Theory.B, [b for b, _ in operators]),
            ("census_c", Theory.C, [c for _, c in operators if c is not None]),
        ):
            expected = set(rigid_operators(theory, APPENDIX_RANK))
            found = set(listed)
            problems = []
            missing = sorted(expected - found, key=lambda o: o.sort_key())
            extra = sorted(found - expected, key=lambda o: o.sort_key())
            if missing:
                problems.append("missing " + ", ".join(o.to_text() for o in missing))
            if extra:
                problems.append("outside the census " + ", ".join(o.to_text() for o in extra))
            if len(found) < len(listed):
                problems.append(f"{len(listed) - len(found)} repeated")
            record(check, problems)

        b_of_row = {row.num: b for row, (b, _) in zip(rows, operators)}
        problems = []
        for symbol_class in self.classes:
            count = sum(1 for num in unmatched if b_of_row[num] in symbol_class.b_members)
            if count != max(symbol_class.surplus, 0):
                problems.append(
                    f"class {symbol_class.symbol.to_text()} has {count} rows without an Sp(12) partner, "
                    f"surplus is {symbol_class.surplus}"
                )
        record("surplus", problems)

    def verify(self, row_number: Optional[int] = None) -> VerificationReport:
        """Verify every fixture row (or a single one) and summarise per column"""
        all_rows = load_appendix(self.fixture_path)
        rows = all_rows
        if row_number is not None:
            rows = [r for r in all_rows if r.num == row_number]
            if not rows:
                raise FixtureError(f"no appendix row {row_number}")

        report = VerificationReport()
        for row in rows:
            verdict = self.verify_row(row)
            report.rows.append(verdict)
            if report.first_mismatch is None and verdict.messages:
                report.first_mismatch = verdict.messages[0]

        unmatched = self.unmatched_rows(all_rows)
        selected = {row.num for row in rows}
        report.unmatched_sp12 = [num for num in unmatched if num in selected]
        if row_number is None:
            self._check_table(all_rows, unmatched, report)
            if report.first_mismatch is None and report.table_messages:
                report.first_mismatch = report.table_messages[0]

        for check in CHECKS:
            tally: Dict[str, int] = {v.value: 0 for v in Verdict}
            for verdict in report.rows:
                tally[verdict.checks.get(check, Verdict.SKIP).value] += 1
            report.columns[check] = tally

        if report.passed:
            logger.info(f"Appendix verified: {len(report.rows)} rows")
        else:
            logger.warning(f"Appendix mismatch: {report.first_mismatch}")
        return report


def summarise(report: VerificationReport) -> List[str]:
    """Per-column pass counts, one line each"""
    lines = []
    for check, tally in report.columns.items():
        checked = tally["pass"] + tally["fail"]
        lines.append(f"{check}: {tally['pass']}/{checked} pass" + (f", {tally['skip']} skipped" if tally["skip"] else ""))
    for check, verdict in report.table_checks.items():
        lines.append(f"table {check}: {verdict.value}")
    return lines

