"""
Rigid Symbol Toolkit - Command Handlers
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

from models.schemas import (
    LengthMode, MismatchReport, OutputFormat, OutputRecord, Partition, SurfaceOperator,
    Theory, Verdict
)
from cli.formatters import (
    CommandResult, export_operator, export_outcome, export_partition, render
)
from services.appendix_service import AppendixVerificationService, summarise
from services.dimension_service import dimension, dimension_terms
from services import duality_service as maps
from services.enumeration_service import EnumerationService
from services.partition_service import (
    parse_operator, parse_partition, make_operator, pair_structure, rigidity_violation,
    validity_problem
)
from services.symbol_service import compute_symbol, compute_via_rows, operator_symbol
from utils.exceptions import DomainError, FixtureError, PartitionParseError
from utils.settings import VALID_LOG_LEVELS, settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DIFF = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

PARTITION_MAPS = ("xs", "xs-inv", "ys", "ys-inv", "wb", "wc", "wcc")
OPERATOR_MAPS = ("cbeo", "eo", "transfer")


def _theory(text: str) -> Theory:
    try:
        return Theory(text.upper())
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown theory {text!r}, expected B, C or D")


def _record(command: str, inputs: Dict[str, Any], results: Any, verdicts: Optional[Dict[str, Any]] = None) -> OutputRecord:
    return OutputRecord(schema=settings.schema_version, command=command, inputs=inputs,
                        results=results, verdicts=verdicts)


def _is_pair(text: str) -> bool:
    return text.strip().startswith("(")


def _operator_or_partition(text: str, theory: Optional[Theory], rank: Optional[int]) -> Union[SurfaceOperator, Partition]:
    if _is_pair(text):
        return parse_operator(text, theory=theory, rank=rank)
    if theory is None:
        raise PartitionParseError("--theory is required for a partition", token=text)
    return parse_partition(text)


def cmd_validate(args: argparse.Namespace) -> CommandResult:
    """Check validity and rigidity; a failing rule is a domain error"""
    inputs = {"input": args.input, "theory": args.theory.value if args.theory else None}
    target = _operator_or_partition(args.input, args.theory, args.rank)

    if isinstance(target, SurfaceOperator):
        # make_operator already rejected invalid or non-rigid factors
        text = [f"{target.to_text()}: valid, rigid (rank {target.rank})"]
        results = export_operator(target)
        return CommandResult(record=_record("validate", inputs, results), text=text, table=[results])

    partition, theory = target, args.theory
    if partition.is_empty:
        if theory == Theory.B:
            raise DomainError("the empty partition is not a B partition (B validity)", rule="B validity")
        results = {"partition": "-", "valid": True, "rigid": True, "rows": []}
        return CommandResult(record=_record("validate", inputs, results), text=["valid, rigid (∅)"], table=[results])

    problem = validity_problem(partition, theory)
    if problem:
        raise DomainError(problem, rule=problem)
    violation = rigidity_violation(partition, theory)
    if violation:
        raise DomainError(violation.describe(), rule=violation.describe())

    structure = pair_structure(partition, theory)
    results = {
        "partition": partition.to_text(),
        "valid": True,
        "rigid": True,
        "rows": [{"index": i, "length": structure.rows[i - 1], "role": role.value} for i, role in structure.pairing],
    }
    text = [f"{partition.to_text()}: valid, rigid ({theory.value})"]
    text += [f"  row {i}: length {structure.rows[i - 1]}, {role.value}" for i, role in structure.pairing]
    table = [{"partition": partition.to_text(), "theory": theory.value, "valid": True, "rigid": True}]
    return CommandResult(record=_record("validate", inputs, results), text=text, table=table)


def cmd_symbol(args: argparse.Namespace) -> CommandResult:
    inputs = {"input": args.input, "theory": args.theory.value if args.theory else None, "via_rows": args.via_rows}
    target = _operator_or_partition(args.input, args.theory, args.rank)
    if isinstance(target, SurfaceOperator):
        symbol = operator_symbol(target)
    elif args.via_rows:
        symbol = compute_via_rows(target, args.theory)
    else:
        symbol = compute_symbol(target, args.theory)

    results = symbol.to_export()
    table = [{"top": " ".join(map(str, symbol.top)), "bottom": " ".join(map(str, symbol.bottom))}]
    return CommandResult(record=_record("symbol", inputs, results), text=[symbol.to_text()], table=table)


def cmd_dim(args: argparse.Namespace) -> CommandResult:
    inputs = {"input": args.input, "theory": args.theory.value if args.theory else None, "rank": args.rank}
    target = _operator_or_partition(args.input, args.theory, args.rank)
    if isinstance(target, Partition):
        target = make_operator(args.theory, target, rank=args.rank)

    value = dimension(target)
    terms = {
        "first": dimension_terms(target.first).model_dump(mode="json"),
        "second": dimension_terms(target.second).model_dump(mode="json"),
    }
    results = {"operator": target.to_text(), "dimension": value, "terms": terms}
    return CommandResult(
        record=_record("dim", inputs, results),
        text=[str(value)],
        table=[{"operator": target.to_text(), "dimension": value}],
    )


def _partition_map(name: str, partition: Partition) -> CommandResult:
    inputs = {"map": name, "input": partition.to_text()}
    domain = maps.MAP_DOMAINS[name]
    if name in maps.MAPS_ON_PARTITIONS:
        image = maps.MAPS_ON_PARTITIONS[name](partition)
        codomain = maps.MAP_CODOMAINS[name]
        preserved = compute_symbol(image, codomain) == compute_symbol(partition, domain)
        results = {"image": export_partition(image), "theory": codomain.value}
        shown = image.to_text()
    else:
        image_op = {"wb": maps.wb, "wc": maps.wc, "wcc": maps.wcc}[name](partition)
        if name == "wcc":
            source = make_operator(Theory.C, partition, partition)
        else:
            source = make_operator(domain, partition)
        preserved = maps.preserves_symbol(source, image_op)
        results = {"image": export_operator(image_op), "dimension_preserved": dimension(source) == dimension(image_op)}
        shown = image_op.to_text()

    verdict = Verdict.PASS if preserved else Verdict.FAIL
    results["symbol_preserved"] = preserved
    return CommandResult(
        record=_record("map", inputs, results, verdicts={"symbol": verdict.value}),
        text=[shown, f"symbol preserved: {'yes' if preserved else 'no'}"],
        table=[{"map": name, "input": partition.to_text(), "image": shown, "symbol_preserved": preserved}],
    )


def _operator_map(name: str, operator: SurfaceOperator) -> CommandResult:
    inputs = {"map": name, "input": operator.to_text()}
    if name == "transfer":
        if operator.theory == Theory.C:
            outcome = maps.transfer_c_to_b(operator)
        elif operator.theory == Theory.B:
            outcome = maps.transfer_b_to_c(operator)
        else:
            raise DomainError("transfer needs a B or C operator", rule="theory B or C")
        preserved = outcome.operator is not None and maps.preserves_symbol(operator, outcome.operator)
        results = export_outcome(outcome)
        results["symbol_preserved"] = preserved
        verdicts = {"rigidity": Verdict.PASS.value if outcome.rigidity_ok else Verdict.FAIL.value}
        if outcome.rigidity_ok:
            verdicts["symbol"] = Verdict.PASS.value if preserved else Verdict.FAIL.value
        text = [f"case {outcome.case.value}", outcome.describe()]
        if outcome.rigidity_ok:
            text.append(f"symbol preserved: {'yes' if preserved else 'no'}")
        table = [{"map": name, "input": operator.to_text(), "case": outcome.case.value,
                  "image": outcome.describe(), "rigidity_ok": outcome.rigidity_ok}]
        return CommandResult(record=_record("map", inputs, results, verdicts), text=text, table=table)

    image = maps.cb_eo(operator) if name == "cbeo" else maps.eo(operator)
    preserved = maps.preserves_symbol(operator, image)
    results = {"image": export_operator(image), "symbol_preserved": preserved}
    verdict = Verdict.PASS if preserved else Verdict.FAIL
    return CommandResult(
        record=_record("map", inputs, results, verdicts={"symbol": verdict.value}),
        text=[image.to_text(), f"symbol preserved: {'yes' if preserved else 'no'}"],
        table=[{"map": name, "input": operator.to_text(), "image": image.to_text(), "symbol_preserved": preserved}],
    )


_DEFAULT_OPERATOR_THEORY = {"cbeo": Theory.C, "eo": Theory.B}


def cmd_map(args: argparse.Namespace) -> CommandResult:
    name = args.map_name
    if name in PARTITION_MAPS:
        if _is_pair(args.input):
            raise PartitionParseError(f"map {name} takes a single partition", token=args.input)
        return _partition_map(name, parse_partition(args.input))

    theory = args.theory or _DEFAULT_OPERATOR_THEORY.get(name)
    operator = parse_operator(args.input, theory=theory, rank=args.rank)
    return _operator_map(name, operator)


def cmd_enumerate(args: argparse.Namespace) -> CommandResult:
    service = EnumerationService()
    inputs = {"theory": args.theory.value, "rank": args.rank, "pairs": args.pairs}
    if args.pairs:
        operators = service.rigid_operators(args.theory, args.rank)
        rows = [export_operator(op) for op in operators]
        text = [op.to_text() for op in operators] + [f"{len(operators)} operators"]
    else:
        size = 2 * args.rank + (1 if args.theory == Theory.B else 0)
        partitions = service.rigid_partitions(args.theory, size)
        rows = [export_partition(p) for p in partitions]
        text = [p.to_text() for p in partitions] + [f"{len(partitions)} partitions"]
    table = [{k: v for k, v in row.items() if k != "parts"} for row in rows]
    return CommandResult(record=_record("enumerate", inputs, rows), text=text, table=table)


def cmd_dual(args: argparse.Namespace) -> CommandResult:
    operator = parse_operator(args.input, theory=args.theory, rank=args.rank)
    service = EnumerationService()
    duals = service.find_duals(operator)
    outcome = maps.constructive_dual(operator)

    inputs = {"input": args.input, "theory": operator.theory.value, "rank": operator.rank}
    results = {
        "operator": export_operator(operator),
        "symbol": operator_symbol(operator).to_export(),
        "duals": [export_operator(d) for d in duals],
        "constructive": export_outcome(outcome),
    }
    text = [f"symbol {operator_symbol(operator).to_text()}"]
    text += [d.to_text() for d in duals] or ["no dual with an equal symbol"]
    text.append(f"constructive ({outcome.map_name}) {outcome.describe()}")
    table = [export_operator(d) for d in duals]
    return CommandResult(record=_record("dual", inputs, results), text=text, table=table)


def cmd_mismatch(args: argparse.Namespace) -> CommandResult:
    service = EnumerationService(max_workers=args.workers)
    rows = service.mismatch_series(args.max_rank, min_rank=args.min_rank)
    table = [row.model_dump(mode="json") for row in rows]
    text = ["n  n_B  n_C  diff"] + [f"{r.rank}  {r.n_b}  {r.n_c}  {r.diff}" for r in rows]
    inputs = {"max_rank": args.max_rank, "min_rank": args.min_rank}
    return CommandResult(record=_record("mismatch", inputs, table), text=text, table=table)


def _report_export(report: MismatchReport) -> Dict[str, Any]:
    return {
        "rank": report.rank,
        "n_b": report.n_b,
        "n_c": report.n_c,
        "classes": len(report.classes),
        "unbalanced": [
            {
                "symbol": c.symbol.to_export(),
                "b_members": [op.to_text() for op in c.b_members],
                "c_members": [op.to_text() for op in c.c_members],
            }
            for c in report.unbalanced_classes
        ],
        "problematic": [
            {
                "operator": p.operator.to_text(),
                "kind": p.kind.value,
                LengthMode.WRITTEN.value: p.structural_tag.value,
                LengthMode.CONJUGATE.value: p.structural_tag_conjugate.value,
                "agrees": p.agrees,
                "agrees_conjugate": p.agrees_conjugate,
            }
            for p in report.problematic
        ],
        "agreement": {
            LengthMode.WRITTEN.value: report.agreement_written,
            LengthMode.CONJUGATE.value: report.agreement_conjugate,
        },
    }


def cmd_classify(args: argparse.Namespace) -> CommandResult:
    report = EnumerationService().classify_problematic(args.rank)
    results = _report_export(report)
    text = [f"rank {report.rank}: n_B={report.n_b} n_C={report.n_c} classes={len(report.classes)}"]
    for p in report.problematic:
        text.append(
            f"{p.kind.value}: {p.operator.to_text()} "
            f"[written {p.structural_tag.value}, conjugate {p.structural_tag_conjugate.value}]"
        )
    total = len(report.problematic)
    text.append(f"structural tag agrees: written {report.agreement_written}/{total}, "
                f"conjugate {report.agreement_conjugate}/{total}")
    return CommandResult(
        record=_record("classify", {"rank": args.rank}, results),
        text=text,
        table=results["problematic"],
    )


def cmd_verify_appendix(args: argparse.Namespace) -> CommandResult:
    fixture_path = None
    if args.fixtures:
        fixture_path = Path(args.fixtures) / settings.appendix_fixture
    report = AppendixVerificationService(fixture_path).verify(row_number=args.row)

    verdicts = {
        "passed": report.passed,
        "columns": report.columns,
        "table_checks": {k: v.value for k, v in report.table_checks.items()},
        "first_mismatch": report.first_mismatch,
    }
    results = {
        "rows": [{"num": r.num, "checks": {k: v.value for k, v in r.checks.items()}} for r in report.rows],
        "unmatched_sp12": report.unmatched_sp12,
    }
    text = [
        f"row {r.num}: {'pass' if r.passed else 'FAIL'} "
        + " ".join(f"{k}={v.value}" for k, v in r.checks.items())
        for r in report.rows
    ]
    text += summarise(report)
    text.append(f"unmatched on the Sp(12) side: {', '.join(map(str, report.unmatched_sp12)) or 'none'}")
    text += report.table_messages
    if report.first_mismatch:
        text.append(f"first mismatch: {report.first_mismatch}")
    table = [{"num": r.num, **{k: v.value for k, v in r.checks.items()}} for r in report.rows]
    return CommandResult(
        record=_record("verify-appendix", {"row": args.row, "fixtures": args.fixtures}, results, verdicts),
        text=text,
        table=table,
        status=EXIT_OK if report.passed else EXIT_DIFF,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigidsym",
        description="Symbols, dimensions and S-duality maps of rigid surface operators",
    )
    parser.add_argument("--format", choices=[f.value for f in OutputFormat],
                        default=settings.default_format, help="output format")
    parser.add_argument("--log-level", type=str.upper, default=settings.log_level.upper(),
                        choices=VALID_LOG_LEVELS, help="logging level (stderr)")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Callable[[argparse.Namespace], CommandResult], help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = command("validate", cmd_validate, "check validity and rigidity")
    p.add_argument("input", help='partition ("3^2 2 1^4", "-" for ∅) or pair "(first;second)"')
    p.add_argument("--theory", type=_theory)
    p.add_argument("--rank", type=int)

    p = command("symbol", cmd_symbol, "symbol of a partition or operator")
    p.add_argument("input")
    p.add_argument("--theory", type=_theory)
    p.add_argument("--rank", type=int)
    p.add_argument("--via-rows", action="store_true", help="sum the per-row contributions")

    p = command("dim", cmd_dim, "dimension of an operator")
    p.add_argument("input")
    p.add_argument("--theory", type=_theory)
    p.add_argument("--rank", type=int)

    p = command("map", cmd_map, "apply a duality map")
    p.add_argument("map_name", choices=PARTITION_MAPS + OPERATOR_MAPS)
    p.add_argument("input")
    p.add_argument("--theory", type=_theory)
    p.add_argument("--rank", type=int)

    p = command("enumerate", cmd_enumerate, "list rigid partitions or operators")
    p.add_argument("--theory", type=_theory, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--pairs", action="store_true", help="list operators instead of partitions")

    p = command("dual", cmd_dual, "symbol-matched dual candidates")
    p.add_argument("input")
    p.add_argument("--theory", type=_theory)
    p.add_argument("--rank", type=int)

    p = command("mismatch", cmd_mismatch, "n_B - n_C per rank")
    p.add_argument("--max-rank", type=int, required=True)
    p.add_argument("--min-rank", type=int, default=1)
    p.add_argument("--workers", type=int, default=None, help="process pool size")

    p = command("classify", cmd_classify, "problematic operators at one rank")
    p.add_argument("--rank", type=int, required=True)

    p = command("verify-appendix", cmd_verify_appendix, "reproduce the SO(13)/Sp(12) table")
    p.add_argument("--row", type=int)
    p.add_argument("--fixtures", default=None, help="fixture directory (default RIGIDSYM_FIXTURES)")
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command, print its output; returns the exit status"""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.getLogger().setLevel(args.log_level)

    try:
        result = args.handler(args)
    except PartitionParseError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except FixtureError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DIFF

    output = render(result, OutputFormat(args.format))
    if output:
        print(output)
    return result.status
