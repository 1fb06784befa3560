"""
Rigid Symbol Toolkit - Output Formatters

Renders a command result as text, JSON (sorted keys, indent 2) or CSV.
"""

import csv
import io
import json
from typing import Any, Dict, List

from pydantic import BaseModel, Field

from models.schemas import OutputFormat, OutputRecord, Partition, SurfaceOperator, MapOutcome


class CommandResult(BaseModel):
    """What a command hands back to the entry point"""
    record: OutputRecord
    text: List[str] = Field(default_factory=list)
    table: List[Dict[str, Any]] = Field(default_factory=list)
    status: int = 0


def export_operator(operator: SurfaceOperator) -> Dict[str, Any]:
    return {
        "theory": operator.theory.value,
        "rank": operator.rank,
        "first": operator.first.to_text(),
        "second": operator.second.to_text(),
        "text": operator.to_text(),
    }


def export_partition(partition: Partition) -> Dict[str, Any]:
    return {"text": partition.to_text(), "parts": list(partition.parts), "size": partition.size}


def export_outcome(outcome: MapOutcome) -> Dict[str, Any]:
    return {
        "map": outcome.map_name,
        "case": outcome.case.value,
        "theory": outcome.theory.value,
        "first": outcome.first.to_text(),
        "second": outcome.second.to_text(),
        "rigidity_ok": outcome.rigidity_ok,
        "violation": outcome.violation.describe() if outcome.violation else None,
        "violation_factor": outcome.violation_factor,
        "operator": export_operator(outcome.operator) if outcome.operator else None,
    }


def render_json(record: OutputRecord) -> str:
    return json.dumps(record.model_dump(mode="json", by_alias=True), sort_keys=True, indent=2, ensure_ascii=False)


def render_csv(table: List[Dict[str, Any]]) -> str:
    if not table:
        return ""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(table[0].keys()), lineterminator="\n")
    writer.writeheader()
    for row in table:
        writer.writerow(row)
    return buffer.getvalue().rstrip("\n")


def render(result: CommandResult, output_format: OutputFormat) -> str:
    if output_format == OutputFormat.JSON:
        return render_json(result.record)
    if output_format == OutputFormat.CSV:
        return render_csv(result.table)
    return "\n".join(result.text)
