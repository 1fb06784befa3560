"""
Rigid Symbol Toolkit - Fixture Loading
"""

import csv
import logging
from pathlib import Path
from typing import List, Optional

from models.schemas import AppendixRow, Partition, Symbol
from services.partition_service import parse_partition
from utils.exceptions import FixtureError, RigidSymError

logger = logging.getLogger(__name__)

APPENDIX_COLUMNS = (
    "num", "type", "sp12_first", "sp12_second", "so13_first", "so13_second",
    "dim", "symbol_top", "symbol_bottom", "fingerprint",
)
MISSING = "-"


class FixtureStore:
    rows: Optional[List[AppendixRow]] = None
    path: Optional[Path] = None


# Global fixture cache
store = FixtureStore()


def _symbol_row(text: str) -> tuple:
    text = text.strip()
    if text in ("", MISSING):
        return ()
    return tuple(int(x) for x in text.split())


def _optional_partition(text: str) -> Optional[Partition]:
    # "-" in the Sp columns means no Sp(12) counterpart; "-" elsewhere is ∅
    return None if text.strip() == MISSING else parse_partition(text)


def _row_from_record(record: dict, line: int) -> AppendixRow:
    try:
        sp12_first = _optional_partition(record["sp12_first"])
        sp12_second = parse_partition(record["sp12_second"]) if sp12_first is not None else None
        return AppendixRow(
            num=int(record["num"]),
            type=record["type"].strip(),
            sp12_first=sp12_first,
            sp12_second=sp12_second,
            so13_first=parse_partition(record["so13_first"]),
            so13_second=parse_partition(record["so13_second"]),
            dim=int(record["dim"]),
            symbol=Symbol(top=_symbol_row(record["symbol_top"]), bottom=_symbol_row(record["symbol_bottom"])),
            fingerprint=record.get("fingerprint") or "",
        )
    except (RigidSymError, ValueError, KeyError) as e:
        raise FixtureError(f"line {line}: {e}") from e


def load_appendix(path: Optional[Path] = None) -> List[AppendixRow]:
    """Read the SO(13)/Sp(12) table, one AppendixRow per CSV record"""
    if path is None:
        from utils.settings import settings
        path = settings.appendix_path
    path = Path(path)

    if store.rows is not None and store.path == path:
        return store.rows

    try:
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            missing = [c for c in APPENDIX_COLUMNS if c not in (reader.fieldnames or [])]
            if missing:
                raise FixtureError(f"{path}: missing columns {', '.join(missing)}")
            rows = [_row_from_record(record, line) for line, record in enumerate(reader, start=2)]
    except OSError as e:
        logger.error(f"Failed to read fixture {path}: {e}")
        raise FixtureError(f"cannot read fixture {path}: {e}") from e

    store.rows, store.path = rows, path
    logger.info(f"Loaded {len(rows)} appendix rows from {path}")
    return rows


def clear_cache() -> None:
    store.rows = None
    store.path = None
