"""Sweep tables as CSV, plus the run-metadata sidecar."""

import csv
import io
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional, Union

import logfire

from app.core.config import settings
from app.core.exceptions import ArgumentError
from app.models.schemas.analysis import ComparisonReport, SweepRow, SweepTable
from app.models.schemas.base import BaseSchema

CSV_COLUMNS = [
    "p",
    "regime",
    "risk",
    "x_L",
    "x_H",
    "t_L",
    "t_H",
    "rent",
    "profit",
    "welfare",
    "boundary_L",
    "boundary_H",
]

META_SUFFIX = ".meta.json"


class SweepMeta(BaseSchema):
    """Everything about a sweep run that must stay out of the CSV."""

    version: str
    created_at: datetime
    config_path: Optional[str] = None
    grid: str
    jobs: int
    rows: int


def format_number(value: float) -> str:
    """12 significant digits; negative zero prints as 0."""
    if value == 0.0:
        value = 0.0
    return f"{value:.12g}"


def _csv_record(row: SweepRow) -> dict:
    record = row.model_dump()
    return {
        key: format_number(value) if isinstance(value, float) else value
        for key, value in record.items()
    }


def render_csv(table: SweepTable) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(_csv_record(row) for row in table.rows())
    return buffer.getvalue()


def write_csv(table: SweepTable, path: Union[str, Path]) -> Path:
    """Write the table; identical tables always give identical bytes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(render_csv(table))
    logfire.info("Wrote sweep CSV", path=str(path), rows=len(table.entries))
    return path


def read_csv(path: Union[str, Path]) -> List[SweepRow]:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != CSV_COLUMNS:
            raise ArgumentError(f"unexpected CSV header in {path}: {reader.fieldnames}")
        return [SweepRow.model_validate(record) for record in reader]


def meta_path(csv_path: Union[str, Path]) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.name + META_SUFFIX)


def write_meta(
    csv_path: Union[str, Path],
    grid: str,
    jobs: int,
    rows: int,
    config_path: Optional[str] = None,
) -> Path:
    meta = SweepMeta(
        version=settings.VERSION,
        created_at=datetime.now(timezone.utc),
        config_path=config_path,
        grid=grid,
        jobs=jobs,
        rows=rows,
    )
    path = meta_path(csv_path)
    path.write_text(meta.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


ORDERING_COLUMNS = [
    "proposition",
    "inequality",
    "lhs",
    "rhs",
    "slack",
    "verdict",
    "reason",
]


def render_orderings_csv(report: ComparisonReport) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=ORDERING_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for check in report.orderings:
        writer.writerow(
            {
                "proposition": check.proposition,
                "inequality": check.inequality,
                "lhs": format_number(check.lhs),
                "rhs": format_number(check.rhs),
                "slack": format_number(check.slack),
                "verdict": check.verdict.value,
                "reason": check.reason or "",
            }
        )
    return buffer.getvalue()
