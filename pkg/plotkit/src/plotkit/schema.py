"""Reader for the sweep CSV interface.

plotkit deliberately does not import the simulator package: the CSV schema
(and the manifest sitting next to it) is the contract.  The expected header
is pinned here and validated verbatim.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass


class SchemaError(Exception):
    """The CSV header does not match the sweep schema."""


class DataError(Exception):
    """The CSV parsed but does not contain usable data."""


SWEEP_COLUMNS = [
    "axis_name", "axis_value", "p_plus", "q_pp", "q_pm", "W", "Qc", "Qh",
    "dSm", "I", "S_baths", "sigma", "cop", "cop_carnot", "cop_ratio",
    "regime", "status",
]

_TEXT_COLUMNS = {"axis_name", "regime", "status"}


@dataclass(eq=False)
class SweepPoint:
    """One CSV row; numeric cells are floats, None when empty, +-inf allowed."""

    values: dict[str, object]

    def __getitem__(self, column: str):
        return self.values[column]

    @property
    def ok(self) -> bool:
        return self.values["status"] == "ok"


def _parse_cell(cell: str) -> float | None:
    cell = cell.strip()
    if cell == "":
        return None
    if cell == "inf":
        return math.inf
    if cell == "-inf":
        return -math.inf
    return float(cell)


def read_sweep_csv(path: str) -> list[SweepPoint]:
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if header != SWEEP_COLUMNS:
            missing = [c for c in SWEEP_COLUMNS if c not in header]
            if missing:
                raise SchemaError(f"{path}: missing columns {missing}")
            raise SchemaError(f"{path}: unexpected header {header}")
        points: list[SweepPoint] = []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(SWEEP_COLUMNS):
                raise DataError(f"{path}:{lineno}: expected {len(SWEEP_COLUMNS)} cells, "
                                f"got {len(record)}")
            values: dict[str, object] = {}
            for column, cell in zip(SWEEP_COLUMNS, record):
                if column in _TEXT_COLUMNS:
                    values[column] = cell
                else:
                    try:
                        values[column] = _parse_cell(cell)
                    except ValueError:
                        raise DataError(f"{path}:{lineno}: bad numeric cell {cell!r} "
                                        f"in column {column!r}") from None
            points.append(SweepPoint(values))
    if not points:
        raise DataError(f"{path}: no data rows")
    return points


def read_manifest(path: str) -> dict[str, str]:
    """Parse the flat ``key = value`` manifest format."""
    out: dict[str, str] = {}
    with open(path) as f:
        for raw in f:
            line = raw.split("#", 1)[0].strip()
            if not line or "=" not in line:
                continue
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out
