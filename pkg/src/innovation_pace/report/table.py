from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

from .spec import SCHEMA_VERSION

Cell = Union[None, int, float, str]


def format_cell(value: Cell) -> str:
    """Render a cell: empty for undefined samples, fixed 12 significant digits for floats."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return ""
        return f"{value:.12g}"
    return str(value)


def parse_cell(text: str) -> Optional[float]:
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        return None


@dataclass
class Table:
    name: str
    metric: str
    header: list[str]
    rows: list[list[Cell]] = field(default_factory=list)
    # columns plotted by the SVG renderer
    value_columns: Sequence[str] = ()

    @property
    def schema(self) -> str:
        return f"innovation_pace/{self.metric}/{SCHEMA_VERSION}"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"#schema={self.schema}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([format_cell(c) for c in row])
        return buf.getvalue()

    def write(self, directory: Path) -> Path:
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"{self.name}.csv"
        path.write_bytes(self.to_csv().encode("utf-8"))
        return path


def read_csv(path: Path) -> tuple[str, list[str], list[list[str]]]:
    """Inverse of :meth:`Table.to_csv`: (schema, header, rows of strings)."""
    lines = path.read_text(encoding="utf-8").splitlines()
    schema = lines[0].removeprefix("#schema=") if lines and lines[0].startswith("#schema=") else ""
    body = lines[1:] if schema else lines
    reader = list(csv.reader(body))
    return schema, reader[0], reader[1:]
