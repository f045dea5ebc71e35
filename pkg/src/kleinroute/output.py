"""Tab-separated output tables with ``#`` metadata lines."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field


@dataclass
class OutputTable:
    header: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, *values):
        if len(values) != len(self.header):
            raise ValueError(f"row has {len(values)} fields, header has {len(self.header)}")
        self.rows.append(tuple(values))


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        # %-formatting ignores the locale
        return "%.6g" % v
    return str(v)


def render_tsv(table: OutputTable) -> str:
    lines = [f"# {key}: {format_value(val)}" for key, val in table.metadata.items()]
    lines.append("\t".join(table.header))
    for row in table.rows:
        if len(row) != len(table.header):
            raise ValueError(f"row {row!r} does not match header {table.header!r}")
        lines.append("\t".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def emit_tsv(table: OutputTable, destination=None):
    """Write ``table`` to a path, an open text file or (default) stdout."""
    text = render_tsv(table)
    if destination is None or destination == "-":
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def read_tsv(path_or_text):
    """Parse a table written by :func:`emit_tsv`; returns ``(metadata, header, rows)``."""
    if "\n" in path_or_text:
        text = path_or_text
    else:
        with open(path_or_text, encoding="utf-8") as fh:
            text = fh.read()
    metadata, header, rows = {}, None, []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, val = line[1:].partition(":")
            metadata[key.strip()] = val.strip()
        elif header is None:
            header = line.split("\t")
        else:
            rows.append([float(x) for x in line.split("\t")])
    return metadata, header, rows
