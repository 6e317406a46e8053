"""Deterministic CSV / JSON artifact writers."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence


def _fmt(value) -> str:
    if isinstance(value, float):
        # repr is the shortest string that round-trips exactly
        return repr(value) if math.isfinite(value) else ("inf" if value > 0 else "-inf" if value < 0 else "nan")
    return str(value)


def emit_csv(rows: Iterable[Sequence], path, header: Sequence[str]) -> Path:
    """Write ``rows`` under ``header`` as LF-terminated CSV."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"row of length {len(row)} under a {len(header)}-column header")
            writer.writerow([_fmt(v) for v in row])
    return path


def read_csv(path) -> tuple[list[str], list[list[float]]]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [[float(v) for v in row] for row in reader]


def emit_json(obj, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, allow_nan=True) + "\n", encoding="utf-8")
    return path
