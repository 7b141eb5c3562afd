"""CSV reading and writing for the command line tool.

One dialect: comma separated, header row, UTF-8, '.' as decimal point.
Numbers are written with 15 significant digits.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import MissingValueError, ValidationError
from .mixdata import QUALITATIVE, QUANTITATIVE, MixedTable, QualitativeColumn, QuantitativeColumn

KIND_ALIASES = {
    "quantitative": QUANTITATIVE,
    "quant": QUANTITATIVE,
    "numeric": QUANTITATIVE,
    "qualitative": QUALITATIVE,
    "qual": QUALITATIVE,
    "categorical": QUALITATIVE,
}


def fmt(x: float) -> str:
    # + 0.0 folds -0.0 into 0.0
    return format(float(x) + 0.0, ".15g")


def _is_float(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_types(path) -> dict[str, str]:
    """Read a types sidecar: one ``column,kind`` line per column.

    A header line ``column,kind`` is optional; ``#`` lines are comments.
    """
    kinds = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            if len(row) < 2:
                raise ValidationError(f"types file line {row!r} needs 'column,kind'")
            name, kind = row[0].strip(), row[1].strip().lower()
            if (name, kind) == ("column", "kind"):
                continue
            if kind not in KIND_ALIASES:
                raise ValidationError(f"unknown kind {kind!r} for column {name!r}", name)
            kinds[name] = KIND_ALIASES[kind]
    return kinds


def read_table(path, types: dict[str, str] | None = None, qualitative: Iterable[str] = ()) -> MixedTable:
    """Parse a CSV into a ``MixedTable``.

    A column is qualitative if declared so (``types`` or ``qualitative``) or
    if any of its cells is non-numeric. Empty cells are rejected.
    """
    types = dict(types or {})
    for name in qualitative:
        types[name] = QUALITATIVE
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ValidationError(f"{path}: empty file") from None
        rows = [r for r in reader if r]
    unknown = set(types) - set(header)
    if unknown:
        raise ValidationError(f"declared columns not in header: {sorted(unknown)}", sorted(unknown)[0])
    for i, r in enumerate(rows):
        if len(r) != len(header):
            raise ValidationError(f"{path}: line {i + 2} has {len(r)} fields, expected {len(header)}")

    columns = []
    for j, name in enumerate(header):
        cells = [r[j].strip() for r in rows]
        if any(c == "" for c in cells):
            raise MissingValueError(f"column {name!r} has missing values", name)
        kind = types.get(name)
        if kind is None:
            kind = QUANTITATIVE if all(_is_float(c) for c in cells) else QUALITATIVE
        if kind == QUANTITATIVE:
            if not all(_is_float(c) for c in cells):
                raise ValidationError(f"column {name!r} is declared quantitative but has non-numeric cells", name)
            columns.append(QuantitativeColumn(name, np.array([float(c) for c in cells])))
        else:
            columns.append(QualitativeColumn(name, tuple(cells)))
    return MixedTable(tuple(columns))


def write_table(table: MixedTable, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(table.names)
        cols = [
            [fmt(v) for v in c.values] if c.kind == QUANTITATIVE else list(c.labels)
            for c in table.columns
        ]
        writer.writerows(zip(*cols))


def write_matrix(path, matrix, header: Sequence[str], labels: Sequence[Sequence] = (), footer: str | None = None) -> Path:
    """Write ``matrix`` with optional leading label columns."""
    matrix = np.asarray(matrix, dtype=float)
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, row in enumerate(matrix):
            lead = [str(v) for v in labels[i]] if labels else []
            writer.writerow(lead + [fmt(x) for x in row])
        if footer is not None:
            fh.write(f"# {footer}\n")
    return path


def read_matrix(path, n_labels: int = 0) -> tuple[list[str], list[list[str]], np.ndarray]:
    """Inverse of ``write_matrix``: returns header, label columns, values."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header, body = rows[0], rows[1:]
    labels = [r[:n_labels] for r in body]
    width = len(header) - n_labels
    values = np.array([[float(x) for x in r[n_labels:]] for r in body]).reshape(len(body), width)
    return header, labels, values
