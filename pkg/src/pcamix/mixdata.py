"""Mixed tables and their recoding into the matrix Z.

A ``MixedTable`` holds named quantitative and qualitative columns. ``recode``
turns it into the n x (p1 + m) matrix

    Z = (1/sqrt(n)) * (Z1 | Z2)

where Z1 holds the standardized quantitative columns and Z2 the centered
indicator columns scaled by the inverse square root of the category relative
frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    MissingValueError,
    SingleCategoryError,
    TooFewRowsError,
    ValidationError,
    ZeroVarianceError,
)

QUANTITATIVE = "quantitative"
QUALITATIVE = "qualitative"


@dataclass(frozen=True)
class QuantitativeColumn:
    name: str
    values: np.ndarray

    kind = QUANTITATIVE

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValidationError(f"column {self.name!r} must be 1-d", self.name)
        if not np.all(np.isfinite(values)):
            raise MissingValueError(
                f"column {self.name!r} has missing or non-finite values", self.name
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class QualitativeColumn:
    name: str
    labels: tuple

    kind = QUALITATIVE

    def __post_init__(self):
        labels = tuple(self.labels)
        for lab in labels:
            if lab is None or (isinstance(lab, float) and np.isnan(lab)) or lab == "":
                raise MissingValueError(
                    f"column {self.name!r} has missing labels", self.name
                )
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.labels)


Column = QuantitativeColumn | QualitativeColumn


@dataclass(frozen=True)
class MixedTable:
    """Ordered collection of named columns, all of length ``n_rows``.

    Construction validates every invariant: equal lengths, unique names, at
    least two rows, no constant quantitative column and at least two observed
    categories per qualitative column.
    """

    columns: tuple

    def __post_init__(self):
        columns = tuple(self.columns)
        object.__setattr__(self, "columns", columns)
        if not columns:
            raise ValidationError("table has no columns")
        names = [c.name for c in columns]
        seen = set()
        for name in names:
            if name in seen:
                raise ValidationError(f"duplicate column name {name!r}", name)
            seen.add(name)
        n = len(columns[0])
        for col in columns:
            if len(col) != n:
                raise ValidationError(
                    f"column {col.name!r} has {len(col)} rows, expected {n}", col.name
                )
        if n < 2:
            raise TooFewRowsError(f"need at least 2 rows, got {n}")
        for col in columns:
            if col.kind == QUANTITATIVE:
                _check_variance(col.values, col.name)
            elif len(set(col.labels)) < 2:
                raise SingleCategoryError(
                    f"qualitative column {col.name!r} has a single category", col.name
                )

    @classmethod
    def from_dict(cls, data: Mapping[str, Sequence], qualitative: Sequence[str] = ()):
        """Build a table from ``{name: values}``; names in ``qualitative`` become
        qualitative columns, the rest quantitative."""
        qualitative = set(qualitative)
        unknown = qualitative - set(data)
        if unknown:
            raise ValidationError(f"unknown qualitative columns: {sorted(unknown)}")
        cols = []
        for name, values in data.items():
            if name in qualitative:
                cols.append(QualitativeColumn(name, tuple(values)))
            else:
                cols.append(QuantitativeColumn(name, values))
        return cls(tuple(cols))

    @property
    def n_rows(self) -> int:
        return len(self.columns[0])

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    @property
    def quantitative(self) -> list[QuantitativeColumn]:
        return [c for c in self.columns if c.kind == QUANTITATIVE]

    @property
    def qualitative(self) -> list[QualitativeColumn]:
        return [c for c in self.columns if c.kind == QUALITATIVE]

    @property
    def p1(self) -> int:
        return len(self.quantitative)

    @property
    def p2(self) -> int:
        return len(self.qualitative)

    @property
    def p(self) -> int:
        return len(self.columns)

    def take(self, rows) -> "MixedTable":
        """Row subset / permutation of the table."""
        rows = np.asarray(rows)
        cols = []
        for c in self.columns:
            if c.kind == QUANTITATIVE:
                cols.append(QuantitativeColumn(c.name, c.values[rows]))
            else:
                cols.append(QualitativeColumn(c.name, tuple(c.labels[i] for i in rows)))
        return MixedTable(tuple(cols))


def _check_variance(values, name=None):
    if np.ptp(values) == 0 or np.var(values) <= 0:
        raise ZeroVarianceError(f"column {name!r} has zero variance", name)


def standardize(values) -> np.ndarray:
    """Center and scale to unit population variance (divisor n).

    With this divisor ``z @ z / n == 1``, so the quantitative loadings come
    out as exact correlations.
    """
    x = np.asarray(values, dtype=float)
    if x.shape[0] < 2:
        raise TooFewRowsError(f"need at least 2 values, got {x.shape[0]}")
    _check_variance(x)
    centered = x - x.mean()
    return centered / np.sqrt(np.mean(centered**2))


def indicator_matrix(labels: Sequence) -> tuple[np.ndarray, list]:
    """One-hot encode ``labels``.

    Returns the n x m_j binary matrix and the category labels, ordered by
    first appearance.
    """
    categories = list(dict.fromkeys(labels))
    if len(categories) < 2:
        raise SingleCategoryError("need at least 2 distinct categories")
    position = {c: i for i, c in enumerate(categories)}
    G = np.zeros((len(labels), len(categories)))
    G[np.arange(len(labels)), [position[lab] for lab in labels]] = 1.0
    return G, categories


@dataclass(frozen=True)
class CategoryMap:
    """Per qualitative variable: category labels, counts and relative frequencies."""

    variables: tuple
    labels: tuple
    counts: tuple
    n: int

    @property
    def frequencies(self) -> tuple:
        return tuple(c / self.n for c in self.counts)

    @property
    def m(self) -> int:
        return sum(len(lab) for lab in self.labels)

    @property
    def all_counts(self) -> np.ndarray:
        """Counts of all m categories, in Z column order."""
        if not self.counts:
            return np.zeros(0)
        return np.concatenate([np.asarray(c, dtype=float) for c in self.counts])

    @property
    def all_frequencies(self) -> np.ndarray:
        return self.all_counts / self.n

    def category_rows(self) -> list[tuple[str, object]]:
        """(variable, category) pairs in Z column order."""
        return [(v, lab) for v, labs in zip(self.variables, self.labels) for lab in labs]


@dataclass(frozen=True)
class RecodedMatrix:
    """The recoded matrix Z together with the bookkeeping needed downstream.

    ``index_sets[j]`` lists the columns of Z (equivalently the rows of the
    loading matrix) that belong to variable ``j``, variables in table order.
    """

    Z: np.ndarray
    index_sets: tuple
    category_map: CategoryMap
    names: tuple
    kinds: tuple
    indicators: tuple = field(repr=False)

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    @property
    def p(self) -> int:
        return len(self.index_sets)

    @property
    def p1(self) -> int:
        return sum(k == QUANTITATIVE for k in self.kinds)

    @property
    def p2(self) -> int:
        return self.p - self.p1

    @property
    def m(self) -> int:
        return self.category_map.m

    @property
    def quantitative_names(self) -> list[str]:
        return [nm for nm, k in zip(self.names, self.kinds) if k == QUANTITATIVE]

    @property
    def total_inertia(self) -> int:
        return self.p1 + self.m - self.p2


def recode(table: MixedTable) -> RecodedMatrix:
    n = table.n_rows
    quant_cols = [standardize(c.values) for c in table.quantitative]
    Z1 = np.column_stack(quant_cols) if quant_cols else np.zeros((n, 0))

    blocks, variables, labels, counts, indicators = [], [], [], [], []
    for col in table.qualitative:
        try:
            G, cats = indicator_matrix(col.labels)
        except SingleCategoryError as exc:
            raise SingleCategoryError(
                f"qualitative column {col.name!r} has a single category", col.name
            ) from exc
        cnt = G.sum(axis=0)
        freq = cnt / n
        # J G D^{-1/2} with relative frequencies
        blocks.append((G - freq) / np.sqrt(freq))
        variables.append(col.name)
        labels.append(tuple(cats))
        counts.append(tuple(int(c) for c in cnt))
        indicators.append(G)
    Z2 = np.hstack(blocks) if blocks else np.zeros((n, 0))

    Z = np.hstack([Z1, Z2]) / np.sqrt(n)
    Z.setflags(write=False)

    # index sets follow table column order; quantitative rows come first in Z
    p1 = Z1.shape[1]
    next_quant, next_cat = 0, p1
    cat_sizes = iter(len(lab) for lab in labels)
    index_sets = []
    for col in table.columns:
        if col.kind == QUANTITATIVE:
            index_sets.append(np.array([next_quant]))
            next_quant += 1
        else:
            size = next(cat_sizes)
            index_sets.append(np.arange(next_cat, next_cat + size))
            next_cat += size

    return RecodedMatrix(
        Z=Z,
        index_sets=tuple(index_sets),
        category_map=CategoryMap(tuple(variables), tuple(labels), tuple(counts), n),
        names=tuple(table.names),
        kinds=tuple(c.kind for c in table.columns),
        indicators=tuple(indicators),
    )
