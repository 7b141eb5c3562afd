"""Synthetic mixed data and a timing comparison of the two rotation routes.

Each simulated table draws n rows from N(0, Q'Q) with Q uniform on
[0.2, 0.4]; the last p/2 columns are cut into terciles. The benchmark times
fit + varimax rotation (k = 2) for the SVD route and for the quantification
matrix route.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import quantification
from .mixdata import MixedTable, QualitativeColumn, QuantitativeColumn, recode
from .svd import fit
from .varimax import rotate

RNG_NAME = "numpy.random.Generator(PCG64)"
TERCILE_LABELS = ("low", "mid", "high")
DESK_GRID = [(n, p) for n in (50, 100, 200) for p in (10, 50)]
FULL_GRID = [(n, p) for n in (50, 100, 200, 400, 800) for p in (10, 50, 100, 200)]
AGREEMENT_TOL = 1e-8


@dataclass(frozen=True)
class SimConfig:
    n: int
    p: int
    seed: int = 0
    reps: int = 20
    k: int = 2

    def __post_init__(self):
        if self.p < 2 or self.p % 2:
            raise ValueError(f"p must be a positive even number, got {self.p}")
        if self.n < 4:
            raise ValueError(f"n must be at least 4, got {self.n}")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")


def terciles(values) -> np.ndarray:
    """Category index 0/1/2 by rank; ties broken by position, so the three
    counts differ by at most one."""
    n = len(values)
    ranks = np.empty(n, dtype=int)
    ranks[np.argsort(values, kind="stable")] = np.arange(n)
    return (3 * ranks) // n


def simulate(config: SimConfig, rng=None) -> MixedTable:
    rng = np.random.default_rng(config.seed) if rng is None else rng
    n, p = config.n, config.p
    Q = rng.uniform(0.2, 0.4, size=(p, p))
    # rows are (Q' e)' = e' Q with e ~ N(0, I), so the covariance is Q'Q
    data = rng.standard_normal((n, p)) @ Q
    half = p // 2
    cols = [QuantitativeColumn(f"x{j + 1}", data[:, j]) for j in range(half)]
    for j in range(half, p):
        cut = terciles(data[:, j])
        cols.append(QualitativeColumn(f"q{j - half + 1}", tuple(TERCILE_LABELS[c] for c in cut)))
    return MixedTable(tuple(cols))


def run_svd(table: MixedTable, k: int = 2):
    return rotate(fit(recode(table), k))


def run_original(table: MixedTable, k: int = 2):
    qs = quantification.build_quantification(table)
    return quantification.rotate_original(qs, quantification.fit_original(qs, k))


@dataclass
class CellResult:
    n: int
    p: int
    svd_times: list = field(default_factory=list)
    original_times: list = field(default_factory=list)
    error: str | None = None

    @property
    def svd_median(self) -> float:
        return statistics.median(self.svd_times)

    @property
    def original_median(self) -> float | None:
        if self.error is not None:
            return None
        return statistics.median(self.original_times)

    @property
    def ratio(self) -> float | None:
        if self.error is not None:
            return None
        return self.original_median / self.svd_median


@dataclass
class BenchReport:
    cells: list
    reps: int
    seed: int
    rng: str = RNG_NAME

    def cell(self, n, p) -> CellResult:
        for c in self.cells:
            if (c.n, c.p) == (n, p):
                return c
        raise KeyError((n, p))

    @property
    def ns(self) -> list[int]:
        return sorted({c.n for c in self.cells})

    @property
    def ps(self) -> list[int]:
        return sorted({c.p for c in self.cells})


class AgreementError(AssertionError):
    pass


def bench(grid, reps: int = 20, seed: int = 0, k: int = 2) -> BenchReport:
    """Median end-to-end times of both routes on each (n, p) cell.

    Every replicate first checks that both routes give the same rotated
    squared loadings; a mismatch raises ``AgreementError``. A ``MemoryError``
    from the quantification route is recorded in the cell instead of raised.
    """
    cells = []
    for n, p in grid:
        config = SimConfig(n=n, p=p, seed=seed, reps=reps, k=k)
        rng = np.random.default_rng([seed, n, p])
        cell = CellResult(n, p)
        for _ in range(reps):
            table = simulate(config, rng)

            t0 = time.perf_counter()
            svd_res = run_svd(table, k)
            cell.svd_times.append(time.perf_counter() - t0)

            if cell.error is not None:
                continue
            try:
                t0 = time.perf_counter()
                orig_res = run_original(table, k)
                cell.original_times.append(time.perf_counter() - t0)
            except MemoryError:
                cell.error = "error"
                continue
            gap = float(np.max(np.abs(svd_res.C_rot - orig_res.C_rot)))
            if gap > AGREEMENT_TOL:
                raise AgreementError(
                    f"routes disagree on rotated squared loadings at n={n}, p={p}: {gap:.3g}"
                )
        cells.append(cell)
    return BenchReport(cells=cells, reps=reps, seed=seed)


def _fmt(x) -> str:
    return "error" if x is None else f"{x:.6g}"


def median_rows(report: BenchReport) -> list[list[str]]:
    rows = [["n", "method"] + [f"p={p}" for p in report.ps]]
    for n in report.ns:
        for label, attr in (("matrix_reformulation", "original_median"), ("svd", "svd_median")):
            row = [str(n), label]
            for p in report.ps:
                try:
                    row.append(_fmt(getattr(report.cell(n, p), attr)))
                except KeyError:
                    row.append("")
            rows.append(row)
    return rows


def ratio_rows(report: BenchReport) -> list[list[str]]:
    rows = [["n"] + [f"p={p}" for p in report.ps]]
    for n in report.ns:
        row = [str(n)]
        for p in report.ps:
            try:
                row.append(_fmt(report.cell(n, p).ratio))
            except KeyError:
                row.append("")
        rows.append(row)
    return rows


def write_report(report: BenchReport, out_dir) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = out_dir / "bench_median.csv", out_dir / "bench_ratio.csv"
    for path, rows in zip(paths, (median_rows(report), ratio_rows(report))):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerows(rows)
            fh.write(f"# reps={report.reps},seed={report.seed},rng={report.rng}\n")
    return paths


def format_table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in rows)
