import numpy as np
import pytest

from pcamix import MixedTable, QualitativeColumn, QuantitativeColumn

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_mixed_table(rng, n, p, kinds=None, max_categories=4):
    """Random table with at least one quantitative and one qualitative column
    when p >= 2 (unless ``kinds`` is given)."""
    if kinds is None:
        kinds = ["quant", "qual"] + list(rng.choice(["quant", "qual"], size=p - 2))
        rng.shuffle(kinds)
    cols = []
    for j, kind in enumerate(kinds):
        if kind == "quant":
            cols.append(QuantitativeColumn(f"v{j}", rng.normal(size=n)))
        else:
            m = int(rng.integers(2, max_categories + 1))
            while True:
                labels = rng.integers(0, m, size=n)
                if len(set(labels)) >= 2:
                    break
            cols.append(QualitativeColumn(f"v{j}", tuple(f"c{x}" for x in labels)))
    return MixedTable(tuple(cols))


def correlation_ratio(labels, x):
    """Between-category sum of squares over total sum of squares."""
    x = np.asarray(x, dtype=float)
    labels = np.asarray(labels)
    grand = x.mean()
    total = np.sum((x - grand) ** 2)
    between = 0.0
    for cat in set(labels.tolist()):
        members = x[labels == cat]
        between += len(members) * (members.mean() - grand) ** 2
    return between / total


def squared_correlation(values, x):
    return np.corrcoef(values, x)[0, 1] ** 2


def brute_force_c(table, X):
    """Squared loadings of every column on every score column, from scratch."""
    C = np.zeros((table.p, X.shape[1]))
    for j, col in enumerate(table.columns):
        for l in range(X.shape[1]):
            if col.kind == "quantitative":
                C[j, l] = squared_correlation(col.values, X[:, l])
            else:
                C[j, l] = correlation_ratio(col.labels, X[:, l])
    return C


def category_means(table, X):
    """Mean score rows per category, in (qualitative column, first appearance) order."""
    rows = []
    for col in table.qualitative:
        labels = np.asarray(col.labels)
        for cat in dict.fromkeys(col.labels):
            rows.append(X[labels == cat].mean(axis=0))
    return np.array(rows).reshape(len(rows), X.shape[1])


@pytest.fixture
def t4():
    return MixedTable.from_dict({"x": [1, 2, 3, 4], "g": list("aabb")}, qualitative=["g"])


# y is orthogonal to x up to the last entry, so corr(x, y) ~ 2e-5: the two
# eigenvalues split just enough to pin the loadings at +-sqrt(2)/2
TWO_VAR = {
    "x": [1, 2, 3, 4, 5, 6, 7, 8],
    "y": [1, -1, -1, 1, 1, -1, -1, 1.0001],
}


@pytest.fixture
def two_var():
    return MixedTable.from_dict(TWO_VAR)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
