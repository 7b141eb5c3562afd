import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcamix import (
    MissingValueError,
    MixedTable,
    QualitativeColumn,
    QuantitativeColumn,
    SingleCategoryError,
    TooFewRowsError,
    ValidationError,
    ZeroVarianceError,
    indicator_matrix,
    recode,
    standardize,
)

from conftest import random_mixed_table


class TestStandardize:
    def test_constant_rejected(self):
        with pytest.raises(ZeroVarianceError):
            standardize([3.0, 3.0, 3.0])

    def test_too_few_rows(self):
        with pytest.raises(TooFewRowsError):
            standardize([1.0])

    def test_one_two_three(self):
        x = [1.0, 2.0, 3.0]
        mean = sum(x) / 3
        sd = (sum((v - mean) ** 2 for v in x) / 3) ** 0.5
        expected = [(v - mean) / sd for v in x]
        np.testing.assert_allclose(standardize(x), expected, atol=1e-15)
        np.testing.assert_allclose(standardize(x), [-1.22474, 0.0, 1.22474], atol=1e-5)

    def test_idempotent(self, rng):
        z = standardize(rng.normal(size=17))
        np.testing.assert_allclose(standardize(z), z, atol=1e-14)

    def test_population_divisor(self, rng):
        z = standardize(rng.normal(size=9) * 5 + 2)
        assert z @ z / len(z) == pytest.approx(1.0, abs=1e-13)


class TestIndicator:
    def test_definition(self):
        G, cats = indicator_matrix(["a", "b", "a"])
        np.testing.assert_array_equal(G, [[1, 0], [0, 1], [1, 0]])
        assert cats == ["a", "b"]

    def test_counts(self):
        G, _ = indicator_matrix(list("aaab"))
        np.testing.assert_array_equal(G.sum(axis=0), [3, 1])

    def test_one_hot(self):
        G, cats = indicator_matrix(list("xyzx"))
        assert G.shape == (4, 3)
        np.testing.assert_array_equal(G.sum(axis=1), 1)

    def test_first_appearance_order(self):
        _, cats = indicator_matrix(["z", "b", "z", "a"])
        assert cats == ["z", "b", "a"]

    def test_single_category(self):
        with pytest.raises(SingleCategoryError):
            indicator_matrix(["a", "a"])


class TestTableValidation:
    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            MixedTable((QuantitativeColumn("x", [1.0, 2.0]), QualitativeColumn("g", ("a", "b", "a"))))

    def test_duplicate_names(self):
        with pytest.raises(ValidationError):
            MixedTable((QuantitativeColumn("x", [1.0, 2.0]), QuantitativeColumn("x", [2.0, 1.0])))

    def test_constant_column_named(self):
        with pytest.raises(ZeroVarianceError) as info:
            MixedTable.from_dict({"x": [1, 2, 3], "flat": [0.1, 0.1, 0.1]})
        assert info.value.column == "flat"

    def test_single_category_named(self):
        with pytest.raises(SingleCategoryError) as info:
            MixedTable.from_dict({"x": [1, 2, 3], "g": ["a", "a", "a"]}, qualitative=["g"])
        assert info.value.column == "g"

    def test_missing_rejected(self):
        with pytest.raises(MissingValueError):
            MixedTable.from_dict({"x": [1, np.nan, 3]})
        with pytest.raises(MissingValueError):
            MixedTable.from_dict({"x": [1, 2, 3], "g": ["a", None, "b"]}, qualitative=["g"])

    def test_too_few_rows(self):
        with pytest.raises(TooFewRowsError):
            MixedTable.from_dict({"g": ["a"]}, qualitative=["g"])


class TestRecode:
    def test_binary_block(self):
        rec = recode(MixedTable.from_dict({"g": list("aabb")}, qualitative=["g"]))
        block = rec.Z * np.sqrt(rec.n)
        a = np.array([0.70711, 0.70711, -0.70711, -0.70711])
        np.testing.assert_allclose(block[:, 0], a, atol=1e-5)
        np.testing.assert_allclose(block[:, 1], -block[:, 0], atol=1e-15)

    def test_member_nonmember_entries(self):
        labels = list("aabcccab")
        rec = recode(MixedTable.from_dict({"g": labels}, qualitative=["g"]))
        n = len(labels)
        for s, cat in enumerate(["a", "b", "c"]):
            pi = labels.count(cat) / n
            expected = [
                ((1 - pi) if lab == cat else -pi) / np.sqrt(pi) / np.sqrt(n) for lab in labels
            ]
            np.testing.assert_allclose(rec.Z[:, s], expected, atol=1e-15)

    def test_all_quantitative(self, rng):
        data = {f"x{i}": rng.normal(size=12) for i in range(3)}
        rec = recode(MixedTable.from_dict(data))
        Z1 = np.column_stack([standardize(v) for v in data.values()])
        np.testing.assert_allclose(rec.Z, Z1 / np.sqrt(12), atol=1e-15)
        assert np.sum(rec.Z**2) == pytest.approx(3.0, abs=1e-12)
        assert rec.total_inertia == 3

    def test_inertia_one_quant_one_binary(self):
        rec = recode(MixedTable.from_dict({"x": [1, 2, 3, 5], "g": list("abab")}, qualitative=["g"]))
        total = sum(float(v) ** 2 for v in rec.Z.ravel())
        assert total == pytest.approx(2.0, abs=1e-12)
        assert rec.total_inertia == 2

    def test_index_sets_follow_table_order(self):
        table = MixedTable.from_dict(
            {"g": list("abca"), "x": [1, 2, 3, 4], "h": list("xxyy"), "y": [4, 1, 2, 2]},
            qualitative=["g", "h"],
        )
        rec = recode(table)
        # Z columns: x, y, then g's three categories, then h's two
        assert [list(s) for s in rec.index_sets] == [[2, 3, 4], [0], [5, 6], [1]]
        assert rec.quantitative_names == ["x", "y"]
        assert rec.category_map.category_rows() == [
            ("g", "a"), ("g", "b"), ("g", "c"), ("h", "x"), ("h", "y"),
        ]
        assert rec.category_map.counts == ((2, 1, 1), (2, 2))


@st.composite
def tables(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(4, 25))
    p = draw(st.integers(2, 5))
    return random_mixed_table(np.random.default_rng(seed), n, p)


@settings(max_examples=60, deadline=None)
@given(tables())
def test_recode_invariants(table):
    rec = recode(table)
    Z = rec.Z
    np.testing.assert_allclose(Z.mean(axis=0), 0, atol=1e-12)
    assert np.sum(Z**2) == pytest.approx(rec.p1 + rec.m - rec.p2, abs=1e-10)
    norms = np.sum(Z**2, axis=0)
    np.testing.assert_allclose(norms[: rec.p1], 1.0, atol=1e-12)
    np.testing.assert_allclose(norms[rec.p1 :], 1 - rec.category_map.all_frequencies, atol=1e-12)
    for j, kind in enumerate(rec.kinds):
        if kind == "qualitative":
            m_j = len(rec.index_sets[j])
            assert norms[rec.index_sets[j]].sum() == pytest.approx(m_j - 1, abs=1e-10)
    for counts in rec.category_map.counts:
        assert sum(counts) == rec.n
        assert min(counts) >= 1


@settings(max_examples=30, deadline=None)
@given(tables(), st.integers(0, 2**32 - 1))
def test_recode_permutation_equivariant(table, seed):
    perm = np.random.default_rng(seed).permutation(table.n_rows)
    rec = recode(table)
    recp = recode(table.take(perm))
    # category order may change (first appearance), so match columns by label
    col_of = {row: i for i, row in enumerate(rec.category_map.category_rows())}
    order = [rec.p1 + col_of[row] for row in recp.category_map.category_rows()]
    expected = rec.Z[perm][:, list(range(rec.p1)) + order]
    np.testing.assert_allclose(recp.Z, expected, atol=1e-14)
