"""PCAMIX fitted through a singular value decomposition of Z."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, IndexSetMismatchError, KTooLargeError
from .mixdata import RecodedMatrix

RANK_RTOL = 1e-10
# entries within this relative distance of a column's max |a| count as tied
SIGN_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class PcamixModel:
    """Fitted PCAMIX solution.

    Attributes
    ----------
    X : ndarray (n, k)
        Standardized component scores, ``X.T @ X == n * I``.
    singular_values : ndarray (k,)
        Standard deviations of the components, descending.
    A : ndarray (p1 + m, k)
        Loading matrix ``V_k diag(singular_values)``. The first p1 rows are
        the correlations of the quantitative variables with the components.
    C : ndarray (p, k)
        Squared loadings: squared correlations for quantitative variables,
        correlation ratios for qualitative ones.
    category_coords : ndarray (m, k)
        Principal coordinates of the categories (mean component score of the
        observations in each category).
    """

    X: np.ndarray
    singular_values: np.ndarray
    A: np.ndarray
    C: np.ndarray
    category_coords: np.ndarray
    recoded: RecodedMatrix = field(repr=False)

    @property
    def k(self) -> int:
        return self.X.shape[1]

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def index_sets(self) -> tuple:
        return self.recoded.index_sets

    @property
    def p1(self) -> int:
        return self.recoded.p1

    @property
    def A1(self) -> np.ndarray:
        return self.A[: self.p1]

    @property
    def A2(self) -> np.ndarray:
        return self.A[self.p1 :]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.singular_values**2


def squared_loadings(A, index_sets) -> np.ndarray:
    """Sum the squared rows of ``A`` within each variable's index set."""
    A = np.asarray(A, dtype=float)
    rows = np.concatenate([np.asarray(s, dtype=int) for s in index_sets]) if index_sets else np.zeros(0, int)
    if rows.size != A.shape[0] or not np.array_equal(np.sort(rows), np.arange(A.shape[0])):
        raise IndexSetMismatchError(
            f"index sets do not partition the {A.shape[0]} rows of A"
        )
    sq = A**2
    return np.array([sq[np.asarray(s, dtype=int)].sum(axis=0) for s in index_sets]).reshape(
        len(index_sets), A.shape[1]
    )


def category_coordinates(A2, frequencies) -> np.ndarray:
    """Barycentric category coordinates ``A2[s] / sqrt(pi_s)``."""
    return np.asarray(A2) / np.sqrt(np.asarray(frequencies, dtype=float))[:, None]


def sign_flips(A) -> np.ndarray:
    """Per-column signs making the largest-|a| entry of each column positive.

    Near-ties (within ``SIGN_TIE_RTOL``) resolve to the first row.
    """
    absA = np.abs(A)
    flips = np.ones(A.shape[1])
    for col in range(A.shape[1]):
        top = absA[:, col].max()
        if top == 0:
            continue
        row = int(np.argmax(absA[:, col] >= top * (1 - SIGN_TIE_RTOL)))
        if A[row, col] < 0:
            flips[col] = -1.0
    return flips


def numerical_rank(singular_values) -> int:
    s = np.asarray(singular_values)
    if s.size == 0 or s[0] <= 0:
        return 0
    return int(np.sum(s > RANK_RTOL * s[0]))


def fit(recoded: RecodedMatrix, k: int) -> PcamixModel:
    Z = recoded.Z
    n = recoded.n
    U, s, Vt = np.linalg.svd(Z, full_matrices=False)
    rank = numerical_rank(s)
    if rank == 0:
        raise DegenerateInputError("recoded matrix has rank 0")
    if k < 1 or k > rank:
        raise KTooLargeError(f"k={k} must lie in [1, rank={rank}]")

    Uk, sk, Vk = U[:, :k], s[:k], Vt[:k].T
    A = Vk * sk
    flips = sign_flips(A)
    A = A * flips
    X = np.sqrt(n) * Uk * flips

    C = squared_loadings(A, recoded.index_sets)
    coords = category_coordinates(A[recoded.p1 :], recoded.category_map.all_frequencies)
    for arr in (X, sk, A, C, coords):
        arr.setflags(write=False)
    return PcamixModel(X=X, singular_values=sk, A=A, C=C, category_coords=coords, recoded=recoded)


def variance_explained(model: PcamixModel) -> np.ndarray:
    """Variance carried by each retained component (squared singular values)."""
    return model.singular_values**2
