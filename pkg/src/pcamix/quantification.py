"""PCAMIX through n x n quantification matrices, with the matrix
reformulation of the varimax rotation.

This is the original, memory-hungry route: one n x n matrix per variable.
It is kept as an independent check on the SVD route and as the baseline
for the timing benchmark.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import KTooLargeError, KTooSmallError
from .mixdata import QUANTITATIVE, MixedTable, indicator_matrix, standardize
from .svd import sign_flips
from .varimax import DEFAULT_MAX_SWEEPS, DEFAULT_TOL, planar_angle, planar_rotation

EIG_RTOL = 1e-10


@dataclass(frozen=True)
class QuantificationSet:
    """Quantification matrices of a table.

    ``S_list[j]`` is (1/n) z z' for a quantitative variable and
    J G D^{-1} G' J (D holding category counts) for a qualitative one.
    ``sources`` keeps the standardized column or the (indicator, counts)
    pair each S_j was built from.
    """

    S_list: tuple
    S: np.ndarray
    kinds: tuple
    sources: tuple = field(repr=False)

    @property
    def n(self) -> int:
        return self.S.shape[0]

    @property
    def p(self) -> int:
        return len(self.S_list)


@dataclass(frozen=True)
class OriginalFit:
    X: np.ndarray
    variances: np.ndarray
    C: np.ndarray
    Gamma: np.ndarray

    @property
    def k(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class OriginalRotation:
    T: np.ndarray
    X_rot: np.ndarray
    C_rot: np.ndarray
    thetas: list = field(repr=False)
    converged: bool
    sweeps: int


def build_quantification(table: MixedTable) -> QuantificationSet:
    n = table.n_rows
    J = np.eye(n) - 1.0 / n
    S_list, kinds, sources = [], [], []
    for col in table.columns:
        if col.kind == QUANTITATIVE:
            z = standardize(col.values)
            S_list.append(np.outer(z, z) / n)
            sources.append(z)
        else:
            G, _ = indicator_matrix(col.labels)
            counts = G.sum(axis=0)
            JG = J @ G
            S_list.append((JG / counts) @ JG.T)
            sources.append((G, counts))
        kinds.append(col.kind)
    S = np.sum(S_list, axis=0)
    return QuantificationSet(tuple(S_list), S, tuple(kinds), tuple(sources))


def _loading_rows(qs: QuantificationSet, X) -> np.ndarray:
    # correlations / category loadings laid out like the SVD loading matrix,
    # only used to pick the same column signs as the SVD route
    n = qs.n
    quant, cats = [], []
    for kind, src in zip(qs.kinds, qs.sources):
        if kind == QUANTITATIVE:
            quant.append(src @ X / n)
        else:
            G, counts = src
            cats.append((G.T @ X / n) / np.sqrt(counts / n)[:, None])
    rows = quant + [r for block in cats for r in block]
    return np.vstack(rows)


def fit_original(qs: QuantificationSet, k: int) -> OriginalFit:
    """Scores, variances and squared loadings from the eigenvectors of S."""
    n = qs.n
    evals, evecs = np.linalg.eigh(qs.S)
    evals, evecs = evals[::-1], evecs[:, ::-1]
    positive = int(np.sum(evals > EIG_RTOL * max(evals[0], 0.0))) if evals[0] > 0 else 0
    if k < 1 or k > positive:
        raise KTooLargeError(f"k={k} must lie in [1, {positive}]")
    X = np.sqrt(n) * evecs[:, :k]
    X = X * sign_flips(_loading_rows(qs, X))
    # x' S x equals n * eigenvalue under X'X = nI; report per unit n
    variances = np.einsum("il,ij,jl->l", X, qs.S, X) / n
    C = squared_loadings_original(qs, X)
    return OriginalFit(X=X, variances=variances, C=C, Gamma=np.diag(evals[:k]))


def squared_loadings_original(qs: QuantificationSet, X) -> np.ndarray:
    """c_jl = x_l' S_j x_l / n."""
    n = qs.n
    return np.array([np.einsum("il,ij,jl->l", X, S_j, X) for S_j in qs.S_list]) / n


def e_matrices(X, qs: QuantificationSet, Gamma, p=None) -> list[np.ndarray]:
    """E_j = p X' S_j X - n Gamma for every variable."""
    p = qs.p if p is None else p
    Gamma = np.asarray(Gamma, dtype=float)
    if Gamma.ndim == 1:
        Gamma = np.diag(Gamma)
    n = qs.n
    return [p * (X.T @ S_j @ X) - n * Gamma for S_j in qs.S_list]


def reformulation_coefficients(X_pair, qs: QuantificationSet, Gamma, p=None) -> tuple[float, float]:
    """Coefficients (a, b) with tan(4 theta) = a / b for a pair of score columns.

    ``Gamma`` is the 2 x 2 block of T' Gamma T for the current rotation T;
    at T = I it is the diagonal of the two eigenvalues.
    """
    E = e_matrices(X_pair, qs, Gamma, p)
    d = np.array([e[0, 0] - e[1, 1] for e in E])
    e12 = np.array([e[0, 1] for e in E])
    a = 4.0 * float(np.sum(e12 * d))
    b = float(np.sum(d**2) - 4.0 * np.sum(e12**2))
    return a, b


def trace_objective(T, E_list, p) -> float:
    """p^-2 sum_j Trace(T'E_jT Diag(T'E_jT))."""
    total = 0.0
    for E in E_list:
        M = T.T @ E @ T
        total += float(np.sum(np.diag(M) ** 2))
    return total / p**2


def rotate_original(
    qs: QuantificationSet, fit: OriginalFit, tol: float = DEFAULT_TOL, max_sweeps: int = DEFAULT_MAX_SWEEPS
) -> OriginalRotation:
    """Pairwise varimax sweeps driven by the E_j matrices."""
    k = fit.k
    if k < 2:
        raise KTooSmallError(f"rotation needs k >= 2, got k={k}")
    X = np.array(fit.X, dtype=float)
    G = np.array(fit.Gamma, dtype=float)
    T = np.eye(k)
    thetas = []
    converged = False
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        largest = 0.0
        for l in range(k - 1):
            for t in range(l + 1, k):
                cols = [l, t]
                a, b = reformulation_coefficients(X[:, cols], qs, G[np.ix_(cols, cols)])
                _, _, theta = planar_angle(a, b)
                largest = max(largest, abs(theta))
                thetas.append(theta)
                if theta != 0.0:
                    R = np.eye(k)
                    R[np.ix_(cols, cols)] = planar_rotation(theta)
                    X[:, cols] = X[:, cols] @ R[np.ix_(cols, cols)]
                    T = T @ R
                    G = R.T @ G @ R
        if largest < tol:
            converged = True
            break
    C = squared_loadings_original(qs, X)
    return OriginalRotation(T=T, X_rot=X, C_rot=C, thetas=thetas, converged=converged, sweeps=sweeps)
