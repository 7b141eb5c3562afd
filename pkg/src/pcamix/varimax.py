"""Varimax rotation for PCAMIX with a direct optimal planar angle.

The sweep visits the pairs (1,2), (1,3), ..., (k-1,k). For each pair the
varimax function restricted to that plane is

    f(theta) = f(0) + rho / (4p) * (cos(4 theta - psi) - cos(psi))

so the optimal angle is ``psi / 4`` and no search is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import KTooSmallError
from .svd import PcamixModel, category_coordinates, squared_loadings

DEFAULT_TOL = 1e-8
DEFAULT_MAX_SWEEPS = 100
# |a| below this fraction of rho is treated as exactly 0 (rounding noise)
A_ZERO_RTOL = 1e-12


@dataclass(frozen=True)
class PlanarCoefficients:
    u: np.ndarray
    v: np.ndarray
    a: float
    b: float
    rho: float
    psi: float
    theta: float


@dataclass(frozen=True)
class SweepRecord:
    sweep: int
    pair: tuple
    theta: float
    objective: float
    gain: float


@dataclass(frozen=True)
class RotationResult:
    T: np.ndarray
    X_rot: np.ndarray
    A_rot: np.ndarray
    C_rot: np.ndarray
    category_coords_rot: np.ndarray
    trace: list = field(repr=False)
    converged: bool
    sweeps: int
    p1: int = 0

    @property
    def A1_rot(self) -> np.ndarray:
        return self.A_rot[: self.p1]

    @property
    def A2_rot(self) -> np.ndarray:
        return self.A_rot[self.p1 :]

    @property
    def variance_rot(self) -> np.ndarray:
        """Variance carried by each rotated dimension (column sums of C_rot)."""
        return self.C_rot.sum(axis=0)

    @property
    def objectives(self) -> np.ndarray:
        return np.array([rec.objective for rec in self.trace])


def objective_from_c(C) -> float:
    C = np.asarray(C, dtype=float)
    p = C.shape[0]
    return float(np.sum(C**2) - np.sum(C.sum(axis=0) ** 2) / p)


def varimax_objective(A, index_sets, p=None) -> float:
    """Varimax criterion of the squared loadings built from ``A``.

    ``p`` defaults to the number of index sets.
    """
    C = squared_loadings(A, index_sets)
    p = len(index_sets) if p is None else p
    return float(np.sum(C**2) - np.sum(C.sum(axis=0) ** 2) / p)


def planar_angle(a: float, b: float) -> tuple[float, float, float]:
    """Return ``(rho, psi, theta)`` for coefficients ``a`` and ``b``.

    psi = arccos(b / rho), negated when a < 0; theta = psi / 4. A flat plane
    (rho == 0) gives theta = 0. When a vanishes and b < 0 both +pi/4 and
    -pi/4 are optimal; +pi/4 is returned.
    """
    rho = math.hypot(a, b)
    if rho == 0.0:
        return 0.0, 0.0, 0.0
    if abs(a) <= A_ZERO_RTOL * rho:
        a = 0.0
    psi = math.acos(max(-1.0, min(1.0, b / rho)))
    if a < 0:
        psi = -psi
    return rho, psi, psi / 4.0


def planar_coefficients(A_pair, index_sets) -> PlanarCoefficients:
    A_pair = np.asarray(A_pair, dtype=float)
    if A_pair.ndim != 2 or A_pair.shape[1] != 2:
        raise ValueError("planar_coefficients needs exactly two columns")
    a1, a2 = A_pair[:, 0], A_pair[:, 1]
    du = a1**2 - a2**2
    dv = 2.0 * a1 * a2
    u = np.array([du[s].sum() for s in index_sets])
    v = np.array([dv[s].sum() for s in index_sets])
    p = len(index_sets)
    su, sv = u.sum(), v.sum()
    a = float(2 * p * np.dot(u, v) - 2 * su * sv)
    b = float(p * np.sum(u**2 - v**2) - su**2 + sv**2)
    rho, psi, theta = planar_angle(a, b)
    return PlanarCoefficients(u=u, v=v, a=a, b=b, rho=rho, psi=psi, theta=theta)


def objective_closed_form(f0: float, coeffs: PlanarCoefficients, theta: float, p: int) -> float:
    return f0 + coeffs.rho / (4 * p) * (math.cos(4 * theta - coeffs.psi) - math.cos(coeffs.psi))


def varimax_derivative(coeffs: PlanarCoefficients, theta: float, p: int) -> float:
    """d f / d theta along the planar rotation path."""
    return (coeffs.a * math.cos(4 * theta) - coeffs.b * math.sin(4 * theta)) / p


def planar_rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotate_pair(M, l, t, theta):
    """Rotate columns ``l`` and ``t`` of ``M`` in place."""
    M[:, [l, t]] = M[:, [l, t]] @ planar_rotation(theta)


def varimax_sweeps(X, A, index_sets, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS):
    """Run pairwise sweeps on copies of scores ``X`` and loadings ``A``.

    ``X`` may be None when only the loadings matter. Returns
    ``(T, X_rot, A_rot, trace, converged, sweeps)``.
    """
    A = np.array(A, dtype=float)
    k = A.shape[1]
    if k < 2:
        raise KTooSmallError(f"rotation needs k >= 2, got k={k}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    X = None if X is None else np.array(X, dtype=float)
    p = len(index_sets)
    T = np.eye(k)
    trace = []
    converged = False
    sweeps = 0
    pairs = [(l, t) for l in range(k - 1) for t in range(l + 1, k)]

    objective = varimax_objective(A, index_sets, p)
    while sweeps < max_sweeps:
        sweeps += 1
        largest = 0.0
        for l, t in pairs:
            coeffs = planar_coefficients(A[:, [l, t]], index_sets)
            theta = coeffs.theta
            largest = max(largest, abs(theta))
            gain = coeffs.rho / (4 * p) * (1.0 - math.cos(coeffs.psi))
            if theta != 0.0:
                rotate_pair(A, l, t, theta)
                rotate_pair(T, l, t, theta)
                if X is not None:
                    rotate_pair(X, l, t, theta)
                objective = varimax_objective(A, index_sets, p)
            trace.append(SweepRecord(sweeps, (l, t), theta, objective, gain))
        if largest < tol:
            converged = True
            break
    return T, X, A, trace, converged, sweeps


def rotate(model: PcamixModel, tol: float = DEFAULT_TOL, max_sweeps: int = DEFAULT_MAX_SWEEPS) -> RotationResult:
    """Iterative pairwise varimax rotation of a fitted model.

    Sweeps stop when every angle of a sweep is below ``tol`` in absolute
    value. When ``max_sweeps`` runs out first the result is returned with
    ``converged=False``. Rotated dimensions keep their order.
    """
    T, X, A, trace, converged, sweeps = varimax_sweeps(
        model.X, model.A, model.index_sets, tol, max_sweeps
    )
    C = squared_loadings(A, model.index_sets)
    coords = category_coordinates(A[model.p1 :], model.recoded.category_map.all_frequencies)
    return RotationResult(
        T=T,
        X_rot=X,
        A_rot=A,
        C_rot=C,
        category_coords_rot=coords,
        trace=trace,
        converged=converged,
        sweeps=sweeps,
        p1=model.p1,
    )
