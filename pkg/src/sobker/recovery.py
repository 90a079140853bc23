"""Minimal-norm interpolation in ``H(K)``.

The interpolant of data ``(x_j, y_j)`` with the smallest ``H(K)`` norm is the
spline ``f*(t) = sum_j alpha_j K(t, x_j)`` with ``G alpha = y``, where
``G = [K(x_i, x_j)]`` is the Gram matrix, and ``||f*||^2 = alpha^T y``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import DomainError, NumericalError
from .kernels_closed import KernelSpec, kernel_matrix
from .qmc import PointSet

JITTER_LADDER = (0.0, 1e-12, 1e-10, 1e-8)
REFINE_STEPS = 3


def _points(spec: KernelSpec, pts) -> PointSet:
    ps = pts if isinstance(pts, PointSet) else PointSet(pts)
    if ps.d != spec.d:
        raise DomainError(f"points have dimension {ps.d}, kernel has d={spec.d}")
    return ps


def gram_matrix(spec: KernelSpec, pts) -> np.ndarray:
    """``G[i, j] = K(x_i, x_j)``, symmetrized exactly."""
    X = _points(spec, pts).points
    G = kernel_matrix(spec, X)
    return (G + G.T) / 2


def _reject_duplicates(X: np.ndarray) -> None:
    uniq = np.unique(X, axis=0)
    if len(uniq) != len(X):
        raise DomainError("point set contains duplicate points")


def factor_with_jitter(G: np.ndarray, ladder=JITTER_LADDER):
    """Cholesky factor of ``G + jitter I``, climbing ``ladder`` (relative to the
    mean diagonal) until the factorization succeeds.

    Returns
    -------
    factor : tuple
        As returned by :func:`scipy.linalg.cho_factor`.
    jitter : float
        Absolute jitter added to the diagonal.
    """
    scale = float(np.mean(np.diag(G)))
    for rel in ladder:
        jitter = rel * scale
        try:
            factor = linalg.cho_factor(G + jitter * np.eye(len(G)), lower=True, check_finite=True)
        except linalg.LinAlgError:
            continue
        if np.all(np.diag(factor[0]) > 0):
            return factor, jitter
    raise NumericalError(f"Gram matrix is not numerically positive definite even with jitter "
                         f"{ladder[-1]:g} x mean diagonal")


@dataclass(frozen=True)
class SplineModel:
    """Fitted minimal-norm interpolant. Immutable after fitting."""

    spec: KernelSpec
    points: PointSet
    coeffs: np.ndarray = field(compare=False)
    values: np.ndarray = field(compare=False)
    norm: float
    jitter_used: float
    residual: float

    def __call__(self, t) -> np.ndarray | float:
        return eval_spline(self, t)


def fit_spline(spec: KernelSpec, pts, y) -> SplineModel:
    """Solve ``G alpha = y`` for the minimal-norm interpolant.

    The jittered factor preconditions a few steps of iterative refinement
    against the exact Gram matrix.
    """
    ps = _points(spec, pts)
    X = ps.points
    y = np.asarray(y, dtype=float).ravel()
    if y.shape != (ps.n,):
        raise DomainError(f"need {ps.n} data values, got {y.shape[0]}")
    _reject_duplicates(X)
    G = gram_matrix(spec, ps)
    factor, jitter = factor_with_jitter(G)
    alpha = linalg.cho_solve(factor, y)
    for _ in range(REFINE_STEPS if jitter > 0 else 1):
        alpha = alpha + linalg.cho_solve(factor, y - G @ alpha)
    residual = float(np.max(np.abs(G @ alpha - y))) if len(y) else 0.0
    norm_sq = float(alpha @ y)
    alpha.setflags(write=False)
    y.setflags(write=False)
    return SplineModel(spec, ps, alpha, y, math.sqrt(max(norm_sq, 0.0)), jitter, residual)


def eval_spline(model: SplineModel, t) -> np.ndarray | float:
    """``f*(t) = sum_j alpha_j K(t, x_j)`` at one point or rows of an array."""
    t_arr = np.asarray(t, dtype=float)
    d = model.spec.d
    single = t_arr.ndim == 0 or (t_arr.ndim == 1 and t_arr.size == d)
    T = t_arr.reshape(-1, d)
    vals = kernel_matrix(model.spec, T, model.points.points) @ model.coeffs
    return float(vals[0]) if single else vals


def spline_norm(model: SplineModel) -> float:
    """``||f*|| = sqrt(alpha^T y)``."""
    return model.norm
