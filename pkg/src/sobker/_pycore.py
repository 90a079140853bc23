"""Pure numpy implementation of the hot kernels.

Mirrors the compiled ``_core`` module function for function; one of the two
is bound to :mod:`sobker._backend` at import time.

Family codes and their parameter layout
---------------------------------------
K1S (1)
    product over axes of ``sum_j A_j exp(-r b_j) cos(r c_j + phi_j)``,
    ``r = |x_j - t_j|``; ``coef`` rows are ``(A, b, c, phi)``.
KINF (2)
    product over axes of ``2 (sin r - r cos r) / (pi r^3)``.
GAUSS (3)
    ``params[0] * exp(-|x - t|^2 / 2)``.
MATERN_HALF (4)
    ``params[0] * sqrt(pi/2) exp(-r) sum_k c_k r^(n-k)`` with
    ``params = (pref, n, c_0, ..., c_n)``.
MATERN (5)
    ``params[0] * r^nu K_nu(r)``, ``params = (pref, nu, limit_at_zero)``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

K1S, KINF, GAUSS, MATERN_HALF, MATERN = 1, 2, 3, 4, 5

NAME = "python"
_CHUNK = 1 << 21

# alternating series of the infinite-order profile, used for |x| < 0.5
_KINF_SWITCH = 0.5


def _kinf_series_coefficients():
    coeffs = []
    j = 0
    while True:
        a = (-1) ** j / (math.factorial(2 * j + 1) * (2 * j + 3))
        coeffs.append(2.0 / math.pi * a)
        if abs(a) * _KINF_SWITCH ** (2 * j) < 1e-17:
            return np.array(coeffs)
        j += 1


KINF_SERIES = _kinf_series_coefficients()


def set_num_threads(n: int) -> None:
    """No-op; the numpy path is single threaded."""


def kinf_profile(x):
    x = np.abs(np.asarray(x, dtype=float))
    small = x < _KINF_SWITCH
    out = np.empty_like(x)
    xs = x[small] ** 2
    acc = np.zeros_like(xs)
    for a in KINF_SERIES[::-1]:
        acc = acc * xs + a
    out[small] = acc
    xl = x[~small]
    out[~small] = 2.0 * (np.sin(xl) - xl * np.cos(xl)) / (np.pi * xl ** 3)
    return out


def k1s_profile(r, coef):
    r = np.abs(np.asarray(r, dtype=float))
    out = np.zeros_like(r)
    for a, b, c, phi in coef:
        out += a * np.exp(-r * b) * np.cos(r * c + phi)
    return out


def _radial(code, params, r):
    if code == GAUSS:
        return params[0] * np.exp(-0.5 * r * r)
    if code == MATERN_HALF:
        n = int(params[1])
        poly = np.zeros_like(r)
        for ck in params[2:2 + n + 1]:
            poly = poly * r + ck
        return params[0] * math.sqrt(math.pi / 2) * np.exp(-r) * poly
    if code == MATERN:
        nu = params[1]
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            v = r ** nu * _sp.kv(nu, r)
        return params[0] * np.where((r == 0) | ~np.isfinite(v), params[2], v)
    raise ValueError(f"unknown family code {code}")


def _eval_delta(code, coef, params, delta):
    """Kernel value for an array of offsets ``delta`` of shape (..., d)."""
    if code == K1S:
        out = k1s_profile(delta[..., 0], coef)
        for j in range(1, delta.shape[-1]):
            out *= k1s_profile(delta[..., j], coef)
        return out
    if code == KINF:
        out = kinf_profile(delta[..., 0])
        for j in range(1, delta.shape[-1]):
            out *= kinf_profile(delta[..., j])
        return out
    if code == GAUSS:
        r2 = np.sum(delta * delta, axis=-1)
        return params[0] * np.exp(-0.5 * r2)
    r = np.sqrt(np.sum(delta * delta, axis=-1))
    return _radial(code, params, r)


def kernel_matrix(code, coef, params, X, Y):
    X = np.ascontiguousarray(X, dtype=float)
    Y = np.ascontiguousarray(Y, dtype=float)
    n, m = X.shape[0], Y.shape[0]
    out = np.empty((n, m))
    rows = max(1, _CHUNK // max(1, m * X.shape[1]))
    for i in range(0, n, rows):
        delta = X[i:i + rows, None, :] - Y[None, :, :]
        out[i:i + rows] = _eval_delta(code, coef, params, delta)
    return out


def kernel_colsum(code, coef, params, X, Y):
    """``out[k] = sum_i K(X[i], Y[k])``, summed in row order."""
    X = np.ascontiguousarray(X, dtype=float)
    Y = np.ascontiguousarray(Y, dtype=float)
    n, m = X.shape[0], Y.shape[0]
    out = np.zeros(m)
    cols = max(1, _CHUNK // max(1, n * X.shape[1]))
    for k in range(0, m, cols):
        delta = X[:, None, :] - Y[None, k:k + cols, :]
        out[k:k + cols] = _eval_delta(code, coef, params, delta).sum(axis=0)
    return out


def kernel_pairs(code, coef, params, X, Y):
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    return _eval_delta(code, coef, params, X - Y)


def poly_symbol_slab(w2a, w2b, w2c, alphas, lam):
    """``1 / v^2`` on the grid ``w2a x w2b x w2c`` of squared frequencies,
    ``v^2 = sum_alpha lam_alpha prod_j w2_j^alpha_j``."""
    alphas = np.asarray(alphas)
    tables = []
    for j, w2 in enumerate((w2a, w2b, w2c)):
        kmax = int(alphas[:, j].max())
        tables.append(np.asarray(w2, dtype=float)[None, :] ** np.arange(kmax + 1)[:, None])
    v2 = np.zeros((len(w2a), len(w2b), len(w2c)))
    with np.errstate(over="ignore", invalid="ignore"):
        for (a0, a1, a2), lm in zip(alphas, lam):
            v2 += lm * tables[0][a0][:, None, None] * (tables[1][a1][:, None] * tables[2][a2][None, :])[None]
    with np.errstate(divide="ignore"):
        return 1.0 / v2


def iso_symbol_slab(w2a, w2b, w2c, scale, s):
    """``1 / (scale (1 + |w|^2)^s)`` on the tensor grid."""
    base = (1.0 + np.asarray(w2a)[:, None, None] + np.asarray(w2b)[None, :, None]
            + np.asarray(w2c)[None, None, :])
    return 1.0 / (scale * base ** s)
