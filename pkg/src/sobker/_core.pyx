# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Same signatures and family codes as ``_pycore``.

Every output element is computed by one thread and column sums run in a fixed
row order, so results do not depend on the thread count.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport exp, cos, sin, sqrt, fabs, pow, M_PI, isfinite
from scipy.special.cython_special cimport kv

cimport openmp

cnp.import_array()

K1S, KINF, GAUSS, MATERN_HALF, MATERN = 1, 2, 3, 4, 5
NAME = "cython"

from sobker._pycore import KINF_SERIES as _KS

cdef double[::1] KINF_SERIES = np.ascontiguousarray(_KS, dtype=np.float64)
cdef int N_KINF = KINF_SERIES.shape[0]
cdef int _threads = 0


def set_num_threads(int n):
    """Cap the OpenMP worker count; 0 restores the runtime default."""
    global _threads
    _threads = n if n > 0 else 0


cdef inline int _nthreads() noexcept nogil:
    if _threads > 0:
        return _threads
    return openmp.omp_get_max_threads()


cdef inline double _kinf(double x) noexcept nogil:
    cdef double ax = fabs(x), x2, acc
    cdef int j
    if ax < 0.5:
        x2 = ax * ax
        acc = 0.0
        for j in range(N_KINF - 1, -1, -1):
            acc = acc * x2 + KINF_SERIES[j]
        return acc
    return 2.0 * (sin(ax) - ax * cos(ax)) / (M_PI * ax * ax * ax)


cdef inline double _k1s(double r, const double[:, ::1] coef) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t j
    r = fabs(r)
    for j in range(coef.shape[0]):
        acc = acc + coef[j, 0] * exp(-r * coef[j, 1]) * cos(r * coef[j, 2] + coef[j, 3])
    return acc


cdef inline double _eval(int code, const double[:, ::1] coef, const double[::1] params,
                         const double[:, ::1] X, Py_ssize_t i,
                         const double[:, ::1] Y, Py_ssize_t k) noexcept nogil:
    cdef Py_ssize_t j, d = X.shape[1]
    cdef double out, dl, r2 = 0.0, r, poly, v
    cdef int n
    if code == 1:
        out = 1.0
        for j in range(d):
            out = out * _k1s(X[i, j] - Y[k, j], coef)
        return out
    if code == 2:
        out = 1.0
        for j in range(d):
            out = out * _kinf(X[i, j] - Y[k, j])
        return out
    for j in range(d):
        dl = X[i, j] - Y[k, j]
        r2 = r2 + dl * dl
    if code == 3:
        return params[0] * exp(-0.5 * r2)
    r = sqrt(r2)
    if code == 4:
        n = <int>params[1]
        poly = 0.0
        for j in range(n + 1):
            poly = poly * r + params[2 + j]
        return params[0] * sqrt(M_PI / 2.0) * exp(-r) * poly
    if r == 0.0:
        return params[0] * params[2]
    v = pow(r, params[1]) * kv(params[1], r)
    if not isfinite(v):
        v = params[2]
    return params[0] * v


def _prep(code, coef, params, X, Y):
    if code not in (1, 2, 3, 4, 5):
        raise ValueError(f"unknown family code {code}")
    coef = np.ascontiguousarray(np.asarray(coef, dtype=np.float64).reshape(-1, 4))
    params = np.ascontiguousarray(params, dtype=np.float64).ravel()
    if params.shape[0] == 0:
        params = np.zeros(1)
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    return coef, params, X, Y


def kernel_matrix(int code, coef, params, X, Y):
    coef, params, X, Y = _prep(code, coef, params, X, Y)
    cdef const double[:, ::1] c = coef
    cdef const double[::1] p = params
    cdef const double[:, ::1] x = X
    cdef const double[:, ::1] y = Y
    cdef Py_ssize_t n = x.shape[0], m = y.shape[0], i, k
    out = np.empty((n, m))
    cdef double[:, ::1] o = out
    with nogil:
        for i in prange(n, schedule="static", num_threads=_nthreads()):
            for k in range(m):
                o[i, k] = _eval(code, c, p, x, i, y, k)
    return out


def kernel_colsum(int code, coef, params, X, Y):
    """``out[k] = sum_i K(X[i], Y[k])``, summed in row order."""
    coef, params, X, Y = _prep(code, coef, params, X, Y)
    cdef const double[:, ::1] c = coef
    cdef const double[::1] p = params
    cdef const double[:, ::1] x = X
    cdef const double[:, ::1] y = Y
    cdef Py_ssize_t n = x.shape[0], m = y.shape[0], i, k
    cdef double acc
    out = np.empty(m)
    cdef double[::1] o = out
    with nogil:
        for k in prange(m, schedule="static", num_threads=_nthreads()):
            acc = 0.0
            for i in range(n):
                acc = acc + _eval(code, c, p, x, i, y, k)
            o[k] = acc
    return out


def kernel_pairs(int code, coef, params, X, Y):
    coef, params, X, Y = _prep(code, coef, params, X, Y)
    cdef const double[:, ::1] c = coef
    cdef const double[::1] p = params
    cdef const double[:, ::1] x = X
    cdef const double[:, ::1] y = Y
    cdef Py_ssize_t n = x.shape[0], i
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in prange(n, schedule="static", num_threads=_nthreads()):
            o[i] = _eval(code, c, p, x, i, y, i)
    return out


def poly_symbol_slab(w2a, w2b, w2c, alphas, lam):
    """``1 / v^2`` on the grid of squared frequencies,
    ``v^2 = sum_alpha lam_alpha prod_j w2_j^alpha_j``."""
    al = np.asarray(alphas, dtype=np.int64)
    lam = np.asarray(lam, dtype=np.float64)
    # per-term power tables, weight folded into the first axis
    cdef const double[:, ::1] pa = np.ascontiguousarray(
        lam[:, None] * np.asarray(w2a, dtype=np.float64)[None, :] ** al[:, 0:1])
    cdef const double[:, ::1] pb = np.ascontiguousarray(
        np.asarray(w2b, dtype=np.float64)[None, :] ** al[:, 1:2])
    cdef const double[:, ::1] pc = np.ascontiguousarray(
        np.asarray(w2c, dtype=np.float64)[None, :] ** al[:, 2:3])
    cdef Py_ssize_t nt = pa.shape[0], na = pa.shape[1], nb = pb.shape[1], nc = pc.shape[1]
    cdef Py_ssize_t i, j, k, q
    out = np.empty((na, nb, nc))
    cdef double[:, :, ::1] o = out
    cdef double v
    with nogil:
        for i in prange(na, schedule="static", num_threads=_nthreads()):
            for j in range(nb):
                for k in range(nc):
                    v = 0.0
                    for q in range(nt):
                        v = v + pa[q, i] * pb[q, j] * pc[q, k]
                    o[i, j, k] = 1.0 / v
    return out


def iso_symbol_slab(w2a, w2b, w2c, double scale, double s):
    """``1 / (scale (1 + |w|^2)^s)`` on the tensor grid."""
    cdef const double[::1] a = np.ascontiguousarray(w2a, dtype=np.float64)
    cdef const double[::1] b = np.ascontiguousarray(w2b, dtype=np.float64)
    cdef const double[::1] cc = np.ascontiguousarray(w2c, dtype=np.float64)
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], nc = cc.shape[0], i, j, k
    # integer and half-integer powers by repeated multiplication
    cdef int twice = <int>(2 * s)
    cdef bint fast = (2 * s == twice) and twice <= 64
    cdef int ip = twice // 2, q
    cdef bint half = twice % 2 == 1
    cdef double base, acc
    out = np.empty((na, nb, nc))
    cdef double[:, :, ::1] o = out
    with nogil:
        for i in prange(na, schedule="static", num_threads=_nthreads()):
            for j in range(nb):
                for k in range(nc):
                    base = 1.0 + a[i] + b[j] + cc[k]
                    if fast:
                        acc = 1.0
                        for q in range(ip):
                            acc = acc * base
                        if half:
                            acc = acc * sqrt(base)
                    else:
                        acc = pow(base, s)
                    o[i, j, k] = 1.0 / (scale * acc)
    return out
