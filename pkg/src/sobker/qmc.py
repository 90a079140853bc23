"""Worst-case error of equal-weight quadrature in ``H(K)``.

For a probability density ``rho`` the integral ``S(f) = int f rho`` has the
representer ``h(t) = int K(t, x) rho(x) dx``, and the algorithm
``A_n(f) = (1/n) sum_j f(x_j)`` has squared worst-case error

    e^2 = ||h||^2 - (2/n) sum_j h(x_j) + (1/n^2) sum_ij K(x_i, x_j).

``h`` and ``||h||^2`` are computed in closed form for the Gaussian kernel with
the standard Gaussian density, by deterministic product quadrature for
product kernels with product densities, and by Monte Carlo otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import _pycore
from .embedding import embedding_norm
from .errors import DomainError
from .kernels_closed import Family, KernelSpec, diag_value, k1s_coefficients, kernel_colsum, kernel_matrix, kernel_pairs
from .rng import MC_CROSS, MC_NORM, POINTS, CounterRNG

DEFAULT_MC_SAMPLES = 100_000
METHODS = ("auto", "closed", "quadrature", "mc")
PRODUCT_FAMILIES = frozenset({Family.SOBOLEV_1D, Family.TENSOR, Family.SOBOLEV_INF, Family.GAUSSIAN})

# 1-d product quadrature: Gauss-Legendre order and panels per half-line
_QUAD_ORDER = 16
_QUAD_PANELS = 48
_GAUSS_SUPPORT = 12.0
_CHUNK = 256


@dataclass(frozen=True)
class Density:
    """Probability density on ``R^d``: standard Gaussian or uniform on a box."""

    kind: str
    d: int
    lo: tuple[float, ...] | None = None
    hi: tuple[float, ...] | None = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.kind not in ("gaussian", "uniform"):
            raise DomainError(f"unknown density kind {self.kind!r}")
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"d must be an integer >= 1, got {self.d}")
        if self.kind == "uniform":
            if self.lo is None or self.hi is None or len(self.lo) != self.d or len(self.hi) != self.d:
                raise DomainError(f"uniform box needs lo and hi of length d={self.d}")
            if not all(a < b for a, b in zip(self.lo, self.hi)):
                raise DomainError("uniform box needs lo < hi in every coordinate")

    @classmethod
    def standard_gaussian(cls, d: int, rng_seed: int = 0) -> "Density":
        return cls("gaussian", d, rng_seed=rng_seed)

    @classmethod
    def uniform_box(cls, lo, hi, rng_seed: int = 0) -> "Density":
        lo = tuple(float(v) for v in np.atleast_1d(lo))
        hi = tuple(float(v) for v in np.atleast_1d(hi))
        return cls("uniform", len(lo), lo, hi, rng_seed=rng_seed)

    def sample(self, n: int, seed: int | None = None, stream: int = POINTS, offset: int = 0) -> np.ndarray:
        """Points ``offset .. offset + n - 1`` of the given counter stream."""
        rng = CounterRNG(self.rng_seed if seed is None else seed, stream)
        if self.kind == "gaussian":
            z = rng.normal(offset * self.d, n * self.d)
            return z.reshape(n, self.d)
        u = rng.uniform(offset * self.d, n * self.d).reshape(n, self.d)
        lo, hi = np.array(self.lo), np.array(self.hi)
        return lo + (hi - lo) * u

    def pdf(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.kind == "gaussian":
            return (2 * np.pi) ** (-self.d / 2) * np.exp(-0.5 * np.sum(x * x, axis=1))
        lo, hi = np.array(self.lo), np.array(self.hi)
        inside = np.all((x >= lo) & (x <= hi), axis=1)
        return inside / np.prod(hi - lo)

    def describe(self) -> str:
        if self.kind == "gaussian":
            return f"standard_gaussian(d={self.d})"
        return f"uniform_box(lo={list(self.lo)}, hi={list(self.hi)})"


@dataclass(frozen=True)
class PointSet:
    """Ordered points with their provenance."""

    points: np.ndarray = field(compare=False)
    seed: int | None = None
    generator: str = "user"

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.shape[0] < 1:
            raise DomainError("a point set needs at least one point")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @classmethod
    def draw(cls, rho: Density, n: int, seed: int, trial: int = 0) -> "PointSet":
        """Trial ``k`` uses points ``k n .. (k+1) n - 1`` of the point stream."""
        pts = rho.sample(n, seed=seed, stream=POINTS, offset=trial * n)
        return cls(pts, seed=seed, generator=f"philox4x64/{rho.kind}/trial={trial}")


@dataclass(frozen=True)
class WceReport:
    """Squared worst-case error ``e2 = hh - cross + gram`` and its terms."""

    e2: float
    hh: float
    cross: float
    gram: float
    mc_std_err: float
    method: str
    n: int

    @property
    def e(self) -> float:
        """``sqrt(max(e2, 0))``: Monte Carlo noise can make ``e2`` negative."""
        return math.sqrt(max(self.e2, 0.0))

    def as_dict(self) -> dict:
        return {"e2": self.e2, "e": self.e, "hh": self.hh, "cross": self.cross, "gram": self.gram,
                "mc_std_err": self.mc_std_err, "method": self.method, "n": self.n}


def _check(spec: KernelSpec, rho: Density):
    if spec.d != rho.d:
        raise DomainError(f"kernel has d={spec.d} but density has d={rho.d}")
    if not spec.has_closed_form:
        raise DomainError(f"{spec.family.value} kernels are only available through the quadrature "
                          "oracle and are not supported for integration")


def resolve_method(spec: KernelSpec, rho: Density, method: str = "auto") -> str:
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}, choose from {METHODS}")
    closed_ok = spec.family == Family.GAUSSIAN and rho.kind == "gaussian"
    quad_ok = spec.family in PRODUCT_FAMILIES
    if method == "auto":
        return "closed" if closed_ok else "quadrature" if quad_ok else "mc"
    if method == "closed" and not closed_ok:
        raise DomainError("closed form only for the Gaussian kernel with the standard Gaussian density")
    if method == "quadrature" and not quad_ok:
        raise DomainError(f"product quadrature needs a product kernel, got {spec.family.value}")
    return method


# one-dimensional product quadrature

def _profile(spec: KernelSpec):
    """Univariate factor ``k1(r)`` of a product kernel."""
    f = spec.family
    if f in (Family.SOBOLEV_1D, Family.TENSOR):
        coef = k1s_coefficients(int(spec.s))
        return lambda r: _pycore.k1s_profile(r, coef)
    if f == Family.SOBOLEV_INF:
        return _pycore.kinf_profile
    return lambda r: np.exp(-0.5 * r * r) / math.sqrt(2 * math.pi)


def _gl_intervals(a, b, panels: int):
    """Nodes and weights of composite Gauss-Legendre on rows of intervals ``[a, b]``."""
    x, w = leggauss(_QUAD_ORDER)
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    t = (np.arange(panels)[:, None] + (x[None, :] + 1) / 2).ravel() / panels
    nodes = a[:, None] + (b - a)[:, None] * t[None, :]
    weights = ((b - a) / (2 * panels))[:, None] * np.tile(w, panels)[None, :]
    return nodes, weights


def _axis_support(rho: Density, j: int) -> tuple[float, float, callable]:
    if rho.kind == "gaussian":
        return -_GAUSS_SUPPORT, _GAUSS_SUPPORT, lambda x: np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
    lo, hi = rho.lo[j], rho.hi[j]
    return lo, hi, lambda x: np.full_like(x, 1 / (hi - lo))


def _h_axis(k1, rho: Density, j: int, tau: np.ndarray) -> np.ndarray:
    """``int k1(tau - x) rho_j(x) dx`` with the interval split at the kink ``x = tau``."""
    L, R, pdf = _axis_support(rho, j)
    out = np.empty(len(tau))
    for i in range(0, len(tau), _CHUNK):
        c = np.clip(tau[i:i + _CHUNK], L, R)
        total = np.zeros(len(c))
        for a, b in ((np.full_like(c, L), c), (c, np.full_like(c, R))):
            x, w = _gl_intervals(a, b, _QUAD_PANELS)
            total += np.sum(w * k1(np.abs(tau[i:i + _CHUNK, None] - x)) * pdf(x), axis=1)
        out[i:i + _CHUNK] = total
    return out


def _hh_axis(k1, rho: Density, j: int) -> float:
    """``E k1(|X - X'|)`` for independent ``X, X' ~ rho_j``, over the density of the difference."""
    if rho.kind == "gaussian":
        R = _GAUSS_SUPPORT * math.sqrt(2)
        pdf = lambda z: np.exp(-z * z / 4) / math.sqrt(4 * math.pi)  # noqa: E731
    else:
        R = rho.hi[j] - rho.lo[j]
        pdf = lambda z: (R - np.abs(z)) / R ** 2  # noqa: E731
    x, w = _gl_intervals(np.zeros(1), np.full(1, R), 2 * _QUAD_PANELS)
    return float(2 * np.sum(w * k1(x) * pdf(x)))


# representer and its norm

def representer_h(spec: KernelSpec, rho: Density, t, mc_samples: int = DEFAULT_MC_SAMPLES,
                  method: str = "auto") -> tuple[np.ndarray | float, np.ndarray | float]:
    """``h(t) = int K(t, x) rho(x) dx`` and its standard error.

    ``t`` is one point or an ``(n, d)`` array.
    """
    _check(spec, rho)
    method = resolve_method(spec, rho, method)
    t_arr = np.asarray(t, dtype=float)
    single = t_arr.ndim <= 1 and not (spec.d == 1 and t_arr.ndim == 1 and t_arr.size > 1)
    T = t_arr.reshape(-1, spec.d)
    if method == "closed":
        val = (4 * np.pi) ** (-spec.d / 2) * np.exp(-np.sum(T * T, axis=1) / 4)
        err = np.zeros(len(T))
    elif method == "quadrature":
        k1 = _profile(spec)
        val = np.ones(len(T))
        for j in range(spec.d):
            val *= _h_axis(k1, rho, j, T[:, j])
        err = np.zeros(len(T))
    else:
        X = rho.sample(mc_samples, stream=MC_CROSS)
        K = kernel_matrix(spec, T, X)
        val = K.mean(axis=1)
        err = K.std(axis=1, ddof=1) / math.sqrt(mc_samples)
    if single:
        return float(val[0]), float(err[0])
    return val, err


def representer_norm_sq(spec: KernelSpec, rho: Density, mc_samples: int = DEFAULT_MC_SAMPLES,
                        method: str = "auto") -> tuple[float, float]:
    """``||h||^2 = int int K(x, t) rho(x) rho(t) dx dt`` and its standard error.

    Monte Carlo uses independent pairs from one stream, which is unbiased.
    """
    _check(spec, rho)
    method = resolve_method(spec, rho, method)
    if method == "closed":
        return (6 * math.pi) ** (-spec.d / 2), 0.0
    if method == "quadrature":
        k1 = _profile(spec)
        return math.prod(_hh_axis(k1, rho, j) for j in range(spec.d)), 0.0
    Z = rho.sample(2 * mc_samples, stream=MC_NORM)
    vals = kernel_pairs(spec, Z[0::2], Z[1::2])
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(mc_samples))


class _CrossTerm:
    """Evaluates ``(2/n) sum_j h(x_j)``; Monte Carlo samples are drawn once."""

    def __init__(self, spec: KernelSpec, rho: Density, method: str, mc_samples: int):
        self.spec, self.rho, self.method = spec, rho, method
        self.samples = rho.sample(mc_samples, stream=MC_CROSS) if method == "mc" else None

    def __call__(self, pts: np.ndarray) -> tuple[float, float]:
        n = len(pts)
        if self.method != "mc":
            h, _ = representer_h(self.spec, self.rho, pts, method=self.method)
            return 2.0 / n * float(np.sum(np.atleast_1d(h))), 0.0
        g = 2.0 / n * kernel_colsum(self.spec, pts, self.samples)
        return float(g.mean()), float(g.std(ddof=1) / math.sqrt(len(g)))


def gram_term(spec: KernelSpec, pts: np.ndarray) -> float:
    """``(1/n^2) sum_ij K(x_i, x_j)``."""
    n = len(pts)
    return float(np.sum(kernel_colsum(spec, pts, pts))) / n ** 2


def _report(hh, hh_se, cross, cross_se, gram, method, n) -> WceReport:
    return WceReport(e2=hh - cross + gram, hh=hh, cross=cross, gram=gram,
                     mc_std_err=math.hypot(hh_se, cross_se), method=method, n=n)


def _as_points(spec: KernelSpec, pts) -> np.ndarray:
    arr = pts.points if isinstance(pts, PointSet) else np.atleast_2d(np.asarray(pts, dtype=float))
    if arr.shape[1] != spec.d:
        raise DomainError(f"points have dimension {arr.shape[1]}, kernel has d={spec.d}")
    return arr


def worst_case_error(spec: KernelSpec, rho: Density, pts, mc_samples: int = DEFAULT_MC_SAMPLES,
                     method: str = "auto") -> WceReport:
    """Squared worst-case error of the equal-weight rule on ``pts``."""
    _check(spec, rho)
    method = resolve_method(spec, rho, method)
    X = _as_points(spec, pts)
    hh, hh_se = representer_norm_sq(spec, rho, mc_samples, method)
    cross, cross_se = _CrossTerm(spec, rho, method, mc_samples)(X)
    return _report(hh, hh_se, cross, cross_se, gram_term(spec, X), method, len(X))


def mean_square_bound(spec: KernelSpec, rho: Density | None, n: int) -> float:
    """``K(0, 0) / n``: the average of ``e^2`` over i.i.d. points is below it."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return diag_value(spec) / n


def search_point_set(spec: KernelSpec, rho: Density, n: int, trials: int, seed: int,
                     mc_samples: int = DEFAULT_MC_SAMPLES, method: str = "auto"
                     ) -> tuple[PointSet, WceReport]:
    """Best of ``trials`` i.i.d. point sets drawn from ``rho``.

    Trial ``k`` uses a fixed slice of the point stream and all trials share
    the Monte Carlo samples, so adding trials never increases the result.
    """
    if trials < 1 or n < 1:
        raise DomainError(f"need trials >= 1 and n >= 1, got trials={trials}, n={n}")
    _check(spec, rho)
    method = resolve_method(spec, rho, method)
    hh, hh_se = representer_norm_sq(spec, rho, mc_samples, method)
    cross_fn = _CrossTerm(spec, rho, method, mc_samples)
    best = None
    for k in range(trials):
        ps = PointSet.draw(rho, n, seed, trial=k)
        cross, cross_se = cross_fn(ps.points)
        rep = _report(hh, hh_se, cross, cross_se, gram_term(spec, ps.points), method, n)
        if best is None or rep.e2 < best[1].e2:
            best = (ps, rep)
    return best


def _ceil(x: float) -> int:
    """Ceiling that forgives rounding noise at integers."""
    r = round(x)
    return int(r) if math.isclose(x, r, rel_tol=1e-12, abs_tol=0.0) else math.ceil(x)


def info_complexity_bound(spec: KernelSpec, eps: float) -> int:
    """``ceil((||I_K|| / eps)^2)`` points suffice for worst-case error ``eps``."""
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    return _ceil((embedding_norm(spec) / eps) ** 2)


SOBOLEV_CAP_CONSTANT = 100.6009


def sobolev_complexity_cap(d: int, eps: float) -> int:
    """``ceil(100.6009 (6/11)^(2d) / eps^2)``, uniform over ``s > d/2``."""
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    return _ceil(SOBOLEV_CAP_CONSTANT * (6 / 11) ** (2 * d) / eps ** 2)
