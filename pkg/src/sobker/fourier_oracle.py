"""Kernels defined by a Fourier symbol, evaluated by quadrature.

A symbol ``v(u)^2 > 0`` on ``R^d`` defines the translation-invariant kernel

    K(x, t) = int_{R^d} prod_j cos(2 pi (x_j - t_j) u_j) / v(u)^2 du.

The integral is truncated to the cube ``[-U, U]^d`` with ``U`` picked from an
analytic tail bound, and the cube is integrated with a tensor product of
one-dimensional Filon-type Gauss-Legendre rules. Each axis is cut into
geometrically growing panels ``[0, h], [h, 2h], [2h, 4h], ...``; on every panel
the symbol part is interpolated at the Gauss nodes and the cosine is integrated
exactly against the interpolant, so the rule stays accurate for arbitrarily
large offsets. The nodes do not depend on the offset, so many offsets share a
single evaluation of ``1 / v^2`` on the grid.

``w = 2 pi u`` is used throughout; polynomial symbols are stored as
``sum_alpha lambda_alpha prod_j w_j^(2 alpha_j)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss, legvander
from scipy.special import spherical_jn

from ._backend import core
from .errors import DomainError, NumericalError
from .weights import MultiIndexWeights, multi_indices

MAX_DIM = 3
MAX_RADIUS = 1e15
_SLAB_ELEMENTS = 1 << 22

KINDS = ("sobolev", "tensor_sobolev", "weighted", "isotropic", "sobolev_infinity", "custom")


def _sphere_area(d: int) -> float:
    """Surface area of the unit sphere in ``R^d``."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


@dataclass(frozen=True)
class SymbolFunction:
    """Fourier symbol ``v(u)^2`` of a kernel on ``R^d``.

    Parameters
    ----------
    d : int
        Dimension.
    kind : str
        One of ``KINDS``.
    s : float, optional
        Order for the Sobolev, tensor and isotropic kinds.
    weights : MultiIndexWeights, optional
        For the weighted kind.
    func : callable, optional
        For the custom kind: maps an ``(n, d)`` array of frequencies ``u`` to
        ``v(u)^2``.
    growth_order, growth_const : float
        For the custom kind: ``v(u)^2 >= growth_const * |2 pi u|^(2 p)`` with
        ``p = growth_order``. Drives the tail bound.
    """

    d: int
    kind: str
    s: float | None = None
    weights: MultiIndexWeights | None = None
    func: Callable | None = field(default=None, compare=False, hash=False)
    growth_order: float | None = None
    growth_const: float | None = None
    _func_id: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown symbol kind {self.kind!r}")
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d < 1:
            raise DomainError(f"d must be an integer >= 1, got {self.d}")

    @classmethod
    def sobolev(cls, d: int, s: int) -> "SymbolFunction":
        """``1 + sum_{0 < |alpha| <= s} prod_j w_j^(2 alpha_j)``.

        Any integer ``s >= 1`` gives a valid symbol; integrating it needs ``s > d/2``.
        """
        if int(s) != s or s < 1:
            raise DomainError(f"Sobolev symbol needs an integer order s >= 1, got {s}")
        return cls(d, "sobolev", s=int(s))

    @classmethod
    def tensor_sobolev(cls, d: int, s: int) -> "SymbolFunction":
        """``prod_j sum_{k <= s} w_j^(2k)``."""
        if int(s) != s or s < 1:
            raise DomainError(f"tensor symbol needs integer s >= 1, got {s}")
        return cls(d, "tensor_sobolev", s=int(s))

    @classmethod
    def isotropic(cls, d: int, s: float) -> "SymbolFunction":
        """``(2 pi)^(-d/2) (1 + |w|^2)^s``, the symbol of the Matern kernel."""
        if not s > d / 2:
            raise DomainError(f"isotropic symbol needs s > d/2, got d={d}, s={s}")
        return cls(d, "isotropic", s=float(s))

    @classmethod
    def weighted(cls, weights: MultiIndexWeights) -> "SymbolFunction":
        """``sum_alpha lambda_alpha prod_j w_j^(2 alpha_j)``."""
        return cls(weights.d, "weighted", s=weights.s, weights=weights)

    @classmethod
    def sobolev_infinity(cls, d: int) -> "SymbolFunction":
        """Limit ``s -> inf``: ``1 / v^2 = prod_j (1 - w_j^2)`` on ``|w|_inf < 1``, else 0."""
        return cls(d, "sobolev_infinity", s=math.inf)

    @classmethod
    def custom(cls, d: int, func: Callable, growth_order: float,
               growth_const: float = 1.0) -> "SymbolFunction":
        if not 2 * growth_order - d >= 1:
            raise DomainError(f"growth order p={growth_order} must satisfy 2p - d >= 1")
        if not growth_const > 0:
            raise DomainError("growth constant must be positive")
        return cls(d, "custom", func=func, growth_order=float(growth_order),
                   growth_const=float(growth_const), _func_id=id(func))

    # polynomial representation

    @property
    def is_polynomial(self) -> bool:
        return self.kind in ("sobolev", "weighted")

    def poly_terms(self) -> tuple[np.ndarray, np.ndarray]:
        """``(alphas, lambdas)`` of a polynomial symbol."""
        return _poly_terms(self)


@lru_cache(maxsize=32)
def _poly_terms(sym: SymbolFunction):
    if sym.kind == "sobolev":
        idx = multi_indices(sym.d, int(sym.s))
        lam = np.ones(len(idx))
    elif sym.kind == "weighted":
        idx = sym.weights.indices()
        lam = sym.weights.values()
    else:
        raise DomainError(f"{sym.kind} symbol is not stored as a polynomial")
    return np.array(idx, dtype=np.int64).reshape(len(idx), sym.d), lam


def eval_symbol(sym: SymbolFunction, u) -> np.ndarray | float:
    """``v(u)^2`` at one point ``u`` of shape ``(d,)`` or at rows of ``(n, d)``."""
    u = np.asarray(u, dtype=float)
    single = u.ndim <= 1
    if (u.size if single else u.shape[-1]) != sym.d:
        raise DomainError(f"frequency has dimension {u.shape[-1]}, symbol has d={sym.d}")
    u = u.reshape(-1, sym.d)
    w2 = (2 * np.pi * u) ** 2
    if sym.is_polynomial:
        alphas, lam = sym.poly_terms()
        out = np.zeros(len(u))
        for a, lm in zip(alphas, lam):
            out += lm * np.prod(w2 ** a, axis=1)
    elif sym.kind == "tensor_sobolev":
        s = int(sym.s)
        out = np.prod(sum(w2 ** k for k in range(s + 1)), axis=1)
    elif sym.kind == "isotropic":
        out = (2 * np.pi) ** (-sym.d / 2) * (1 + w2.sum(axis=1)) ** sym.s
    elif sym.kind == "sobolev_infinity":
        with np.errstate(divide="ignore"):
            out = np.where(np.all(w2 < 1, axis=1), 1 / np.prod(1 - np.minimum(w2, 1), axis=1), np.inf)
    else:
        out = np.asarray(sym.func(u), dtype=float).reshape(len(u))
    return float(out[0]) if single else out


# tail bounds

def _poly_growth_constants(sym: SymbolFunction) -> list[tuple[int, float]]:
    """Pairs ``(k, c_k)`` with ``v^2 >= c_k |w|^(2k)``.

    Only the degree-``k`` terms are kept; by the multinomial theorem
    ``sum_{|alpha|=k} lambda_alpha w^(2 alpha) >= c_k |w|^(2k)`` with
    ``c_k = min lambda_alpha alpha! / k!``, provided every ``alpha`` of
    degree ``k`` carries a weight.
    """
    alphas, lam = sym.poly_terms()
    deg = alphas.sum(axis=1)
    out = []
    for k in range(1, int(deg.max()) + 1):
        sel = deg == k
        if sel.sum() != math.comb(k + sym.d - 1, sym.d - 1):
            continue
        fact = np.array([math.prod(math.factorial(int(a)) for a in row) for row in alphas[sel]], dtype=float)
        out.append((k, float(np.min(lam[sel] * fact)) / math.factorial(k)))
    return out


def _power_tail(d: int, c: float, p: float, U: float) -> float:
    """Bound on ``int_{|u| > U} du / (c |2 pi u|^(2p))``."""
    if 2 * p <= d:
        return math.inf
    if math.isinf(U):
        return 0.0
    return _sphere_area(d) / (c * (2 * math.pi) ** (2 * p)) * U ** (d - 2 * p) / (2 * p - d)


def tail_bound(sym: SymbolFunction, U: float) -> float:
    """Upper bound on ``int |1/v(u)^2| du`` outside the cube ``[-U, U]^d``.

    Decreasing in ``U`` and zero at ``U = inf``. ``inf`` signals that the
    symbol grows too slowly for any bound.
    """
    if not U > 0:
        raise DomainError(f"truncation radius must be positive, got {U}")
    d = sym.d
    if sym.kind == "sobolev_infinity":
        return 0.0 if U >= 1 / (2 * math.pi) else math.inf
    if sym.kind == "tensor_sobolev":
        s = int(sym.s)
        if 2 * s <= 1:
            return math.inf
        if math.isinf(U):
            return 0.0
        t1 = 2 * (2 * math.pi) ** (-2 * s) * U ** (1 - 2 * s) / (2 * s - 1)
        m1 = (math.pi / s) / math.sin(math.pi / (2 * s)) / (2 * math.pi)
        return d * t1 * m1 ** (d - 1)
    if sym.kind == "isotropic":
        return _power_tail(d, (2 * math.pi) ** (-d / 2), sym.s, U)
    if sym.kind == "custom":
        return _power_tail(d, sym.growth_const, sym.growth_order, U)
    return min((_power_tail(d, c, k, U) for k, c in _poly_growth_constants(sym)), default=math.inf)


# quadrature

@dataclass(frozen=True)
class QuadratureConfig:
    """Settings of the oracle.

    Parameters
    ----------
    gauss_order : int
        Nodes per panel, at least 8. The error estimate compares against the
        rule with ``gauss_order - 4`` nodes.
    panels_per_unit : int
        The first panel is ``[0, 1/panels_per_unit]``; later panels double.
    target_abs_tol : float
        Half of it is the budget for the truncated tail.
    truncation_radius : float, optional
        Fixed ``U`` instead of the doubling search.
    subdivisions : int
        Split every panel into this many equal pieces.
    fold : bool
        Integrate over ``[0, U]^d`` and multiply by ``2^d``; otherwise the
        full cube is integrated.
    """

    gauss_order: int = 16
    panels_per_unit: int = 16
    target_abs_tol: float = 1e-9
    truncation_radius: float | None = None
    subdivisions: int = 1
    fold: bool = True

    def __post_init__(self):
        if self.gauss_order < 8:
            raise DomainError(f"gauss_order must be >= 8, got {self.gauss_order}")
        if self.panels_per_unit < 1 or self.subdivisions < 1:
            raise DomainError("panels_per_unit and subdivisions must be >= 1")
        if not self.target_abs_tol > 0:
            raise DomainError("target_abs_tol must be positive")
        if self.truncation_radius is not None and not self.truncation_radius > 0:
            raise DomainError("truncation_radius must be positive")


DEFAULT_CONFIG = QuadratureConfig()


def truncation_edges(sym: SymbolFunction, cfg: QuadratureConfig) -> np.ndarray:
    """Panel edges on ``[0, U]`` for one axis."""
    if sym.kind == "sobolev_infinity":
        return np.linspace(0.0, 1 / (2 * math.pi), cfg.subdivisions + 1)
    h0 = 1.0 / cfg.panels_per_unit
    edges = [0.0, h0]
    if cfg.truncation_radius is not None:
        while edges[-1] < cfg.truncation_radius:
            edges.append(2 * edges[-1])
    else:
        # doubling search for U >= 1 with tail <= tol / 2
        while edges[-1] < 1 or tail_bound(sym, edges[-1]) > cfg.target_abs_tol / 2:
            if edges[-1] > MAX_RADIUS:
                raise NumericalError(
                    f"tail bound of the {sym.kind} symbol cannot reach "
                    f"{cfg.target_abs_tol / 2:g} below U={MAX_RADIUS:g}")
            edges.append(2 * edges[-1])
    edges = np.array(edges)
    if cfg.subdivisions > 1:
        m = cfg.subdivisions
        edges = np.concatenate([np.linspace(a, b, m + 1)[:-1] for a, b in zip(edges[:-1], edges[1:])]
                               + [edges[-1:]])
    return edges


@lru_cache(maxsize=16)
def _legendre(n: int):
    x, w = leggauss(n)
    m = np.arange(n)
    # coefficient map: c_m = sum_k proj[k, m] f(x_k)
    proj = (2 * m + 1) / 2 * w[:, None] * legvander(x, n - 1)
    return x, w, proj


def axis_nodes(edges: np.ndarray, n: int) -> np.ndarray:
    x, _, _ = _legendre(n)
    c = (edges[:-1] + edges[1:]) / 2
    h = (edges[1:] - edges[:-1]) / 2
    return (c[:, None] + h[:, None] * x[None, :]).ravel()


def filon_weights(edges: np.ndarray, n: int, freqs) -> np.ndarray:
    """Weights ``W[i, k]`` with ``sum_k W[i, k] f(u_k) ~ int_0^U f(u) cos(a_i u) du``.

    Uses ``int_{-1}^{1} P_m(x) exp(i w x) dx = 2 i^m j_m(w)``.
    """
    a = np.atleast_1d(np.asarray(freqs, dtype=float))
    _, _, proj = _legendre(n)
    m = np.arange(n)
    out = np.empty((len(a), len(edges) - 1, n))
    for p, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        c, h = (lo + hi) / 2, (hi - lo) / 2
        mom = 2 * spherical_jn(m[None, :], a[:, None] * h) * np.cos(a[:, None] * c + m[None, :] * np.pi / 2)
        out[:, p, :] = h * mom @ proj.T
    return out.reshape(len(a), -1)


def _unfold(nodes: np.ndarray, W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.concatenate([-nodes[::-1], nodes]), np.concatenate([W[:, ::-1], W], axis=1)


def _inv_symbol_slab(sym: SymbolFunction, w2: list[np.ndarray]) -> np.ndarray:
    """``1 / v^2`` on the tensor grid of squared frequencies, padded to 3 axes."""
    w2 = list(w2) + [np.zeros(1)] * (MAX_DIM - len(w2))
    if sym.is_polynomial:
        alphas, lam = sym.poly_terms()
        al = np.zeros((len(lam), MAX_DIM), dtype=np.int64)
        al[:, :sym.d] = alphas
        return core.poly_symbol_slab(w2[0], w2[1], w2[2], al, lam)
    if sym.kind == "isotropic":
        return core.iso_symbol_slab(w2[0], w2[1], w2[2], (2 * math.pi) ** (-sym.d / 2), sym.s)
    if sym.kind in ("tensor_sobolev", "sobolev_infinity"):
        if sym.kind == "tensor_sobolev":
            f = [1 / sum(v ** k for k in range(int(sym.s) + 1)) for v in w2]
        else:
            f = [np.clip(1 - v, 0.0, None) for v in w2]
        f = [g if i < sym.d else np.ones(1) for i, g in enumerate(f)]
        return f[0][:, None, None] * f[1][None, :, None] * f[2][None, None, :]
    # custom symbol: evaluate on the explicit grid
    u = [np.sqrt(v) / (2 * np.pi) for v in w2[:sym.d]]
    grid = np.stack(np.meshgrid(*u, indexing="ij"), axis=-1).reshape(-1, sym.d)
    v2 = np.asarray(sym.func(grid), dtype=float).reshape(grid.shape[0])
    if not np.all(np.isfinite(v2)) or np.any(v2 <= 0):
        raise NumericalError("custom symbol returned a non-positive or non-finite value")
    return (1 / v2).reshape([len(v) for v in w2])


@lru_cache(maxsize=8)
def _cached_grid(sym: SymbolFunction, nodes_key: tuple) -> np.ndarray:
    nodes = np.array(nodes_key)
    return _inv_symbol_slab(sym, [(2 * np.pi * nodes) ** 2] * sym.d)


def _contract(sym: SymbolFunction, nodes: np.ndarray, Ws: list[np.ndarray], inv: np.ndarray) -> np.ndarray:
    """``sum_k prod_j Ws[j][inv[o, j], k_j] / v^2(u_k)`` for every offset ``o``.

    ``Ws[j]`` holds one row per distinct frequency on axis ``j``.
    """
    d = sym.d
    N = len(nodes)
    w2 = (2 * np.pi * nodes) ** 2
    if d <= 2:
        F = _cached_grid(sym, tuple(nodes.tolist()))
        if d == 1:
            return (Ws[0] @ F[:, 0, 0])[inv[:, 0]]
        G = F[:, :, 0] @ Ws[1].T
        return np.einsum("oi,io->o", Ws[0][inv[:, 0]], G[:, inv[:, 1]])
    n_off = inv.shape[0]
    out = np.zeros(n_off)
    rows = max(1, _SLAB_ELEMENTS // (N * max(N, n_off)))
    W0, W1 = Ws[0][inv[:, 0]], Ws[1][inv[:, 1]]
    for i in range(0, N, rows):
        F = _inv_symbol_slab(sym, [w2[i:i + rows], w2, w2])
        T = F @ Ws[2].T                               # (c, N, distinct on axis 2)
        H = np.einsum("cjo,oj->co", T[:, :, inv[:, 2]], W1)
        out += np.einsum("oc,co->o", W0[:, i:i + rows], H)
    return out


def _integrate(sym: SymbolFunction, deltas: np.ndarray, edges: np.ndarray, n: int,
               fold: bool) -> np.ndarray:
    nodes = axis_nodes(edges, n)
    Ws, inv = [], np.empty(deltas.shape, dtype=np.intp)
    for j in range(sym.d):
        freqs, inv[:, j] = np.unique(np.abs(deltas[:, j]) * 2 * np.pi, return_inverse=True)
        Ws.append(filon_weights(edges, n, freqs))
    if not fold:
        unfolded = [_unfold(nodes, W) for W in Ws]
        return _contract(sym, unfolded[0][0], [W for _, W in unfolded], inv)
    return 2.0 ** sym.d * _contract(sym, nodes, Ws, inv)


def eval_fourier_batch(sym: SymbolFunction, deltas, cfg: QuadratureConfig | None = None
                       ) -> tuple[np.ndarray, np.ndarray]:
    """Kernel values at the offsets ``x - t`` given as rows of ``deltas``.

    Returns
    -------
    values, err_est : ndarray
        ``err_est`` adds the tail bound to the gap between the rule and its
        embedded lower-order companion.
    """
    cfg = cfg or DEFAULT_CONFIG
    if sym.d > MAX_DIM:
        raise DomainError(f"the quadrature oracle supports d <= {MAX_DIM}, got d={sym.d}")
    deltas = np.asarray(deltas, dtype=float)
    deltas = deltas.reshape(-1, sym.d) if deltas.ndim <= 1 else deltas
    if deltas.shape[1] != sym.d:
        raise DomainError(f"offsets have dimension {deltas.shape[1]}, symbol has d={sym.d}")
    if sym.kind == "sobolev" and not 2 * sym.s > sym.d:
        raise DomainError(f"1/v^2 is not integrable for the Sobolev symbol with d={sym.d}, s={sym.s}")
    edges = truncation_edges(sym, cfg)
    tail = tail_bound(sym, float(edges[-1]))
    if not math.isfinite(tail):
        raise NumericalError(f"no finite tail bound for the {sym.kind} symbol")
    hi = _integrate(sym, deltas, edges, cfg.gauss_order, cfg.fold)
    lo = _integrate(sym, deltas, edges, cfg.gauss_order - 4, cfg.fold)
    return hi, np.abs(hi - lo) + tail


def eval_fourier_kernel(sym: SymbolFunction, x, t, cfg: QuadratureConfig | None = None
                        ) -> tuple[float, float]:
    """``(K(x, t), err_est)`` by quadrature of the Fourier integral."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if x.shape != (sym.d,) or t.shape != (sym.d,):
        raise DomainError(f"expected points of dimension {sym.d}, got {x.shape} and {t.shape}")
    v, e = eval_fourier_batch(sym, (x - t)[None, :], cfg)
    return float(v[0]), float(e[0])
