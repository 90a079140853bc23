"""Closed-form reproducing kernels.

The univariate Sobolev kernel of order ``s`` is

    K_s(r) = -1/(s+1) sum_{j=1}^s exp(-r sin th_j) sin th_j cos(r cos th_j + 2 th_j),

with ``th_j = j pi / (s+1)`` and ``r = |x - t|``. Tensor products of it and of
the infinite-order kernel ``2 (sin x - x cos x) / (pi x^3)``, the Gaussian and
the Matern (Bessel) kernel complete the closed-form families. Kernels given
only as Fourier integrals are delegated to :mod:`sobker.fourier_oracle`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import _pycore
from ._backend import core
from .errors import ConsistencyError, DomainError, NumericalError
from .special import half_integer_coefficients, is_half_integer
from .weights import MultiIndexWeights

IMAG_TOL = 1e-12


class Family(str, enum.Enum):
    SOBOLEV_1D = "sobolev_univariate"
    SOBOLEV = "sobolev_fourier"
    SOBOLEV_INF = "sobolev_infinity"
    TENSOR = "tensor_sobolev"
    MATERN = "matern_radial"
    GAUSSIAN = "gaussian_radial"
    WEIGHTED = "weighted"
    GENERAL = "general_symbol"


CLOSED_FORM = frozenset({Family.SOBOLEV_1D, Family.SOBOLEV_INF, Family.TENSOR,
                         Family.MATERN, Family.GAUSSIAN})


def _positive_int(s, name="s"):
    if isinstance(s, bool) or not float(s).is_integer() or s < 1:
        raise DomainError(f"{name} must be an integer >= 1, got {s}")
    return int(s)


@dataclass(frozen=True)
class KernelSpec:
    """Tagged description of a translation-invariant kernel on ``R^d``.

    Build instances with the classmethod constructors, which validate the
    parameters of each family.
    """

    family: Family
    d: int
    s: float | None = None
    weights: MultiIndexWeights | None = None
    symbol: Any = None

    def __post_init__(self):
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d < 1:
            raise DomainError(f"d must be an integer >= 1, got {self.d}")

    @classmethod
    def sobolev_univariate(cls, s: int) -> "KernelSpec":
        return cls(Family.SOBOLEV_1D, 1, _positive_int(s))

    @classmethod
    def sobolev_fourier(cls, d: int, s: int) -> "KernelSpec":
        s = _positive_int(s)
        if 2 * s - d < 1:
            raise DomainError(f"Sobolev kernel needs s > d/2, got d={d}, s={s}")
        return cls(Family.SOBOLEV, d, s)

    @classmethod
    def sobolev_infinity(cls, d: int) -> "KernelSpec":
        return cls(Family.SOBOLEV_INF, d, math.inf)

    @classmethod
    def tensor_sobolev(cls, d: int, s: int) -> "KernelSpec":
        return cls(Family.TENSOR, d, _positive_int(s))

    @classmethod
    def matern(cls, d: int, s: float) -> "KernelSpec":
        s = float(s)
        if not math.isfinite(s) or s <= d / 2:
            raise DomainError(f"Matern kernel needs s > d/2, got d={d}, s={s}")
        return cls(Family.MATERN, d, s)

    @classmethod
    def gaussian(cls, d: int) -> "KernelSpec":
        return cls(Family.GAUSSIAN, d)

    @classmethod
    def weighted(cls, weights: MultiIndexWeights) -> "KernelSpec":
        if 2 * weights.order - weights.d < 1:
            raise DomainError(f"weighted kernel needs order > d/2, got d={weights.d}, "
                              f"order={weights.order}")
        return cls(Family.WEIGHTED, weights.d, weights.s, weights=weights)

    @classmethod
    def general(cls, symbol) -> "KernelSpec":
        """Kernel of an arbitrary :class:`~sobker.fourier_oracle.SymbolFunction`."""
        return cls(Family.GENERAL, symbol.d, symbol=symbol)

    @property
    def has_closed_form(self) -> bool:
        return self.family in CLOSED_FORM

    def symbol_function(self):
        """The Fourier symbol ``v^2`` whose reciprocal defines this kernel."""
        from . import fourier_oracle as fo

        f = self.family
        if f in (Family.SOBOLEV_1D, Family.SOBOLEV):
            return fo.SymbolFunction.sobolev(self.d, int(self.s))
        if f == Family.TENSOR:
            return fo.SymbolFunction.tensor_sobolev(self.d, int(self.s))
        if f == Family.SOBOLEV_INF:
            return fo.SymbolFunction.sobolev_infinity(self.d)
        if f == Family.MATERN:
            return fo.SymbolFunction.isotropic(self.d, self.s)
        if f == Family.GAUSSIAN:
            return fo.SymbolFunction.weighted(MultiIndexWeights.gaussian_infinity(self.d))
        if f == Family.WEIGHTED:
            return fo.SymbolFunction.weighted(self.weights)
        return self.symbol

    def describe(self) -> str:
        parts = [f"d={self.d}"]
        if self.s is not None and math.isfinite(self.s):
            parts.append(f"s={self.s:g}")
        if self.weights is not None:
            parts.append(f"weights={self.weights.scheme}")
        return f"{self.family.value}({', '.join(parts)})"


# univariate kernels

def k1s_coefficients(s: int) -> np.ndarray:
    """Rows ``(A_j, b_j, c_j, phi_j)`` with ``K_s(r) = sum A e^{-b r} cos(c r + phi)``."""
    s = _positive_int(s)
    th = np.arange(1, s + 1) * math.pi / (s + 1)
    return np.column_stack([-np.sin(th) / (s + 1), np.sin(th), np.cos(th), 2 * th])


def _scalar_or_array(v, *inputs):
    return float(v) if all(np.ndim(a) == 0 for a in inputs) else v


def eval_k1s(s: int, x, t):
    """Univariate Sobolev kernel ``K_{1,s}(x, t)``; broadcasts over arrays."""
    r = np.abs(np.asarray(x, dtype=float) - np.asarray(t, dtype=float))
    return _scalar_or_array(_pycore.k1s_profile(r, k1s_coefficients(s)), x, t)


def eval_k1s_residue(s: int, x, t):
    """The same kernel from its complex residue sum.

    Raises :class:`ConsistencyError` if the imaginary part exceeds 1e-12.
    """
    s = _positive_int(s)
    r = np.abs(np.asarray(x, dtype=float) - np.asarray(t, dtype=float))
    j = np.arange(1, s + 1)
    ang = j * math.pi / (s + 1)
    num = np.exp(np.multiply.outer(r, np.exp(1j * (ang + math.pi / 2))))
    fac = (np.exp(2j * ang) - 1) / np.exp(1j * j * math.pi * (2 * s + 1) / (s + 1))
    total = 1j / (2 * s + 2) * (num * fac).sum(axis=-1)
    imag = np.max(np.abs(np.imag(total))) if total.size else 0.0
    if imag > IMAG_TOL:
        raise ConsistencyError(f"residue form has imaginary part {imag:.3g} (s={s})")
    return _scalar_or_array(np.real(total), x, t)


def eval_kinf_1d(x):
    """``2 (sin x - x cos x) / (pi x^3)``, by power series for ``|x| < 0.5``."""
    return _scalar_or_array(_pycore.kinf_profile(x), x)


def k1s_diagonal(s: int) -> float:
    """``K_{1,s}(0, 0) = cos(pi/(2s+2)) / ((s+1) sin(3 pi/(2s+2)))``."""
    s = _positive_int(s)
    h = math.pi / (2 * s + 2)
    return math.cos(h) / ((s + 1) * math.sin(3 * h))


# dispatch to the compiled core

def _matern_params(d: int, s: float) -> tuple[int, np.ndarray]:
    nu = s - d / 2
    pref = 2.0 ** (1 - s) / math.gamma(s)
    if is_half_integer(nu):
        c = half_integer_coefficients(nu)
        return core.MATERN_HALF, np.concatenate([[pref, len(c) - 1], c])
    return core.MATERN, np.array([pref, nu, 2.0 ** (nu - 1) * math.gamma(nu)])


def core_args(spec: KernelSpec) -> tuple[int, np.ndarray, np.ndarray]:
    """``(code, coef, params)`` for the compiled kernel loops."""
    none = np.zeros((0, 4))
    f = spec.family
    if f in (Family.SOBOLEV_1D, Family.TENSOR):
        return core.K1S, k1s_coefficients(int(spec.s)), np.zeros(1)
    if f == Family.SOBOLEV_INF:
        return core.KINF, none, np.zeros(1)
    if f == Family.GAUSSIAN:
        return core.GAUSS, none, np.array([(2 * math.pi) ** (-spec.d / 2)])
    if f == Family.MATERN:
        code, params = _matern_params(spec.d, spec.s)
        return code, none, params
    raise DomainError(f"{f.value} has no closed form")


def _points(X, d: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim <= 1 and d == 1:
        X = X.reshape(-1, 1)
    elif X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[-1] != d:
        raise DomainError(f"points have dimension {X.shape[-1]}, kernel has d={d}")
    return X


def _check_matern(spec: KernelSpec, values: np.ndarray) -> np.ndarray:
    if spec.family == Family.MATERN and not np.all(np.isfinite(values)):
        nu = spec.s - spec.d / 2
        branch = "half-integer closed form" if is_half_integer(nu) else "scipy kv"
        raise NumericalError(f"Matern Bessel evaluation failed in the {branch} branch (order {nu})")
    return values


def kernel_matrix(spec: KernelSpec, X, Y=None) -> np.ndarray:
    """Matrix ``K(X[i], Y[k])``. Oracle families are evaluated by quadrature."""
    X = _points(X, spec.d)
    Y = X if Y is None else _points(Y, spec.d)
    if not spec.has_closed_form:
        from .fourier_oracle import eval_fourier_batch

        delta = X[:, None, :] - Y[None, :, :]
        vals, _ = eval_fourier_batch(spec.symbol_function(), delta.reshape(-1, spec.d))
        return vals.reshape(len(X), len(Y))
    code, coef, params = core_args(spec)
    return _check_matern(spec, core.kernel_matrix(code, coef, params, X, Y))


def kernel_colsum(spec: KernelSpec, X, Y) -> np.ndarray:
    """``sum_i K(X[i], Y[k])`` for every ``k``; closed-form families only."""
    X, Y = _points(X, spec.d), _points(Y, spec.d)
    code, coef, params = core_args(spec)
    return _check_matern(spec, core.kernel_colsum(code, coef, params, X, Y))


def kernel_pairs(spec: KernelSpec, X, Y) -> np.ndarray:
    """``K(X[i], Y[i])`` row by row."""
    X, Y = _points(X, spec.d), _points(Y, spec.d)
    if X.shape != Y.shape:
        raise DomainError("paired point arrays must have equal shapes")
    if not spec.has_closed_form:
        from .fourier_oracle import eval_fourier_batch

        return eval_fourier_batch(spec.symbol_function(), X - Y)[0]
    code, coef, params = core_args(spec)
    return _check_matern(spec, core.kernel_pairs(code, coef, params, X, Y))


def eval_kernel(spec: KernelSpec, x, t) -> float:
    """``K(x, t)`` for one pair of points."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if x.shape != (spec.d,) or t.shape != (spec.d,):
        raise DomainError(f"expected points of dimension {spec.d}, got {x.shape} and {t.shape}")
    if not spec.has_closed_form:
        from .fourier_oracle import eval_fourier_kernel

        return eval_fourier_kernel(spec.symbol_function(), x, t)[0]
    return float(kernel_pairs(spec, x[None], t[None])[0])


def diag_value(spec: KernelSpec) -> float:
    """``K(0, 0)``, in closed form where one exists."""
    f, d = spec.family, spec.d
    if f == Family.SOBOLEV_1D:
        return k1s_diagonal(int(spec.s))
    if f == Family.TENSOR:
        return k1s_diagonal(int(spec.s)) ** d
    if f == Family.SOBOLEV_INF:
        return (2 / (3 * math.pi)) ** d
    if f == Family.GAUSSIAN:
        return (2 * math.pi) ** (-d / 2)
    if f == Family.MATERN:
        return math.gamma(spec.s - d / 2) / (2 ** (d / 2) * math.gamma(spec.s))
    from .fourier_oracle import eval_fourier_kernel

    return eval_fourier_kernel(spec.symbol_function(), np.zeros(d), np.zeros(d))[0]
