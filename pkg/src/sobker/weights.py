"""Multi-indices and weight schemes over them.

A multi-index ``alpha`` is a tuple of ``d`` non-negative integers; ``|alpha|``
is its sum and ``alpha!`` the product of factorials. Weighted Sobolev norms
put a positive weight on each derivative ``D^alpha`` with ``|alpha| <= s``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError

MultiIndex = tuple[int, ...]


@lru_cache(maxsize=64)
def multi_indices(d: int, s: int) -> tuple[MultiIndex, ...]:
    """All ``alpha`` in ``N_0^d`` with ``|alpha| <= s``, in lexicographic order.

    The count is ``binom(d + s, d)``.
    """
    if d < 1 or s < 0:
        raise DomainError(f"need d >= 1 and s >= 0, got d={d}, s={s}")

    def rec(dim: int, budget: int) -> list[MultiIndex]:
        if dim == 1:
            return [(k,) for k in range(budget + 1)]
        out = []
        for k in range(budget + 1):
            out.extend((k,) + rest for rest in rec(dim - 1, budget - k))
        return out

    return tuple(rec(d, s))


def factorial_multi(alpha: Iterable[int]) -> int:
    return math.prod(math.factorial(a) for a in alpha)


@dataclass(frozen=True)
class MultiIndexWeights:
    """Weights ``lambda_alpha`` over ``|alpha| <= s``.

    Use the constructors :meth:`unit`, :meth:`isotropic_hs`,
    :meth:`gaussian_infinity` and :meth:`explicit` rather than building the
    dataclass directly.

    Parameters
    ----------
    d : int
        Dimension.
    s : float
        Maximal total order. ``math.inf`` for the Gaussian preset, which is
        evaluated up to ``truncation``.
    scheme : str
        One of ``"unit"``, ``"isotropic_hs"``, ``"gaussian_infinity"``,
        ``"explicit"``.
    truncation : int, optional
        Truncation order for the infinite-order preset.
    table : tuple, optional
        ``((alpha, lambda), ...)`` for the explicit scheme.
    """

    d: int
    s: float
    scheme: str
    truncation: int | None = None
    table: tuple[tuple[MultiIndex, float], ...] | None = None

    SCHEMES = ("unit", "isotropic_hs", "gaussian_infinity", "explicit")

    def __post_init__(self):
        if self.scheme not in self.SCHEMES:
            raise DomainError(f"unknown weight scheme {self.scheme!r}")
        if self.d < 1:
            raise DomainError(f"d must be >= 1, got {self.d}")
        if self.scheme == "gaussian_infinity":
            if self.truncation is None or self.truncation < 1:
                raise DomainError("gaussian_infinity needs a truncation order >= 1")
        elif self.s != int(self.s) or self.s < 1:
            raise DomainError(f"s must be a positive integer, got {self.s}")
        lam = self.values()
        if not np.all(np.isfinite(lam)) or not np.all(lam > 0):
            raise DomainError("all weights must be strictly positive and finite")

    @classmethod
    def unit(cls, d: int, s: int) -> "MultiIndexWeights":
        """``lambda = 1``: the standard Sobolev norm."""
        return cls(d, s, "unit")

    @classmethod
    def isotropic_hs(cls, d: int, s: int) -> "MultiIndexWeights":
        """Weights giving the isotropic space ``H^s`` with Matern kernel."""
        return cls(d, s, "isotropic_hs")

    @classmethod
    def gaussian_infinity(cls, d: int, truncation: int = 40) -> "MultiIndexWeights":
        """``lambda = 1 / (2^|alpha| alpha!)``, whose kernel is the Gaussian."""
        return cls(d, math.inf, "gaussian_infinity", truncation=truncation)

    @classmethod
    def explicit(cls, d: int, weights: Mapping[MultiIndex, float]) -> "MultiIndexWeights":
        """Arbitrary weights. Every ``alpha`` with ``|alpha| <= s`` must be
        present, where ``s`` is the largest order in the mapping."""
        items = {tuple(int(a) for a in k): float(v) for k, v in weights.items()}
        if any(len(k) != d for k in items):
            raise DomainError(f"multi-indices must have length d={d}")
        s = max(sum(k) for k in items)
        missing = [a for a in multi_indices(d, s) if a not in items]
        if missing:
            raise DomainError(f"explicit weights missing multi-indices, e.g. {missing[0]}")
        table = tuple((a, items[a]) for a in multi_indices(d, s))
        return cls(d, s, "explicit", table=table)

    @property
    def order(self) -> int:
        """Largest total order actually carried."""
        return self.truncation if self.scheme == "gaussian_infinity" else int(self.s)

    def indices(self) -> tuple[MultiIndex, ...]:
        return multi_indices(self.d, self.order)

    def weight(self, alpha: MultiIndex) -> float:
        k = sum(alpha)
        if self.scheme == "unit":
            return 1.0
        if self.scheme == "isotropic_hs":
            return (math.factorial(k) * math.comb(int(self.s), k)
                    / ((2 * math.pi) ** (self.d / 2) * factorial_multi(alpha)))
        if self.scheme == "gaussian_infinity":
            return 1.0 / (2.0 ** k * factorial_multi(alpha))
        return dict(self.table)[tuple(alpha)]

    def values(self) -> np.ndarray:
        if self.scheme == "explicit":
            return np.array([lam for _, lam in self.table], dtype=float)
        return np.array([self.weight(a) for a in self.indices()], dtype=float)
