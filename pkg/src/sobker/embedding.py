"""Embedding constants into the sup-norm space.

For a translation-invariant kernel the norm of the embedding of ``H(K)`` into
bounded functions is ``K(0, 0)^(1/2)``. This module computes it and the
explicit bounds known for the Sobolev and Matern families.
"""
from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DomainError
from .kernels_closed import Family, KernelSpec, diag_value

# numerical constant of the cap (6/11)^d
CAP_CONSTANT = 10.03
CHAIN_TOL = 1e-15


class SobolevBounds(NamedTuple):
    lower: float
    mid: float
    upper: float
    cap: float

    def chain_holds(self, tol: float = CHAIN_TOL) -> bool:
        """``lower <= mid <= upper <= cap``, each up to ``tol``."""
        return (self.lower <= self.mid + tol and self.mid <= self.upper + tol
                and self.upper <= self.cap + tol)


def embedding_norm(spec: KernelSpec) -> float:
    """``K(0, 0)^(1/2)``. Kernels without a closed form use the oracle (d <= 3)."""
    return math.sqrt(diag_value(spec))


def embedding_norm_with_error(spec: KernelSpec) -> tuple[float, float]:
    """Norm together with an error bound, nonzero only for oracle families."""
    if spec.has_closed_form:
        return embedding_norm(spec), 0.0
    import numpy as np

    from .fourier_oracle import eval_fourier_kernel

    zero = np.zeros(spec.d)
    k00, err = eval_fourier_kernel(spec.symbol_function(), zero, zero)
    norm = math.sqrt(k00)
    # |sqrt(a) - sqrt(b)| <= |a - b| / sqrt(min(a, b))
    return norm, err / math.sqrt(max(k00 - err, k00 / 4))


def embedding_bounds_sobolev(d: int, s: int | None = None) -> SobolevBounds:
    """Explicit bounds on the Sobolev embedding norm for ``s > d/2``.

    ``lower = (5/11)^d``, ``mid = (2/(3 pi))^(d/2)`` (the ``s = inf`` value),
    ``upper = (d+1) / (2^((d+1)/2) pi^(d/4))`` and ``cap = 10.03 (6/11)^d``.
    The bounds do not depend on ``s``; it is only validated.
    """
    if int(d) != d or d < 1:
        raise DomainError(f"d must be an integer >= 1, got {d}")
    if s is not None and not 2 * s > d:
        raise DomainError(f"need s > d/2, got d={d}, s={s}")
    return SobolevBounds(
        lower=(5 / 11) ** d,
        mid=(2 / (3 * math.pi)) ** (d / 2),
        upper=(d + 1) / (2 ** ((d + 1) / 2) * math.pi ** (d / 4)),
        cap=CAP_CONSTANT * (6 / 11) ** d,
    )


def default_beta(d: int, s: float) -> float:
    """Largest admissible ``beta = 2s - d``."""
    return 2 * s - d


def embedding_bound_radial(d: int, s: float, beta: float | None = None) -> float:
    """``sqrt(2 (1 + 1/beta) / (2^(d/2) Gamma(d/2)))`` bounding the Matern
    embedding norm, valid for ``0 < beta <= 2s - d``."""
    if int(d) != d or d < 1:
        raise DomainError(f"d must be an integer >= 1, got {d}")
    if not s > d / 2:
        raise DomainError(f"need s > d/2, got d={d}, s={s}")
    if beta is None:
        beta = default_beta(d, s)
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if beta > 2 * s - d + 1e-12:
        raise DomainError(f"beta={beta} exceeds 2s - d = {2 * s - d}")
    log_b = math.log(2 * (1 + 1 / beta)) - (d / 2) * math.log(2) - math.lgamma(d / 2)
    return math.exp(log_b / 2)


def sobolev_order_for(d: int) -> int:
    """Smallest integer ``s > d/2``."""
    return d // 2 + 1


def is_sobolev(spec: KernelSpec) -> bool:
    return spec.family in (Family.SOBOLEV, Family.SOBOLEV_1D)
