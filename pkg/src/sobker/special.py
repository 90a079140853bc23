"""Modified Bessel function of the second kind for the Matern kernel.

Half-integer orders use the terminating closed form. Other orders go through
``scipy.special.kv``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp


def is_half_integer(nu: float) -> bool:
    return abs(2 * nu - round(2 * nu)) < 1e-12 and round(2 * nu) % 2 == 1


def half_integer_coefficients(nu: float) -> np.ndarray:
    """Coefficients ``c_k = (n+k)! / (k! (n-k)! 2^k)`` for ``nu = n + 1/2``.

    With them ``K_nu(r) = sqrt(pi/(2r)) e^{-r} sum_k c_k r^{-k}``.
    """
    n = int(round(abs(nu) - 0.5))
    return np.array([math.factorial(n + k) / (math.factorial(k) * math.factorial(n - k) * 2.0 ** k)
                     for k in range(n + 1)])


def scaled_bessel_k(nu: float, r) -> np.ndarray:
    """``r^nu K_nu(r)`` for ``nu > 0``, continuous at ``r = 0``.

    The limit at zero is ``2^(nu-1) Gamma(nu)``.
    """
    r = np.abs(np.asarray(r, dtype=float))
    if nu <= 0:
        raise ValueError("order must be positive")
    limit = 2.0 ** (nu - 1) * math.gamma(nu)
    if is_half_integer(nu):
        c = half_integer_coefficients(nu)
        n = len(c) - 1
        # sqrt(pi/2) e^{-r} sum_k c_k r^{n-k}, Horner in r
        poly = np.zeros_like(r)
        for ck in c:
            poly = poly * r + ck
        return math.sqrt(math.pi / 2) * np.exp(-r) * poly
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        out = r ** nu * _sp.kv(nu, r)
    return np.where((r == 0) | ~np.isfinite(out), limit, out)


def bessel_k(nu: float, r) -> np.ndarray:
    """``K_nu(r)`` for ``r > 0``; symmetric in ``nu``."""
    nu = abs(nu)
    r = np.asarray(r, dtype=float)
    if is_half_integer(nu):
        c = half_integer_coefficients(nu)
        series = sum(ck * r ** (-k) for k, ck in enumerate(c))
        return np.sqrt(np.pi / (2 * r)) * np.exp(-r) * series
    return _sp.kv(nu, r)
