import math

import numpy as np
import pytest

from sobker.embedding import (embedding_bound_radial, embedding_bounds_sobolev, embedding_norm,
                              embedding_norm_with_error, sobolev_order_for)
from sobker.errors import DomainError
from sobker.kernels_closed import KernelSpec


def test_norm_examples():
    assert embedding_norm(KernelSpec.sobolev_univariate(1)) == pytest.approx(math.sqrt(0.5), rel=1e-15)
    for d in (1, 4, 9):
        assert embedding_norm(KernelSpec.gaussian(d)) == pytest.approx((2 * math.pi) ** (-d / 4), rel=1e-14)
        assert embedding_norm(KernelSpec.sobolev_infinity(d)) == pytest.approx(
            (2 / (3 * math.pi)) ** (d / 2), rel=1e-14)


def test_gaussian_constant_digits():
    assert (2 * math.pi) ** (-1 / 4) == pytest.approx(0.6316, abs=5e-5)


def test_bounds_at_d1():
    b = embedding_bounds_sobolev(1, 1)
    assert b.lower == pytest.approx(5 / 11)
    assert b.mid == pytest.approx(math.sqrt(2 / (3 * math.pi)))
    assert b.upper == pytest.approx(math.pi ** -0.25)
    assert b.cap == pytest.approx(10.03 * 6 / 11)
    assert (round(b.lower, 4), round(b.mid, 4), round(b.upper, 4), round(b.cap, 4)) == (
        0.4545, 0.4607, 0.7511, 5.4709)
    assert embedding_norm(KernelSpec.sobolev_univariate(1)) <= b.upper


def test_upper_at_d20():
    assert embedding_bounds_sobolev(20).upper == pytest.approx(21 / (2 ** 10.5 * math.pi ** 5), rel=1e-14)


def test_chain_up_to_thirty():
    for d in range(1, 31):
        assert embedding_bounds_sobolev(d, sobolev_order_for(d)).chain_holds(), d


def test_bounds_reject_small_order():
    with pytest.raises(DomainError):
        embedding_bounds_sobolev(4, 2)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_oracle_norm_within_bounds(d):
    s = sobolev_order_for(d)
    norm, err = embedding_norm_with_error(KernelSpec.sobolev_fourier(d, s))
    b = embedding_bounds_sobolev(d, s)
    assert b.lower - err <= norm <= b.upper + err


@pytest.mark.parametrize("d", [1, 2])
def test_norm_decreases_in_order(d):
    s0 = sobolev_order_for(d)
    n0, e0 = embedding_norm_with_error(KernelSpec.sobolev_fourier(d, s0))
    n1, e1 = embedding_norm_with_error(KernelSpec.sobolev_fourier(d, s0 + 1))
    assert n1 <= n0 + e0 + e1


def test_radial_examples():
    assert embedding_bound_radial(2, 2, 2) == pytest.approx(math.sqrt(1.5), rel=1e-14)
    b11 = embedding_bound_radial(1, 1, 1)
    assert b11 == pytest.approx(math.sqrt(4 / (math.sqrt(2) * math.gamma(0.5))), rel=1e-14)
    assert b11 >= (math.pi / 2) ** 0.25
    assert embedding_bound_radial(10, 6, 2) < embedding_bound_radial(10, 6, 1)


@pytest.mark.parametrize("d,s", [(1, 1), (1, 2), (3, 2)])
def test_radial_bound_dominates_matern(d, s):
    exact = embedding_norm(KernelSpec.matern(d, s))
    assert exact <= embedding_bound_radial(d, s, 2 * s - d) + 1e-12


def test_radial_default_beta():
    assert embedding_bound_radial(4, 3) == embedding_bound_radial(4, 3, 2)


def test_radial_identity_constant_in_d():
    beta = 1.5
    ref = math.sqrt(2 * (1 + 1 / beta))
    for d in range(1, 120):
        b = embedding_bound_radial(d, d / 2 + beta, beta)
        val = b * 2 ** (d / 4) * math.exp(math.lgamma(d / 2) / 2)
        assert val == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("args", [(2, 2, 0.0), (2, 2, -1.0), (2, 2, 2.5), (2, 1, 1.0)])
def test_radial_invalid(args):
    with pytest.raises(DomainError):
        embedding_bound_radial(*args)


def test_radial_super_exponential_decay():
    vals = np.array([embedding_bound_radial(d, d / 2 + 1) for d in range(1, 60)])
    ratios = vals[1:] / vals[:-1]
    assert ratios[-1] < ratios[10] < 1
