import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sobker import kernels_closed as kc
from sobker.errors import ConsistencyError, DomainError
from sobker.fourier_oracle import eval_fourier_batch
from sobker.kernels_closed import (KernelSpec, diag_value, eval_k1s, eval_k1s_residue, eval_kernel,
                                   eval_kinf_1d, k1s_diagonal, kernel_matrix)

from displays import SQ3, explicit_k


def matern_mp(d, s, r):
    nu = s - d / 2
    if r == 0:
        return float(mp.gamma(nu) / (2 ** (d / 2) * mp.gamma(s)))
    return float(mp.mpf(2) ** (1 - s) / mp.gamma(s) * mp.mpf(r) ** nu * mp.besselk(nu, r))


ALL_CLOSED = [
    KernelSpec.sobolev_univariate(1), KernelSpec.sobolev_univariate(4),
    KernelSpec.tensor_sobolev(2, 1), KernelSpec.tensor_sobolev(3, 2),
    KernelSpec.sobolev_infinity(1), KernelSpec.sobolev_infinity(3),
    KernelSpec.gaussian(1), KernelSpec.gaussian(3),
    KernelSpec.matern(1, 1), KernelSpec.matern(2, 2), KernelSpec.matern(3, 2), KernelSpec.matern(2, 1.7),
]


# univariate Sobolev kernel

@pytest.mark.parametrize("s,x,t,want", [
    (1, 0, 0, 0.5),
    (1, 1, 0, 0.5 * math.exp(-1)),
    (2, 0, 0, SQ3 / 6),
    (3, 0, 0, 0.25),
])
def test_k1s_examples(s, x, t, want):
    assert eval_k1s(s, x, t) == pytest.approx(want, rel=1e-14, abs=1e-16)


def test_k1s_rejects_order_below_one():
    with pytest.raises(DomainError):
        eval_k1s(0, 0.0, 0.0)
    with pytest.raises(DomainError):
        eval_k1s_residue(0, 0.0, 0.0)


def test_residue_examples():
    assert eval_k1s_residue(1, 0, 0) == pytest.approx(0.5, abs=1e-15)
    assert abs(eval_k1s_residue(4, 2, 0) - eval_k1s(4, 2, 0)) <= 1e-12
    assert eval_k1s_residue(2, 0.7, 0.7) == pytest.approx(SQ3 / 6, abs=1e-15)


def test_residue_matches_trigonometric_form_on_grid():
    r = np.round(np.arange(0, 101) * 0.1, 12)
    for s in range(1, 9):
        assert np.max(np.abs(eval_k1s_residue(s, r, 0.0) - eval_k1s(s, r, 0.0))) <= 1e-12


def test_residue_imaginary_part_is_policed(monkeypatch):
    monkeypatch.setattr(kc, "IMAG_TOL", -1.0)
    with pytest.raises(ConsistencyError):
        eval_k1s_residue(3, 1.0, 0.0)


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_explicit_displays(s):
    r = np.linspace(0, 20, 2001)
    got = eval_k1s(s, r, 0.0)
    want = np.array([explicit_k(s, v) for v in r])
    assert np.max(np.abs(got - want)) <= 1e-12


def test_sign_pattern():
    r = np.linspace(0, 20, 20001)
    assert np.all(eval_k1s(1, r, 0.0) > 0)
    for s in (2, 3, 4):
        assert np.min(eval_k1s(s, r[1:], 0.0)) < 0


@pytest.mark.parametrize("s", range(1, 7))
def test_exponential_decay_bound(s):
    r = np.linspace(0, 40, 4001)
    bound = s / (s + 1) * np.exp(-r * math.sin(math.pi / (s + 1)))
    assert np.all(np.abs(eval_k1s(s, r, 0.0)) <= bound + 1e-300)


def test_k1s_is_symmetric_and_stationary():
    assert eval_k1s(3, 0.3, 1.9) == eval_k1s(3, 1.9, 0.3)
    assert eval_k1s(3, 0.3, 1.9) == eval_k1s(3, -1.9, -0.3)


# diagonal

def test_diagonal_formula_and_monotonicity():
    vals = []
    for s in range(1, 51):
        assert abs(eval_k1s(s, 0, 0) - k1s_diagonal(s)) <= 1e-12
        vals.append(k1s_diagonal(s))
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[0] == 0.5
    assert abs(k1s_diagonal(10 ** 4) - 2 / (3 * math.pi)) <= 1e-7
    assert abs(eval_k1s(10 ** 4, 0, 0) - 2 / (3 * math.pi)) <= 1e-7


@pytest.mark.parametrize("spec,want", [
    (KernelSpec.sobolev_univariate(1), 0.5),
    (KernelSpec.matern(1, 1), math.sqrt(math.pi / 2)),
    (KernelSpec.sobolev_infinity(2), (2 / (3 * math.pi)) ** 2),
    (KernelSpec.tensor_sobolev(3, 2), (SQ3 / 6) ** 3),
    (KernelSpec.gaussian(2), 1 / (2 * math.pi)),
    (KernelSpec.matern(3, 2), math.gamma(0.5) / (2 ** 1.5)),
])
def test_diag_value_examples(spec, want):
    assert diag_value(spec) == pytest.approx(want, rel=1e-14)


def test_diag_value_matches_kernel_at_zero():
    for spec in ALL_CLOSED:
        z = np.zeros(spec.d)
        assert eval_kernel(spec, z, z) == pytest.approx(diag_value(spec), rel=1e-13)


def test_diag_value_of_oracle_family():
    spec = KernelSpec.sobolev_fourier(1, 2)
    assert abs(diag_value(spec) - SQ3 / 6) < 1e-9


# infinite order

def test_kinf_examples():
    assert eval_kinf_1d(0.0) == pytest.approx(2 / (3 * math.pi), rel=1e-15)
    assert eval_kinf_1d(math.pi) == pytest.approx(2 / math.pi ** 3, rel=1e-14)
    assert eval_kinf_1d(1e-6) == pytest.approx(2 / (3 * math.pi) * (1 - 1e-12 / 10), rel=1e-15)


def test_kinf_matches_high_precision():
    mp.mp.dps = 40
    for x in [1e-8, 1e-3, 0.1, 0.4999, 0.5, 0.7, 2.0, 10.0, 123.4]:
        xm = mp.mpf(x)
        want = float(2 * (mp.sin(xm) - xm * mp.cos(xm)) / (mp.pi * xm ** 3))
        assert eval_kinf_1d(x) == pytest.approx(want, rel=1e-13, abs=1e-17)


def test_kinf_even_and_quadratic_decay():
    x = np.linspace(1, 200, 5000)
    assert np.array_equal(eval_kinf_1d(x), eval_kinf_1d(-x))
    assert np.all(np.abs(eval_kinf_1d(x)) <= 4 / (math.pi * x ** 2))


# multivariate kernels

def test_eval_kernel_examples():
    assert eval_kernel(KernelSpec.gaussian(1), [0], [0]) == pytest.approx((2 * math.pi) ** -0.5, rel=1e-15)
    m = KernelSpec.matern(1, 1)
    for r in (0.0, 0.3, 2.5, 9.0):
        assert eval_kernel(m, [r], [0]) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-r), rel=1e-14)
    assert eval_kernel(KernelSpec.sobolev_infinity(3), [1, 2, 3], [1, 2, 3]) == pytest.approx(
        (2 / (3 * math.pi)) ** 3, rel=1e-15)
    assert eval_kernel(KernelSpec.tensor_sobolev(2, 1), [1, 0], [0, 0]) == pytest.approx(
        0.25 * math.exp(-1), rel=1e-15)


@pytest.mark.parametrize("d,s", [(1, 1), (1, 2.5), (2, 2), (2, 1.7), (3, 2), (3, 3.25), (4, 3)])
def test_matern_matches_high_precision(d, s):
    spec = KernelSpec.matern(d, s)
    for r in (0.0, 1e-6, 0.01, 0.5, 1.0, 3.0, 20.0):
        x = np.zeros(d)
        x[0] = r
        assert eval_kernel(spec, x, np.zeros(d)) == pytest.approx(matern_mp(d, s, r), rel=1e-12, abs=1e-300)


def test_matern_integer_order_matches_oracle():
    # d = 2, s = 2: Bessel order 1, not a half-integer
    spec = KernelSpec.matern(2, 2)
    D = np.column_stack([np.linspace(0, 5, 12), np.linspace(0, 2, 12)])
    vals, err = eval_fourier_batch(spec.symbol_function(), D)
    closed = kernel_matrix(spec, D, np.zeros((1, 2)))[:, 0]
    assert np.all(np.abs(vals - closed) <= np.maximum(err, 1e-9))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, len(ALL_CLOSED) - 1), st.floats(-5, 5), st.floats(-5, 5), st.floats(-50, 50))
def test_symmetry_stationarity_dominance(k, a, b, shift):
    spec = ALL_CLOSED[k]
    rng = np.random.default_rng(abs(hash((a, b))) % 2 ** 32)
    x = a + rng.normal(size=spec.d)
    t = b + rng.normal(size=spec.d)
    v = eval_kernel(spec, x, t)
    assert v == eval_kernel(spec, t, x)
    assert abs(eval_kernel(spec, x + shift, t + shift) - v) <= 1e-13
    assert abs(v) <= diag_value(spec) + 1e-12


def test_kernel_matrix_symmetric(rng):
    for spec in ALL_CLOSED:
        X = rng.normal(size=(15, spec.d))
        G = kernel_matrix(spec, X)
        assert np.array_equal(G, G.T)


def test_kernel_matrix_for_oracle_family():
    spec = KernelSpec.sobolev_fourier(1, 1)
    X = np.array([[0.0], [0.5], [2.0]])
    G = kernel_matrix(spec, X)
    np.testing.assert_allclose(G, 0.5 * np.exp(-np.abs(X - X.T)), atol=1e-9)


# validation

def test_dimension_mismatch():
    with pytest.raises(DomainError):
        eval_kernel(KernelSpec.gaussian(2), [0.0], [0.0])
    with pytest.raises(DomainError):
        kernel_matrix(KernelSpec.gaussian(2), np.zeros((3, 3)))


@pytest.mark.parametrize("make", [
    lambda: KernelSpec.sobolev_fourier(2, 1),
    lambda: KernelSpec.sobolev_fourier(3, 1),
    lambda: KernelSpec.sobolev_fourier(2, 1.5),
    lambda: KernelSpec.matern(2, 1.0),
    lambda: KernelSpec.matern(3, 1.4),
    lambda: KernelSpec.tensor_sobolev(2, 0),
    lambda: KernelSpec.sobolev_univariate(2.5),
    lambda: KernelSpec.gaussian(0),
])
def test_invalid_specs(make):
    with pytest.raises(DomainError):
        make()


def test_families_accept_any_dimension():
    for d in (1, 5, 12):
        KernelSpec.tensor_sobolev(d, 1)
        KernelSpec.sobolev_infinity(d)
        KernelSpec.gaussian(d)
    KernelSpec.matern(2, 1.01)
    KernelSpec.sobolev_fourier(3, 2)


def test_spec_is_hashable_value():
    assert KernelSpec.matern(2, 2) == KernelSpec.matern(2, 2.0)
    assert len({KernelSpec.gaussian(2), KernelSpec.gaussian(2)}) == 1
