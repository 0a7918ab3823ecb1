import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wdcdiff.errors import TruncationError
from wdcdiff.series import (PowerSeries, choose_order, fa_deriv_closed, fa_series,
                            gamma_ratios, ga_deriv_closed, ga_series, monomial_bloch_norm)
from wdcdiff.symbols import SpaceParams, StandardPower


def P(alpha, m):
    return SpaceParams(alpha, m, StandardPower(1.0))


def test_gamma_ratio_examples():
    assert gamma_ratios(P(1.5, 2), 0).values[0] == 1
    assert np.allclose(gamma_ratios(P(1, 0), 20).values, 1)
    assert np.allclose(gamma_ratios(P(1, 1), 20).values, np.arange(21) + 1)


@settings(max_examples=30, deadline=None)
@given(alpha=st.floats(0.6, 3), m=st.integers(0, 3))
def test_gamma_ratio_recurrence(alpha, m):
    g = gamma_ratios(P(alpha, m), 40).values
    base = 2 * alpha + m - 1
    k = np.arange(40)
    assert np.allclose(g[1:] / g[:-1], (k + base) / (k + 1))
    lg = [math.lgamma(j + base) - math.lgamma(base) - math.lgamma(j + 1) for j in (10, 40)]
    assert np.allclose(np.log(g[[10, 40]]), lg)


def test_fa_examples():
    s = fa_series(0, P(1, 2), 10)
    assert np.allclose(s.coefficients, np.eye(11)[2] / 2)
    s = fa_series(0.5, P(1, 0), 30)
    assert np.allclose(s.coefficients, 0.75 * 0.5 ** np.arange(31))
    N = choose_order(0.5, P(1, 1), 0.6, 1e-13, derivative=1)
    d = fa_series(0.5, P(1, 1), N).derivative(1)
    # (1 - |a|^2)^(1 - alpha - m) with alpha = m = 1
    assert d(0.5) == pytest.approx(1 / 0.75, rel=1e-10)


def test_ga_examples():
    s = ga_series(0, P(1, 1), 10)
    expected = np.zeros(11)
    expected[2] = -0.5
    assert np.allclose(s.coefficients, expected)
    p = P(1, 0)
    N = choose_order(0.5, p, 0.25, 1e-14, family="g")
    direct = 0.75 / (1 - 0.125) * (0.25 / 0.875)
    assert ga_series(0.5, p, N)(0.25) == pytest.approx(direct, rel=1e-12)


def test_closed_forms_on_diagonal():
    for alpha, m in ((1, 0), (1.5, 2), (0.75, 1)):
        p = P(alpha, m)
        for a in (0.3, 0.6j):
            assert fa_deriv_closed(a, a, p) == pytest.approx((1 - abs(a) ** 2) ** (1 - alpha - m))
            assert abs(ga_deriv_closed(a, a, p)) < 1e-15
        assert fa_deriv_closed(0, 0.7, p) == pytest.approx(1)


def test_choose_order_examples():
    assert choose_order(0, P(1, 2), 0.9, 1e-10) == 2
    N = choose_order(0.5, P(1, 0), 0.9, 1e-10)
    # geometric tail 0.75 * 0.45^(N+1) / 0.55 crosses 1e-10 at N = 28
    assert 28 <= N <= 34
    # (1 + delta) |a| r > 1: the geometric majorant cannot certify any order
    with pytest.raises(TruncationError):
        choose_order(0.99, P(1, 0), 0.999, 1e-10)
    with pytest.raises(TruncationError):
        choose_order(0.9, P(1, 0), 0.99, 1e-10, cap=100)


def test_tail_bound_is_rigorous():
    p = P(1.5, 1)
    a, r = 0.7, 0.8
    N = 20
    s = fa_series(a, p, N)
    exact = fa_series(a, p, 2000)
    z = r * np.exp(2j * np.pi * np.arange(64) / 64)
    err = np.max(np.abs(s(z) - exact(z)))
    assert 0 < err <= s.tail_bound(r)


def test_tail_survives_underflow_of_the_constant():
    from wdcdiff.series import _f_majorant
    maj = _f_majorant(0.99, P(1, 0), 16000, 0.05)
    assert maj.tail(16000, 0.999) == math.inf
    assert _f_majorant(0.5, P(1, 0), 16000, 0.05).tail(16000, 0.9) == 0.0


def test_derivative_and_integral():
    s = PowerSeries.polynomial([1, 2, 3])
    assert np.allclose(s.derivative().coefficients, [2, 6])
    assert np.allclose(s.integral().derivative().coefficients, s.coefficients)
    assert np.allclose(PowerSeries.monomial(3).derivative(3).coefficients, [6])


def test_monomial_norm_examples():
    assert monomial_bloch_norm(1, 2.3) == 1.0
    assert monomial_bloch_norm(2, 1) == pytest.approx(4 / (3 * math.sqrt(3)))
    r = np.linspace(0, 1, 200001)
    assert monomial_bloch_norm(5, 1.5) == pytest.approx(np.max(5 * r ** 4 * (1 - r * r) ** 1.5), rel=1e-8)
    for alpha in (0.75, 1, 1.5):
        n = 10 ** 4
        scaled = monomial_bloch_norm(n, alpha) * n ** (alpha - 1)
        assert abs(scaled / (2 * alpha / math.e) ** alpha - 1) <= 1e-2


def test_invalid_arguments():
    with pytest.raises(ValueError):
        fa_series(1.0, P(1, 0), 5)
    with pytest.raises(ValueError):
        choose_order(0.5, P(1, 0), 0.9, 1e-8, family="h")
    with pytest.raises(ValueError):
        monomial_bloch_norm(0, 1)
