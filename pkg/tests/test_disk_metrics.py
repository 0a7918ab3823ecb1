import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wdcdiff.disk_metrics import (apply_operator_diff, bloch_norm, boundary_limsup,
                                  rho, rho_pair, sup_disk, t_quantity, weighted_norm)
from wdcdiff.errors import NumericalError
from wdcdiff.grid import DiskGrid
from wdcdiff.series import PowerSeries
from wdcdiff.symbols import (ONE, Constant, ConstantOne, Identity, MobiusTo, Monomial,
                             Scale, SpaceParams, StandardPower, SymbolPair)

disk_point = st.builds(lambda r, t: r * np.exp(1j * t),
                       st.floats(0, 0.95), st.floats(0, 2 * np.pi))
G = DiskGrid(8, 4)


def test_rho_examples():
    assert rho(0.3, 0.3) == 0
    assert rho(0, 0.6j) == pytest.approx(0.6)
    assert rho(0.5, -0.5) == pytest.approx(0.8)


@settings(max_examples=60, deadline=None)
@given(a=disk_point, z=disk_point, w=disk_point)
def test_rho_mobius_invariant(a, z, w):
    f = MobiusTo(a)
    assert rho(f(z), f(w)) == pytest.approx(rho(z, w), abs=1e-9)


def test_rho_pair_examples():
    assert rho_pair(SymbolPair(Identity(), ONE, Constant(0), ONE), 0.3) == pytest.approx(0.3)
    half = SymbolPair(Scale(0.5, Identity()), ONE, Scale(-0.5, Identity()), ONE)
    assert rho_pair(half, 0.5) == pytest.approx(0.5 / 1.0625)


def test_t_quantity_examples():
    p = SpaceParams(1, 1, StandardPower(1))
    assert t_quantity(p, ONE, Identity(), 0.7) == pytest.approx(1)
    assert t_quantity(p, ONE, Scale(0.5, Identity()), 0.8) == pytest.approx(0.36 / 0.84)
    assert t_quantity(p, Constant(2), Constant(0), 0.5) == pytest.approx(2 * 0.75)
    _, flag = t_quantity(p, ONE, Identity(), np.array([0.1, 1 - 2e-16]), return_flag=True)
    assert list(flag) == [False, True]


def test_apply_operator_diff_examples():
    p = SpaceParams(1, 1, StandardPower(1))
    same = SymbolPair(MobiusTo(0.2), ONE, MobiusTo(0.2), ONE)
    assert apply_operator_diff(same, p, PowerSeries.monomial(4), 0.3) == 0
    pair = SymbolPair(Identity(), ONE, Constant(0.4), ONE)
    assert apply_operator_diff(pair, p, PowerSeries.monomial(1), 0.7) == 0
    pair = SymbolPair(Scale(0.5, Identity()), ONE, Constant(0), ONE)
    assert apply_operator_diff(pair, p, PowerSeries.monomial(2), 0.4) == pytest.approx(0.4)


def test_sup_disk_examples():
    assert sup_disk(lambda z: np.ones(z.shape), G).value == 1
    est = sup_disk(np.abs, G)
    assert est.value == pytest.approx(G.r_max)
    assert abs(est.argmax) == pytest.approx(G.r_max)
    est = sup_disk(lambda z: (1 - np.abs(z) ** 2) * 2 * np.abs(z), G)
    assert est.value == pytest.approx(4 / (3 * math.sqrt(3)), abs=1e-6)


def test_sup_disk_rejects_nan():
    with pytest.raises(NumericalError):
        sup_disk(lambda z: np.full(z.shape, np.nan), G)


@settings(max_examples=25, deadline=None)
@given(c=st.floats(0.1, 3), k=st.integers(1, 6))
def test_sup_monotone_under_refinement(c, k):
    fn = lambda z: np.abs(c * z ** k) * (1 - np.abs(z) ** 2)
    coarse = sup_disk(fn, G, refine_depth=0).value
    fine = sup_disk(fn, G, refine_depth=4).value
    assert fine >= coarse
    assert sup_disk(fn, G.doubled(), refine_depth=0).value >= coarse * (1 - 1e-12)


def test_bloch_norm_examples():
    g = DiskGrid(10, 8)
    assert bloch_norm(PowerSeries.polynomial([0.4 + 0.3j]), 1, g) == pytest.approx(0.5)
    assert bloch_norm(PowerSeries.monomial(1), 1, g) == pytest.approx(1)
    assert bloch_norm(PowerSeries.monomial(2), 1, g) == pytest.approx(4 / (3 * math.sqrt(3)), rel=1e-6)


def test_weighted_norm_examples():
    g = DiskGrid(10, 8)
    assert weighted_norm(lambda z: np.ones(z.shape), StandardPower(1), g) == 1
    assert weighted_norm(lambda z: np.zeros(z.shape), ConstantOne(), g) == 0
    n, beta = 5, 1.5
    r2 = n / (n + 2 * beta)
    exact = r2 ** (n / 2) * (1 - r2) ** beta
    assert weighted_norm(lambda z: z ** n, StandardPower(beta), g) == pytest.approx(exact, rel=1e-6)


def test_boundary_limsup_examples():
    g = DiskGrid(12, 4)
    lim = boundary_limsup(lambda z: np.ones(z.shape), Constant(0.5), g)
    assert lim.value == 0 and lim.flags == ["EmptyRegion"]
    assert boundary_limsup(lambda z: np.ones(z.shape), Identity(), g).value == 1
    lim = boundary_limsup(lambda z: 1 - np.abs(z) ** 2, Identity(), g)
    assert 0 < lim.value <= 1 - g.radii[g.J - 2] ** 2 + 1e-15
    assert [row[0] for row in lim.trace] == list(range(g.J + 1))


def test_sup_dominates_random_probes():
    rng = np.random.default_rng(2)
    z = 0.99 * np.sqrt(rng.uniform(size=100)) * np.exp(2j * np.pi * rng.uniform(size=100))
    z = z[np.abs(z) <= G.r_max]
    fn = lambda w: np.abs(np.sin(3 * w) * (1 - np.abs(w) ** 2))
    assert sup_disk(fn, G).value >= fn(z).max()


@settings(max_examples=40, deadline=None)
@given(z=st.builds(lambda r, t: r * np.exp(1j * t), st.floats(0, 0.9), st.floats(0, 6.3)),
       w=st.builds(lambda r, t: r * np.exp(1j * t), st.floats(0, 0.9), st.floats(0, 6.3)))
def test_rho_symmetric(z, w):
    assert abs(rho(z, w) - rho(w, z)) <= 1e-12


def test_boundary_limsup_of_polynomials():
    rng = np.random.default_rng(4)
    g = DiskGrid(12, 8)
    t = np.exp(2j * np.pi * np.arange(20000) / 20000)
    for _ in range(5):
        c = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        poly = lambda z: np.abs(np.polynomial.polynomial.polyval(z, c))
        lim = boundary_limsup(poly, None, g)
        assert lim.value == pytest.approx(poly(t).max(), rel=0.05)
