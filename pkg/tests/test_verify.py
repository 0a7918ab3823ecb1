import json
import math

import numpy as np
import pytest

from wdcdiff import criteria as cr
from wdcdiff import verify
from wdcdiff.grid import DiskGrid
from wdcdiff.presets import compact_pair, identical_pair, preset
from wdcdiff.symbols import SpaceParams, StandardPower


def P(alpha, m):
    return SpaceParams(alpha, m, StandardPower(1.0))


def test_lipschitz_constant_is_stable():
    out = verify.check_lipschitz(P(1, 1), n_pairs=200, family_size=16)
    assert out.passed and math.isfinite(out.constant) and out.constant > 0
    assert out.details["family_size"] > 16


def test_lipschitz_simple_case():
    # f = z: (1-|z|^2) - (1-|w|^2) = |w|^2 - |z|^2 <= 2 rho(z, w)
    rng = np.random.default_rng(0)
    z = 0.95 * np.sqrt(rng.uniform(size=500)) * np.exp(2j * np.pi * rng.uniform(size=500))
    w = 0.95 * np.sqrt(rng.uniform(size=500)) * np.exp(2j * np.pi * rng.uniform(size=500))
    rho = np.abs(z - w) / np.abs(1 - np.conj(w) * z)
    assert np.all(np.abs(np.abs(w) ** 2 - np.abs(z) ** 2) <= 2 * rho + 1e-15)


def test_tfg_identical_and_case3():
    p = identical_pair()
    out = verify.check_tfg(p.pair, p.params, check_grid=DiskGrid(4, 4))
    assert out.passed and out.margin == 0 and out.constant == 0
    p = preset("case3")
    out = verify.check_tfg(p.pair, p.params, check_grid=DiskGrid(4, 4))
    assert out.passed and out.margin > 0
    assert set(out.details) >= {"margin_i", "margin_ii", "constant_iii"}


def _reports(p, grid):
    base = cr.analyze(p.pair, p.params, grid, oracle=False)
    fine = cr.analyze(p.pair, p.params, grid.doubled(), oracle=False)
    return base, fine


def test_fgn_and_limfgn_on_compact_pair():
    p = compact_pair()
    base, fine = _reports(p, DiskGrid(8, 4))
    f = verify.check_fgn(p.pair, p.params, base, fine)
    assert f.passed and f.details["drift"] < 0.1
    lim = verify.check_limfgn(p.pair, p.params, base, fine)
    assert lim.passed and lim.witness["regime"] == "vanishing"


def test_fgn_identical_pair_is_zero_over_zero():
    p = identical_pair()
    base, fine = _reports(p, DiskGrid(6, 4))
    out = verify.check_fgn(p.pair, p.params, base, fine)
    assert out.passed and out.constant == 0


def test_comparability_regimes():
    p = identical_pair()
    deg = verify.check_comparability("identical", cr.analyze(p.pair, p.params, DiskGrid(6, 4), oracle=False))
    assert deg.passed and deg.witness["regime"] == "degenerate"
    p = preset("case3")
    out = verify.check_comparability("case3", cr.analyze(p.pair, p.params, DiskGrid(8, 4), oracle=False))
    assert out.passed and 1 <= out.constant <= 100


def test_stirling_examples():
    # alpha = 1, m = 0: gamma_k = 1, so the sum is the geometric series
    assert verify.stirling_ratio(P(1, 0), 0.5) == pytest.approx(1.0)
    assert verify.stirling_ratio(P(1.5, 2), 0.0) == 1.0
    out = verify.check_stirling(P(1, 1), verify.STIRLING_MODULI)
    assert out.passed and out.constant <= 4
    lim = out.details["limit"]
    assert lim == pytest.approx(math.gamma(1) / math.gamma(2))


def test_stirling_limit_approached():
    p = P(1.5, 2)
    r = verify.stirling_ratio(p, 1 - 1e-4)
    assert r == pytest.approx(math.gamma(1.5) / math.gamma(4), rel=0.02)
    stab = verify.check_stirling(p, band=None)
    assert stab.passed


def test_stolz_examples():
    k = np.array([10, 100, 1000])
    # alpha = m = 1: a_k = k(k-1)/2
    assert np.allclose(verify.stolz_sequence(P(1, 1), k), (k - 1) / (2 * k))
    for alpha, m in verify.STOLZ_PARAMS:
        out = verify.check_stolz(P(alpha, m))
        assert out.passed and out.details["deviation_at_kmax"] <= 1e-2


def test_znorm():
    for alpha, m in verify.ACCEPTANCE_PARAMS:
        out = verify.check_znorm(P(alpha, m), grid=DiskGrid(14, 16))
        assert out.passed, out


def test_run_regression_small_family_and_errors():
    p = identical_pair()
    res = verify.run_regression([p], grid=DiskGrid(6, 4),
                                checks=["fgn", "limfgn", "comparability", "stolz"])
    assert res.passed
    assert res.reports["identical"].Q_pow == 0
    assert [o.name for o in res.outcomes].count("stolz") == 4
    table = verify.summary_table(res.outcomes)
    assert table.splitlines()[0].split() == ["check", "family", "margin", "constant", "result"]
    assert len(json.loads(verify.outcomes_to_json(res.outcomes))) == len(res.outcomes)
    with pytest.raises(ValueError):
        verify.run_regression([], checks=["stolz"])
    with pytest.raises(ValueError):
        verify.run_regression([p], checks=["nope"])
