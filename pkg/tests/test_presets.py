import numpy as np
import pytest

from wdcdiff.grid import DiskGrid
from wdcdiff.presets import (PRESETS, compact_pair, natural_weight, preset, random_pair,
                             regression_family)
from wdcdiff.symbols import StandardPower


def test_presets_are_valid_self_maps():
    g = DiskGrid(12, 4)
    for name in PRESETS:
        p = preset(name)
        p.pair.validate(g)
    assert preset("case1").params.m == 0 and preset("case3").params.m == 1
    with pytest.raises(KeyError):
        preset("case9")


def test_regression_family_is_deterministic():
    a, b = regression_family(0), regression_family(0)
    assert len(a) == 12
    assert [p.pair for p in a] == [p.pair for p in b]
    assert [p.pair for p in regression_family(1)] != [p.pair for p in a]


def test_compact_random_pairs_stay_inside():
    g = DiskGrid(10, 4)
    rng = np.random.default_rng(5)
    for i in range(0, 10, 2):
        p = random_pair(rng, i)
        for phi in (p.pair.phi1, p.pair.phi2):
            assert np.max(np.abs(phi.evaluate(g.points))) <= 0.9
    p = compact_pair()
    assert np.max(np.abs(p.pair.phi1.evaluate(g.points))) <= 0.9


def test_natural_weight():
    assert natural_weight(1.5, 2) == StandardPower(2.5)
    assert natural_weight(1.0, 0) == StandardPower(1.0)
