import numpy as np
import pytest

from wdcdiff.grid import AGrid, DiskGrid


def test_ring_layout():
    g = DiskGrid(5, 3)
    assert g.radii[0] == 0.0
    assert g.r_max == 1 - 2 ** -5
    assert list(g.counts) == [3 * 2 ** j for j in range(6)]
    assert g.size == sum(g.counts)
    for j in range(6):
        ring = g.points[g.ring(j)]
        assert np.allclose(np.abs(ring), g.radii[j])


def test_points_are_read_only_and_stable():
    g = DiskGrid(4, 2)
    with pytest.raises(ValueError):
        g.points[0] = 0.5
    assert np.array_equal(g.points, DiskGrid(4, 2).points)


def test_doubled():
    g = DiskGrid(6, 4).doubled()
    assert (g.J, g.M0) == (7, 8)
    a = AGrid(5, 16).doubled()
    assert (a.levels, a.angles) == (6, 32)


def test_agrid_levels():
    a = AGrid(3, 8)
    assert a.points[0] == 0
    assert a.points.size == 1 + 3 * 8
    assert np.allclose(np.abs(a.points), a.moduli[a.level])
    assert AGrid.for_grid(DiskGrid(10, 4)).levels == 7


@pytest.mark.parametrize("args", [(0, 4), (3, 0)])
def test_invalid_grid(args):
    with pytest.raises(ValueError):
        DiskGrid(*args)
