"""Deterministic polar sampling of the unit disk, refined toward the circle."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class DiskGrid:
    """Rings at r_j = 1 - 2**-j, j = 0..J, with M0 / (1 - r_j) points each.

    Points are stored ring by ring, angle index increasing, so the flat
    index order is the lexicographic (j, t) order used for tie-breaking.
    """

    J: int = 14
    M0: int = 16

    def __post_init__(self):
        if self.J < 1 or self.M0 < 1:
            raise ValueError("DiskGrid needs J >= 1 and M0 >= 1")

    @cached_property
    def radii(self) -> np.ndarray:
        return 1.0 - 2.0 ** -np.arange(self.J + 1, dtype=float)

    @cached_property
    def counts(self) -> np.ndarray:
        # 1 / (1 - r_j) = 2**j exactly
        return self.M0 * 2 ** np.arange(self.J + 1)

    @cached_property
    def offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.counts)])

    @cached_property
    def level(self) -> np.ndarray:
        return np.repeat(np.arange(self.J + 1), self.counts)

    @cached_property
    def angle_index(self) -> np.ndarray:
        return np.concatenate([np.arange(c) for c in self.counts])

    @cached_property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * self.angle_index / self.counts[self.level]

    @cached_property
    def r(self) -> np.ndarray:
        return self.radii[self.level]

    @cached_property
    def points(self) -> np.ndarray:
        pts = self.r * np.exp(1j * self.theta)
        pts.setflags(write=False)
        return pts

    @property
    def r_max(self) -> float:
        return float(self.radii[-1])

    @property
    def size(self) -> int:
        return int(self.offsets[-1])

    def ring(self, j: int) -> slice:
        return slice(int(self.offsets[j]), int(self.offsets[j + 1]))

    def radial_spacing(self, j):
        """Distance to the next ring outward."""
        return 0.5 * (1.0 - self.radii[j])

    def doubled(self) -> "DiskGrid":
        """One more ring toward the boundary and twice the angular density."""
        return DiskGrid(J=self.J + 1, M0=2 * self.M0)


@dataclass(frozen=True)
class AGrid:
    """Sample of the parameter a: moduli 1 - 2**-j (j = 0..levels), fixed angle count.

    Level 0 is the single point a = 0.
    """

    levels: int = 11
    angles: int = 32

    def __post_init__(self):
        if self.levels < 1 or self.angles < 1:
            raise ValueError("AGrid needs levels >= 1 and angles >= 1")

    @cached_property
    def moduli(self) -> np.ndarray:
        return 1.0 - 2.0 ** -np.arange(self.levels + 1, dtype=float)

    @classmethod
    def for_grid(cls, grid: DiskGrid, angles: int = 32, lag: int = 3) -> "AGrid":
        """a-levels stop `lag` rings inside the z-grid so kernels stay resolved."""
        return cls(levels=max(1, grid.J - lag), angles=angles)

    @cached_property
    def level(self) -> np.ndarray:
        return np.concatenate(
            [np.full(1 if m == 0 else self.angles, j) for j, m in enumerate(self.moduli)])

    @cached_property
    def points(self) -> np.ndarray:
        out = []
        for m in self.moduli:
            if m == 0:
                out.append(np.zeros(1, dtype=complex))
            else:
                t = np.arange(self.angles)
                out.append(m * np.exp(2j * np.pi * t / self.angles))
        return np.concatenate(out)

    def doubled(self) -> "AGrid":
        return AGrid(levels=self.levels + 1, angles=2 * self.angles)
