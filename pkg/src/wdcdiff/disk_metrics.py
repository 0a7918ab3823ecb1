"""Pointwise quantities on the disk and the sup / boundary-limit estimators."""

import csv
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import NumericalError, TruncationError
from .grid import DiskGrid
from .series import PowerSeries
from .symbols import SpaceParams, SymbolExpr, SymbolPair, WeightSpec, _check_disk

OVERFLOW_GAP = 1e-15
DEFAULT_REFINE = 6
DEFAULT_TOP = 8
LIMSUP_WINDOW = 3
LIMSUP_MIN_SAMPLES = 32


def rho(z, w):
    """Pseudo-hyperbolic distance |z - w| / |1 - conj(w) z|."""
    z, w = _check_disk(z), _check_disk(w)
    return _rho(z, w)


def _rho(z, w):
    return np.abs(z - w) / np.abs(1 - np.conj(w) * z)


def rho_pair(pair: SymbolPair, z):
    z = _check_disk(z)
    return _rho(pair.phi1.evaluate(z), pair.phi2.evaluate(z))


def t_quantity(params: SpaceParams, u: SymbolExpr, phi: SymbolExpr, z,
               return_flag: bool = False):
    """v(z) u(z) / (1 - |phi(z)|^2)^(alpha + m - 1).

    With return_flag, also returns a boolean mask of points where
    1 - |phi|^2 < 1e-15 (values there are unreliable, not an error).
    """
    z = _check_disk(z)
    gap = 1 - np.abs(phi.evaluate(z)) ** 2
    with np.errstate(divide="ignore", over="ignore"):
        val = params.weight.evaluate(z) * u.evaluate(z) / gap ** params.t_exp
    if return_flag:
        return val, gap < OVERFLOW_GAP
    return val


def apply_operator_diff(pair: SymbolPair, params: SpaceParams,
                        f: Union[PowerSeries, Callable], z):
    """(D1 - D2) f at z = u1 f^(m)(phi1) - u2 f^(m)(phi2).

    f is either a PowerSeries (differentiated m times here) or a callable
    already returning the m-th derivative.
    """
    z = _check_disk(z)
    fm = f.derivative(params.m) if isinstance(f, PowerSeries) else f
    w1, w2 = pair.phi1.evaluate(z), pair.phi2.evaluate(z)
    return pair.u1.evaluate(z) * fm(w1) - pair.u2.evaluate(z) * fm(w2)


# ---------------------------------------------------------------- sup estimator

@dataclass
class SupEstimate:
    value: float
    argmax: complex
    depth: int
    level_max: np.ndarray
    converged: bool = True
    coarse_value: float = 0.0

    def __float__(self):
        return float(self.value)


def _values(fn, z):
    v = np.asarray(fn(z), dtype=float)
    if np.any(np.isnan(v)):
        raise NumericalError("evaluator returned NaN")
    return v


def _top_indices(vals, top):
    # largest `top` values, ties broken by lowest flat index
    if vals.size <= top:
        idx = np.arange(vals.size)
    else:
        kth = np.partition(vals, vals.size - top)[vals.size - top]
        idx = np.flatnonzero(vals >= kth)
    order = np.lexsort((idx, -vals[idx]))
    return idx[order][:top]


def sup_disk(fn: Callable, grid: DiskGrid, refine_depth: int = DEFAULT_REFINE,
             probes=None, top: int = DEFAULT_TOP, coarse_values=None) -> SupEstimate:
    """Estimate sup_z fn(z) over |z| <= r_J: grid max, then local polar refinement.

    The estimate is the largest value actually evaluated, so it is a lower
    bound for the true sup and never below fn at any supplied probe.
    `coarse_values` may carry fn already evaluated on grid.points.
    """
    pts = grid.points
    vals = _values(fn, pts) if coarse_values is None else np.asarray(coarse_values, dtype=float)
    if coarse_values is not None and np.any(np.isnan(vals)):
        raise NumericalError("evaluator returned NaN")
    level_max = np.maximum.reduceat(vals, grid.offsets[:-1])
    best = int(np.argmax(vals))
    value, arg = float(vals[best]), complex(pts[best])
    coarse = value

    if probes is not None:
        probes = np.atleast_1d(np.asarray(probes, dtype=complex))
        pv = _values(fn, probes)
        k = int(np.argmax(pv))
        if pv[k] > value:
            value, arg = float(pv[k]), complex(probes[k])

    converged = True
    if refine_depth > 0:
        cand = _top_indices(vals, top)
        cr, ct = grid.r[cand].copy(), grid.theta[cand].copy()
        lev = grid.level[cand]
        hr = grid.radial_spacing(lev)
        ht = 2 * np.pi / grid.counts[lev]
        cv = vals[cand].copy()
        off = np.arange(-2, 3)
        dr, dt = np.meshgrid(off, off, indexing="ij")
        dr, dt = dr.ravel(), dt.ravel()
        rmax = grid.r_max
        prev = value
        for k in range(refine_depth):
            scale = 0.5 * 0.25 ** k
            rr = np.clip(cr[:, None] + scale * hr[:, None] * dr, 0.0, rmax)
            tt = ct[:, None] + scale * ht[:, None] * dt
            zz = rr * np.exp(1j * tt)
            sv = _values(fn, zz.ravel()).reshape(zz.shape)
            j = np.argmax(sv, axis=1)
            rows = np.arange(len(cand))
            better = sv[rows, j] > cv
            cr = np.where(better, rr[rows, j], cr)
            ct = np.where(better, tt[rows, j], ct)
            cv = np.where(better, sv[rows, j], cv)
            i = int(np.argmax(cv))
            if cv[i] > value:
                value, arg = float(cv[i]), complex(cr[i] * np.exp(1j * ct[i]))
            gain = value - prev
            prev = value
        converged = gain <= 1e-6 * abs(value)
    return SupEstimate(value, arg, refine_depth, level_max, converged, coarse)


def weighted_norm(g: Callable, weight: WeightSpec, grid: DiskGrid,
                  refine_depth: int = DEFAULT_REFINE, full: bool = False):
    """sup v(z) |g(z)| over the grid disk."""
    est = sup_disk(lambda z: weight.evaluate(z) * np.abs(g(z)), grid, refine_depth)
    return est if full else est.value


def bloch_norm(f: PowerSeries, alpha: float, grid: DiskGrid,
               refine_depth: int = DEFAULT_REFINE) -> float:
    """|f(0)| + sup (1 - |z|^2)^alpha |f'(z)|."""
    fp = f.derivative()
    est = sup_disk(lambda z: (1 - np.abs(z) ** 2) ** alpha * np.abs(fp(z)),
                   grid, refine_depth)
    tail = fp.tail_bound(grid.r_max)
    if not tail <= 1e-8 * max(est.value, 1e-300):
        raise TruncationError(
            f"derivative tail bound {tail:.3g} at r = {grid.r_max} is too large "
            f"against the sup {est.value:.3g}")
    return abs(complex(f.coefficients[0])) + est.value


def bloch_norm_closed(fprime: Callable, f0: complex, alpha: float, grid: DiskGrid,
                      refine_depth: int = DEFAULT_REFINE) -> float:
    """Bloch norm from a closed-form derivative."""
    est = sup_disk(lambda z: (1 - np.abs(z) ** 2) ** alpha * np.abs(fprime(z)),
                   grid, refine_depth)
    return abs(complex(f0)) + est.value


# ---------------------------------------------------------------- boundary limits

@dataclass
class BoundaryLimit:
    value: float
    trace: list = field(default_factory=list)  # rows (level, r, samples, sup)
    empty: bool = False
    sparse: bool = False

    @property
    def flags(self) -> list:
        return [name for name, on in (("EmptyRegion", self.empty), ("Sparse", self.sparse)) if on]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["level", "r", "samples", "sup"])
            for row in self.trace:
                w.writerow([row[0], repr(row[1]), row[2], repr(row[3])])


def _limit_from_levels(trace, n_levels, window, min_samples, allow_empty):
    counts = np.array([row[2] for row in trace])
    last = n_levels - 1
    if allow_empty and not np.any(counts[max(1, last - window):] > 0):
        return BoundaryLimit(0.0, trace, empty=True)
    usable = [row for row in trace if row[0] >= 1 and row[2] >= min_samples]
    sparse = False
    if not usable:
        usable = [row for row in trace if row[0] >= 1 and row[2] > 0]
        sparse = True
    if not usable:
        return BoundaryLimit(0.0, trace, empty=True)
    tail = usable[-window:]
    sparse = sparse or tail[-1][0] < last - 2
    return BoundaryLimit(max(row[3] for row in tail), trace, sparse=sparse)


def region_modulus(phi, grid: DiskGrid) -> np.ndarray:
    """|phi| on the grid; phi may be None (|z|), a symbol, or a sequence (min modulus)."""
    pts = grid.points
    if phi is None:
        return np.abs(pts)
    if isinstance(phi, SymbolExpr):
        return np.abs(phi.evaluate(pts))
    if isinstance(phi, np.ndarray):
        return phi
    return np.min([np.abs(p.evaluate(pts)) for p in phi], axis=0)


def boundary_limsup(fn: Callable, phi: Optional[Union[SymbolExpr, Sequence[SymbolExpr]]],
                    grid: DiskGrid, window: int = LIMSUP_WINDOW,
                    min_samples: int = LIMSUP_MIN_SAMPLES, values=None) -> BoundaryLimit:
    """lim_{r -> 1} sup_{|phi(z)| > r} fn(z), read off the ring radii r_j.

    If the region is empty on the outermost `window + 1` levels the limit
    is the empty sup, 0, flagged EmptyRegion.
    """
    vals = _values(fn, grid.points) if values is None else np.asarray(values, dtype=float)
    mod = region_modulus(phi, grid)
    order = np.argsort(-mod, kind="stable")
    smod, svals = mod[order], np.maximum.accumulate(vals[order])
    trace = []
    for j, r in enumerate(grid.radii):
        n = int(np.searchsorted(-smod, -r, side="left"))
        trace.append((j, float(r), n, float(svals[n - 1]) if n else 0.0))
    return _limit_from_levels(trace, grid.J + 1, window, min_samples, allow_empty=True)


def boundary_limsup_levels(values, levels, moduli, window: int = LIMSUP_WINDOW,
                           min_samples: int = LIMSUP_MIN_SAMPLES) -> BoundaryLimit:
    """limsup_{|a| -> 1} of values sampled on the levels |a| = moduli[level]."""
    values = np.asarray(values, dtype=float)
    levels = np.asarray(levels)
    trace = []
    for j, r in enumerate(moduli):
        sel = values[levels == j]
        trace.append((j, float(r), int(sel.size), float(sel.max()) if sel.size else 0.0))
    return _limit_from_levels(trace, len(moduli), window, min_samples, allow_empty=False)
