"""Boundedness and essential-norm quantities for D^m_{phi1,u1} - D^m_{phi2,u2}.

Four computable families are compared:

* T-form  : sup |T1| rho, sup |T2| rho, sup |T1 - T2| (and boundary limits)
* test    : sup_a ||(D1 - D2) f_a||_v and the same for g_a
* powers  : sup_n n^(alpha+m-1) ||u1 phi1^n - u2 phi2^n||_v
* oracle  : max ||(D1 - D2) f||_v / ||f||_B over an explicit function family,
            a lower bound for the operator norm.
"""

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .disk_metrics import (DEFAULT_REFINE, BoundaryLimit, _rho, bloch_norm,
                           bloch_norm_closed, boundary_limsup, boundary_limsup_levels,
                           sup_disk)
from .errors import TruncationError
from .grid import AGrid, DiskGrid
from .series import choose_order, fa_series, ga_series, monomial_bloch_norm
from .symbols import SpaceParams, SymbolPair

REPORT_SCHEMA = "wdcdiff.report/1"
TAIL_START = 256


def default_n_schedule() -> List[int]:
    s = set(range(1, 65)) | {2 ** k for k in range(13)} | {3 * 2 ** k for k in range(11)}
    return sorted(s)


def kernel_power(b, s: float):
    """Principal b**(-s) for Re b > 0; integer and half-integer s avoid exp/log."""
    if float(s).is_integer():
        return b ** (-int(s))
    if float(2 * s).is_integer():
        k = int(math.floor(s)) + 1
        return b ** (-k) * np.sqrt(b)
    return np.exp(-s * np.log(b))


class SampledPair:
    """Symbol and weight values, cached for the most recent grid point array."""

    def __init__(self, pair: SymbolPair, params: SpaceParams):
        self.pair = pair
        self.params = params
        self._key = None
        self._cache = None

    def fields(self, z):
        if self._key is z:
            return self._cache
        p = self.pair
        out = dict(phi1=p.phi1.evaluate(z), phi2=p.phi2.evaluate(z),
                   u1=p.u1.evaluate(z), u2=p.u2.evaluate(z),
                   v=self.params.weight.evaluate(z))
        if isinstance(z, np.ndarray) and not z.flags.writeable:
            # grid point arrays are read-only; stencils and probes are not cached
            self._key, self._cache = z, out
        return out

    def t_values(self, z):
        f = self.fields(z)
        g = self.params.t_exp
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            t1 = f["v"] * f["u1"] / (1 - np.abs(f["phi1"]) ** 2) ** g
            t2 = f["v"] * f["u2"] / (1 - np.abs(f["phi2"]) ** 2) ** g
        return t1, t2, _rho(f["phi1"], f["phi2"])

    def overflow(self, z) -> bool:
        f = self.fields(z)
        gap = np.minimum(1 - np.abs(f["phi1"]) ** 2, 1 - np.abs(f["phi2"]) ** 2)
        return bool(np.any(gap < 1e-15))

    def test_values(self, a: complex, z):
        """v |(D1 - D2) f_a| and v |(D1 - D2) g_a| at z."""
        f = self.fields(z)
        p = self.params
        ab = np.conj(a)
        S = (1 - abs(a) ** 2) ** p.alpha
        s = p.kernel_exp
        b1, b2 = 1 - ab * f["phi1"], 1 - ab * f["phi2"]
        k1 = S * kernel_power(b1, s) * f["u1"]
        k2 = S * kernel_power(b2, s) * f["u2"]
        fv = f["v"] * np.abs(k1 - k2)
        gv = f["v"] * np.abs(k1 * (a - f["phi1"]) / b1 - k2 * (a - f["phi2"]) / b2)
        return fv, gv

    def power_values(self, n: int, z):
        f = self.fields(z)
        return f["v"] * np.abs(f["u1"] * f["phi1"] ** n - f["u2"] * f["phi2"] ** n)


# ---------------------------------------------------------------- T-form

@dataclass
class TResult:
    combo1: float
    combo2: float
    sup_t1_rho: float
    sup_t2_rho: float
    sup_t_diff: float
    overflow: bool = False

    @property
    def value(self) -> float:
        return max(self.combo1, self.combo2)

    @property
    def three_term(self) -> float:
        return self.sup_t1_rho + self.sup_t2_rho + self.sup_t_diff


def quantity_T(pair: SymbolPair, params: SpaceParams, grid: DiskGrid,
               refine_depth: int = DEFAULT_REFINE, sampled: Optional[SampledPair] = None
               ) -> TResult:
    """Both combinations sup|T_i| rho + sup|T1 - T2|."""
    sp = sampled or SampledPair(pair, params)

    def t1rho(z):
        t1, _, r = sp.t_values(z)
        return np.abs(t1) * r

    def t2rho(z):
        _, t2, r = sp.t_values(z)
        return np.abs(t2) * r

    def tdiff(z):
        t1, t2, _ = sp.t_values(z)
        return np.abs(t1 - t2)

    a = sup_disk(t1rho, grid, refine_depth).value
    b = sup_disk(t2rho, grid, refine_depth).value
    c = sup_disk(tdiff, grid, refine_depth).value
    return TResult(a + c, b + c, a, b, c, sp.overflow(grid.points))


def quantity_T_essential(pair: SymbolPair, params: SpaceParams, grid: DiskGrid,
                         sampled: Optional[SampledPair] = None):
    """Sum of the three boundary limits; returns (value, [three BoundaryLimit])."""
    sp = sampled or SampledPair(pair, params)
    pts = grid.points
    t1, t2, r = sp.t_values(pts)
    f = sp.fields(pts)
    m1, m2 = np.abs(f["phi1"]), np.abs(f["phi2"])
    parts = [
        boundary_limsup(None, m1, grid, values=np.abs(t1) * r),
        boundary_limsup(None, m2, grid, values=np.abs(t2) * r),
        boundary_limsup(None, np.minimum(m1, m2), grid, values=np.abs(t1 - t2)),
    ]
    return sum(p.value for p in parts), parts


# ---------------------------------------------------------------- test functions

@dataclass
class TestResult:
    sup_f: float
    sup_g: float
    a_points: np.ndarray
    a_levels: np.ndarray
    f_norms: np.ndarray
    g_norms: np.ndarray

    __test__ = False  # not a pytest class

    @property
    def value(self) -> float:
        return self.sup_f + self.sup_g

    def trace_rows(self):
        return [(float(abs(a)), float(np.angle(a)), float(fn), float(gn))
                for a, fn, gn in zip(self.a_points, self.f_norms, self.g_norms)]


def test_norms(pair: SymbolPair, params: SpaceParams, grid: DiskGrid, a_points,
               refine_depth: int = DEFAULT_REFINE,
               sampled: Optional[SampledPair] = None):
    """||(D1 - D2) f_a||_v and ||(D1 - D2) g_a||_v for each a (closed m-th derivatives)."""
    sp = sampled or SampledPair(pair, params)
    pts = grid.points
    fn_out, gn_out = [], []
    for a in np.atleast_1d(a_points):
        a = complex(a)
        fv, gv = sp.test_values(a, pts)
        fe = sup_disk(lambda z: sp.test_values(a, z)[0], grid, refine_depth,
                      coarse_values=fv)
        ge = sup_disk(lambda z: sp.test_values(a, z)[1], grid, refine_depth,
                      coarse_values=gv)
        fn_out.append(fe.value)
        gn_out.append(ge.value)
    return np.array(fn_out), np.array(gn_out)


def quantity_test(pair: SymbolPair, params: SpaceParams, grid: DiskGrid,
                  a_grid: Optional[AGrid] = None, refine_depth: int = DEFAULT_REFINE,
                  sampled: Optional[SampledPair] = None) -> TestResult:
    """sup_a ||(D1 - D2) f_a||_v + sup_a ||(D1 - D2) g_a||_v over the a-grid."""
    a_grid = a_grid or AGrid.for_grid(grid)
    fn, gn = test_norms(pair, params, grid, a_grid.points, refine_depth, sampled)
    return TestResult(float(fn.max()), float(gn.max()), a_grid.points, a_grid.level, fn, gn)


def quantity_test_essential(result: TestResult, a_grid: AGrid):
    """limsup_{|a|->1} of both norm curves; returns (value, (f_limit, g_limit))."""
    lf = boundary_limsup_levels(result.f_norms, result.a_levels, a_grid.moduli)
    lg = boundary_limsup_levels(result.g_norms, result.a_levels, a_grid.moduli)
    return lf.value + lg.value, (lf, lg)


# ---------------------------------------------------------------- n-th powers

@dataclass
class PowResult:
    value: float
    trace: List[tuple]  # (n, term)
    zero_term_convention: bool = False


def quantity_pow(pair: SymbolPair, params: SpaceParams, grid: DiskGrid,
                 n_schedule: Optional[Sequence[int]] = None,
                 refine_depth: int = DEFAULT_REFINE,
                 sampled: Optional[SampledPair] = None) -> PowResult:
    """sup_n n^(alpha+m-1) ||u1 phi1^n - u2 phi2^n||_v with its per-n trace.

    The n = 0 term carries factor 1 when alpha + m - 1 == 0 and 0 otherwise.
    """
    sp = sampled or SampledPair(pair, params)
    sched = sorted(set(int(n) for n in (n_schedule or default_n_schedule())))
    if not sched:
        raise ValueError("empty n schedule")
    g = params.t_exp
    trace = []
    flagged = False
    if 0 not in sched:
        sched = [0] + sched
    for n in sched:
        if n == 0:
            flagged = True
            if g != 0:
                trace.append((0, 0.0))
                continue
            factor = 1.0
        else:
            factor = float(n) ** g
        est = sup_disk(lambda z, n=n: sp.power_values(n, z), grid, refine_depth)
        trace.append((n, factor * est.value))
    return PowResult(max(t for _, t in trace), trace, flagged)


def quantity_pow_essential(result: PowResult, tail_start: int = TAIL_START):
    """Max of the trace over n >= tail_start, and the log-log slope there."""
    tail = [(n, t) for n, t in result.trace if n >= tail_start]
    if not tail:
        raise ValueError("tail_start beyond the n schedule")
    value = max(t for _, t in tail)
    pos = [(n, t) for n, t in tail if t > 0]
    slope = None
    if len(pos) >= 2:
        x = np.log([n for n, _ in pos])
        y = np.log([t for _, t in pos])
        slope = float(np.polyfit(x, y, 1)[0])
    return value, slope


# ---------------------------------------------------------------- oracle

@dataclass
class OracleResult:
    value: float
    witness: str
    skipped: List[str] = field(default_factory=list)
    monomial_ratios: List[tuple] = field(default_factory=list)  # (n, ratio) for z^n


def _kernel_bloch_norms(params: SpaceParams, modulus: float, grid: DiskGrid,
                        refine_depth: int):
    """Bloch norms of f_a and g_a at a = modulus (both depend on |a| only)."""
    a = complex(modulus)
    al, m, s = params.alpha, params.m, params.kernel_exp
    S = (1 - modulus ** 2) ** al
    if m == 0:
        # f = S b^-s, g = S (a - z) b^-(s+1), b = 1 - a z
        def fp(z):
            return S * s * a * (1 - a * z) ** (-s - 1)

        def gp(z):
            b = 1 - a * z
            return S * (-(b ** (-s - 1)) + (a - z) * (s + 1) * a * b ** (-s - 2))
        return (bloch_norm_closed(fp, S, al, grid, refine_depth),
                bloch_norm_closed(gp, S * a, al, grid, refine_depth))
    if m == 1:
        def fp(z):
            return S * (1 - a * z) ** (-s)

        def gp(z):
            return S * (1 - a * z) ** (-s) * (a - z) / (1 - a * z)
        return (bloch_norm_closed(fp, 0, al, grid, refine_depth),
                bloch_norm_closed(gp, 0, al, grid, refine_depth))
    out = []
    for fam, build in (("f", fa_series), ("g", ga_series)):
        N = choose_order(a, params, grid.r_max, 1e-12, family=fam, derivative=1)
        out.append(bloch_norm(build(a, params, N), al, grid, refine_depth))
    return tuple(out)


def random_polynomials(count: int, degree: int, rng: np.random.Generator):
    """Complex Gaussian coefficients damped by 1/(k+1); list of coefficient arrays."""
    out = []
    for _ in range(count):
        d = int(rng.integers(1, degree + 1))
        c = (rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)) / np.arange(1, d + 2)
        out.append(c)
    return out


def oracle_lower_bound(pair: SymbolPair, params: SpaceParams, grid: DiskGrid,
                       a_grid: Optional[AGrid] = None, n_max: int = 64,
                       n_random: int = 8, degree: int = 32, seed: int = 0,
                       refine_depth: int = DEFAULT_REFINE,
                       test_result: Optional[TestResult] = None,
                       sampled: Optional[SampledPair] = None) -> OracleResult:
    """max over an explicit family of ||(D1 - D2) f||_v / ||f||_{B^alpha}."""
    from .series import PowerSeries

    sp = sampled or SampledPair(pair, params)
    a_grid = a_grid or AGrid.for_grid(grid)
    m, al = params.m, params.alpha
    best, witness, skipped = 0.0, "none", []

    def consider(ratio, name):
        nonlocal best, witness
        if ratio > best:
            best, witness = float(ratio), name

    # kernel family
    if test_result is None:
        test_result = quantity_test(pair, params, grid, a_grid, refine_depth, sp)
    norms = {}
    for j, mod in enumerate(a_grid.moduli):
        try:
            norms[j] = _kernel_bloch_norms(params, float(mod), grid, refine_depth)
        except TruncationError:
            skipped.append(f"kernels at |a|={mod:.6g}")
    for a, j, fn, gn in zip(test_result.a_points, test_result.a_levels,
                            test_result.f_norms, test_result.g_norms):
        if j in norms:
            consider(fn / norms[j][0], f"f_a a={complex(a):.6g}")
            consider(gn / norms[j][1], f"g_a a={complex(a):.6g}")

    # normalised monomials
    mono = []
    for n in range(0, n_max + 1):
        if n < m:
            mono.append((n, 0.0))
            continue
        c = math.factorial(n) / math.factorial(n - m)
        est = sup_disk(lambda z, k=n - m: sp.power_values(k, z), grid, refine_depth)
        nb = 1.0 if n == 0 else monomial_bloch_norm(n, al)
        mono.append((n, c * est.value / nb))
        consider(c * est.value / nb, f"z^{n}")

    # seeded random polynomials
    rng = np.random.default_rng(seed)
    for i, c in enumerate(random_polynomials(n_random, degree, rng)):
        p = PowerSeries.polynomial(c)
        pm = p.derivative(m)
        nb = bloch_norm(p, al, grid, refine_depth)

        def fn(z, pm=pm):
            f = sp.fields(z)
            return f["v"] * np.abs(f["u1"] * pm(f["phi1"]) - f["u2"] * pm(f["phi2"]))
        est = sup_disk(fn, grid, refine_depth)
        consider(est.value / nb, f"random poly #{i} (deg {len(c) - 1}, seed {seed})")
    return OracleResult(best, witness, skipped, mono)


def monomial_essential_lower(pair: SymbolPair, params: SpaceParams, grid: DiskGrid,
                             n_values: Sequence[int], refine_depth: int = DEFAULT_REFINE,
                             sampled: Optional[SampledPair] = None) -> List[tuple]:
    """(n, ||(D1 - D2) z^n / ||z^n|| ||_v) for large n."""
    sp = sampled or SampledPair(pair, params)
    m, al = params.m, params.alpha
    out = []
    for n in n_values:
        if n < max(m, 1):
            continue
        # n!/(n-m)! / ||z^n|| computed in logs
        logc = math.lgamma(n + 1) - math.lgamma(n - m + 1) - math.log(monomial_bloch_norm(n, al))
        est = sup_disk(lambda z, k=n - m: sp.power_values(k, z), grid, refine_depth)
        out.append((n, math.exp(logc) * est.value))
    return out


# ---------------------------------------------------------------- report

@dataclass
class CriterionReport:
    Q_T: float
    Q_T_combos: tuple
    Q_T_three_term: float
    Q_test: float
    Q_test_f: float
    Q_test_g: float
    Q_pow: float
    L_oracle: float
    E_T: float
    E_T_terms: tuple
    E_test: float
    E_test_terms: tuple
    E_pow: float
    diagnostics: Dict = field(default_factory=dict)
    n_trace: List = field(default_factory=list)
    a_trace: List = field(default_factory=list)
    r_traces: Dict = field(default_factory=dict)
    config: Dict = field(default_factory=dict)

    QUANTITIES = ("Q_T", "Q_test", "Q_pow", "L_oracle", "E_T", "E_test", "E_pow")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema"] = REPORT_SCHEMA
        return _plain(d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def trace_csv(self, kind: str) -> str:
        """CSV text for one trace: 'n', 'a' or 'r'."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if kind == "n":
            w.writerow(["n", "term"])
            w.writerows([n, repr(float(t))] for n, t in self.n_trace)
        elif kind == "a":
            w.writerow(["abs_a", "arg_a", "f_norm", "g_norm"])
            w.writerows([repr(float(x)) for x in row] for row in self.a_trace)
        elif kind == "r":
            w.writerow(["term", "level", "r", "samples", "sup"])
            for name in sorted(self.r_traces):
                for lv, r, n, s in self.r_traces[name]:
                    w.writerow([name, lv, repr(float(r)), n, repr(float(s))])
        else:
            raise ValueError("trace kind must be 'n', 'a' or 'r'")
        return buf.getvalue()

    def to_csv(self) -> str:
        """Summary CSV with one row per quantity."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["quantity", "value"])
        for q in self.QUANTITIES:
            w.writerow([q, repr(float(getattr(self, q)))])
        return buf.getvalue()


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else repr(f)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def analyze(pair: SymbolPair, params: SpaceParams, grid: Optional[DiskGrid] = None,
            a_grid: Optional[AGrid] = None, n_schedule: Optional[Sequence[int]] = None,
            tail_start: int = TAIL_START, refine_depth: int = DEFAULT_REFINE,
            seed: int = 0, oracle: bool = True) -> CriterionReport:
    """Every criterion quantity for one symbol pair."""
    grid = grid or DiskGrid()
    a_grid = a_grid or AGrid.for_grid(grid)
    pair.validate(grid)
    sp = SampledPair(pair, params)

    tq = quantity_T(pair, params, grid, refine_depth, sp)
    e_t, e_parts = quantity_T_essential(pair, params, grid, sp)
    te = quantity_test(pair, params, grid, a_grid, refine_depth, sp)
    e_test, (lf, lg) = quantity_test_essential(te, a_grid)
    pw = quantity_pow(pair, params, grid, n_schedule, refine_depth, sp)
    e_pow, slope = quantity_pow_essential(pw, tail_start)
    orc = oracle_lower_bound(pair, params, grid, a_grid, seed=seed,
                             refine_depth=refine_depth, test_result=te,
                             sampled=sp) if oracle else None

    diag = {
        "overflow": tq.overflow,
        "E_T_flags": [p.flags for p in e_parts],
        "E_test_flags": [lf.flags, lg.flags],
        "pow_tail_slope": slope,
        "pow_zero_term_convention": pw.zero_term_convention and params.t_exp == 0,
        "oracle_witness": orc.witness if orc else None,
        "oracle_skipped": orc.skipped if orc else [],
        "tail_start": tail_start,
    }
    return CriterionReport(
        Q_T=tq.value, Q_T_combos=(tq.combo1, tq.combo2), Q_T_three_term=tq.three_term,
        Q_test=te.value, Q_test_f=te.sup_f, Q_test_g=te.sup_g,
        Q_pow=pw.value, L_oracle=orc.value if orc else float("nan"),
        E_T=e_t, E_T_terms=tuple(p.value for p in e_parts),
        E_test=e_test, E_test_terms=(lf.value, lg.value), E_pow=e_pow,
        diagnostics=diag, n_trace=pw.trace, a_trace=te.trace_rows(),
        r_traces={"t1_rho": e_parts[0].trace, "t2_rho": e_parts[1].trace,
                  "t_diff": e_parts[2].trace},
    )
