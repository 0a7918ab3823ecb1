"""Numerical re-derivation of the supporting inequalities, with witnesses.

Every check returns a :class:`CheckOutcome`. A positive margin means the
inequality holds with room to spare; constants are empirical and are
judged by their stability under refinement, not by a fixed threshold.
"""

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.special import gammaln

from . import criteria as cr
from .disk_metrics import DEFAULT_REFINE, _rho, bloch_norm, sup_disk
from .grid import AGrid, DiskGrid
from .presets import Preset, natural_weight, regression_family
from .series import PowerSeries, fa_deriv_closed, monomial_bloch_norm
from .symbols import SpaceParams, SymbolPair

POINTWISE_SLACK = 1e-8
STABILITY_DRIFT = 0.10
FAMILY_DRIFT = 0.20
STIRLING_BAND = 4.0
ESSENTIAL_FLOOR = 1e-6
ZERO_FLOOR = 1e-12
ACCEPTANCE_PARAMS = ((1.0, 0), (1.0, 1), (1.5, 2), (0.75, 1))
STIRLING_MODULI = (0.9, 0.99, 0.999)
STOLZ_PARAMS = ((1.0, 1), (1.5, 0), (0.75, 2))


@dataclass
class CheckOutcome:
    name: str
    family: str
    margin: float
    passed: bool
    witness: Dict = field(default_factory=dict)
    constant: Optional[float] = None
    details: Dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return cr._plain(asdict(self))


def outcomes_to_json(outcomes: Sequence[CheckOutcome]) -> str:
    return json.dumps([o.to_dict() for o in outcomes], sort_keys=True, indent=2)


def summary_table(outcomes: Sequence[CheckOutcome]) -> str:
    rows = [("check", "family", "margin", "constant", "result")]
    for o in outcomes:
        c = "" if o.constant is None else f"{o.constant:.4g}"
        rows.append((o.name, o.family, f"{o.margin:.3g}", c, "pass" if o.passed else "FAIL"))
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    return "\n".join("  ".join(x.ljust(w) for x, w in zip(r, widths)) for r in rows)


def _drift(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(a), abs(b))


def _pdesc(params: SpaceParams) -> str:
    return f"alpha={params.alpha:g}, m={params.m}"


# ---------------------------------------------------------------- Lipschitz-type estimate

def _lipschitz_family(params: SpaceParams, rng, size: int, grid: DiskGrid):
    """(label, m-th derivative callable, Bloch norm) triples."""
    m, al = params.m, params.alpha
    fam = []
    for n in range(max(m, 1), max(m, 1) + size):
        c = math.exp(math.lgamma(n + 1) - math.lgamma(n - m + 1))
        fam.append((f"z^{n}", lambda z, n=n, c=c: c * z ** (n - m), monomial_bloch_norm(n, al)))
    extra = max(2, size // 8)
    for i, coeffs in enumerate(cr.random_polynomials(extra, 16, rng)):
        p = PowerSeries.polynomial(coeffs)
        fam.append((f"poly#{i}", p.derivative(m), bloch_norm(p, al, grid, 3)))
    for a in np.linspace(0.0, 0.9, extra):
        fn, _ = cr._kernel_bloch_norms(params, float(a), grid, 3)
        fam.append((f"f_a a={a:.3g}", lambda z, a=a: fa_deriv_closed(a, z, params), fn))
    return fam


def check_lipschitz(params: SpaceParams, n_pairs: int = 400, family_size: int = 64,
                    seed: int = 0, grid: Optional[DiskGrid] = None) -> CheckOutcome:
    """|(1-|z|^2)^g f^(m)(z) - (1-|w|^2)^g f^(m)(w)| <= C ||f|| rho(z, w), g = alpha+m-1."""
    grid = grid or DiskGrid(9, 8)
    rng = np.random.default_rng(seed)
    z = np.sqrt(rng.uniform(0, 0.95 ** 2, n_pairs)) * np.exp(2j * np.pi * rng.uniform(size=n_pairs))
    # half the partners are close to z so that small rho is exercised
    w = np.sqrt(rng.uniform(0, 0.95 ** 2, n_pairs)) * np.exp(2j * np.pi * rng.uniform(size=n_pairs))
    near = z + 0.05 * (1 - np.abs(z)) * np.exp(2j * np.pi * rng.uniform(size=n_pairs))
    w = np.where(np.arange(n_pairs) % 2 == 0, w, near)
    rho = _rho(z, w)
    keep = rho >= 1e-6
    z, w, rho = z[keep], w[keep], rho[keep]
    g = params.t_exp

    def constant(family):
        best, wit = 0.0, {}
        for label, fm, norm in family:
            lhs = np.abs((1 - np.abs(z) ** 2) ** g * fm(z) - (1 - np.abs(w) ** 2) ** g * fm(w))
            ratio = lhs / (norm * rho)
            k = int(np.argmax(ratio))
            if ratio[k] > best:
                best, wit = float(ratio[k]), {"f": label, "z": complex(z[k]), "w": complex(w[k])}
        return best, wit

    full = _lipschitz_family(params, np.random.default_rng(seed + 1), family_size, grid)
    half = _lipschitz_family(params, np.random.default_rng(seed + 1), max(1, family_size // 2), grid)
    c_full, wit = constant(full)
    c_half, _ = constant(half)
    drift = _drift(c_full, c_half)
    ok = math.isfinite(c_full) and drift < FAMILY_DRIFT
    return CheckOutcome("lipschitz", _pdesc(params), FAMILY_DRIFT - drift, ok, wit, c_full,
                        {"constant_half_family": c_half, "family_size": len(full),
                         "pairs": int(keep.sum())})


# ---------------------------------------------------------------- T vs test functions

def _test_norm_at(sp, a, grid, refine_depth, probe):
    fv, gv = sp.test_values(a, grid.points)
    f = sup_disk(lambda z: sp.test_values(a, z)[0], grid, refine_depth, probes=probe,
                 coarse_values=fv).value
    g = sup_disk(lambda z: sp.test_values(a, z)[1], grid, refine_depth, probes=probe,
                 coarse_values=gv).value
    return f, g


def check_tfg(pair: SymbolPair, params: SpaceParams, grid: Optional[DiskGrid] = None,
              check_grid: Optional[DiskGrid] = None, refine_depth: int = 2,
              slack: float = POINTWISE_SLACK, name: str = "") -> CheckOutcome:
    """Pointwise |T_i(z)| rho(z) <= ||(D1-D2) f_{phi_i(z)}||_v + ||(D1-D2) g_{phi_i(z)}||_v.

    Sub-checks (i) and (ii) use constant 1; (iii) reports
    sup |T1 - T2| / sup_z (right-hand side) as an empirical constant.
    """
    grid = grid or DiskGrid(8, 4)
    check_grid = check_grid or DiskGrid(6, 4)
    sp = cr.SampledPair(pair, params)
    pts = np.array(check_grid.points)
    t1, t2, rho = sp.t_values(pts)
    phis = (pair.phi1.evaluate(pts), pair.phi2.evaluate(pts))
    lhs = (np.abs(t1) * rho, np.abs(t2) * rho)
    worst = {}
    rhs1 = np.zeros(pts.size)
    for i in (0, 1):
        margins = np.zeros(pts.size)
        for k, z in enumerate(pts):
            f, g = _test_norm_at(sp, complex(phis[i][k]), grid, refine_depth, np.array([z]))
            rhs = f + g
            if i == 0:
                rhs1[k] = rhs
            scale = max(lhs[i][k], rhs)
            margins[k] = 0.0 if scale == 0 else (rhs - lhs[i][k]) / scale
        k = int(np.argmin(margins))
        worst["i" if i == 0 else "ii"] = (float(margins[k]), {"z": complex(pts[k]),
                                                             "lhs": float(lhs[i][k])})
    num = float(np.max(np.abs(t1 - t2)))
    den = float(np.max(rhs1))
    c3 = 0.0 if num <= ZERO_FLOOR else (num / den if den > 0 else math.inf)
    margin = min(worst["i"][0], worst["ii"][0])
    sub = "i" if worst["i"][0] <= worst["ii"][0] else "ii"
    return CheckOutcome("tfg", name or _pdesc(params), margin, margin >= -slack,
                        {"subcheck": sub, **worst[sub][1]}, c3,
                        {"margin_i": worst["i"][0], "margin_ii": worst["ii"][0],
                         "constant_iii": c3, "points": int(pts.size)})


# ---------------------------------------------------------------- test functions vs n-th powers

def _ratio(num: float, den: float):
    if num <= ZERO_FLOOR and den <= ZERO_FLOOR:
        return 0.0
    return num / den if den > 0 else math.inf


def check_fgn(pair: SymbolPair, params: SpaceParams, base: cr.CriterionReport,
              fine: cr.CriterionReport, name: str = "") -> CheckOutcome:
    """sup_a ||(D1-D2) f_a||_v, sup_a ||(D1-D2) g_a||_v <= C Q_pow; C stable under doubling."""
    cf = _ratio(base.Q_test_f, base.Q_pow), _ratio(fine.Q_test_f, fine.Q_pow)
    cg = _ratio(base.Q_test_g, base.Q_pow), _ratio(fine.Q_test_g, fine.Q_pow)
    ct = _ratio(base.Q_test, base.Q_pow), _ratio(fine.Q_test, fine.Q_pow)
    drift = max(_drift(*cf), _drift(*cg), _drift(*ct))
    ok = all(math.isfinite(c) for c in cf + cg) and drift < STABILITY_DRIFT
    return CheckOutcome("fgn", name or _pdesc(params), STABILITY_DRIFT - drift, ok,
                        {"grid": "doubled" if _drift(*ct) >= _drift(*cf) else "base"},
                        ct[1], {"C_f": cf, "C_g": cg, "C_total": ct, "drift": drift})


def check_limfgn(pair: SymbolPair, params: SpaceParams, base: cr.CriterionReport,
                 fine: cr.CriterionReport, name: str = "") -> CheckOutcome:
    """E_test <= C E_pow with C stable under doubling.

    When E_pow vanishes (below 1e-6 on both grids) the constant is
    undefined; the check then requires E_test not to grow under doubling,
    which is how a limit equal to 0 shows up at finite resolution.
    """
    eb, ef = base.E_pow, fine.E_pow
    if eb <= ESSENTIAL_FLOOR and ef <= ESSENTIAL_FLOOR:
        ok = fine.E_test <= base.E_test * (1 + 1e-9) + ZERO_FLOOR
        return CheckOutcome("limfgn", name or _pdesc(params),
                            base.E_test - fine.E_test, ok, {"regime": "vanishing"}, None,
                            {"E_test": (base.E_test, fine.E_test), "E_pow": (eb, ef)})
    c = _ratio(base.E_test, eb), _ratio(fine.E_test, ef)
    drift = _drift(*c)
    ok = all(math.isfinite(x) for x in c) and drift < STABILITY_DRIFT
    return CheckOutcome("limfgn", name or _pdesc(params), STABILITY_DRIFT - drift, ok,
                        {"regime": "essential"}, c[1],
                        {"C": c, "E_test": (base.E_test, fine.E_test), "E_pow": (eb, ef),
                         "drift": drift})


def check_comparability(name: str, report: cr.CriterionReport, band: float = 100.0,
                        floor: float = ESSENTIAL_FLOOR) -> CheckOutcome:
    """Q_T, Q_test, Q_pow pairwise within [1/band, band], or all <= 1e-12."""
    q = {"Q_T": report.Q_T, "Q_test": report.Q_test, "Q_pow": report.Q_pow}
    if max(q.values()) <= floor:
        ok = max(q.values()) <= ZERO_FLOOR
        return CheckOutcome("comparability", name, ZERO_FLOOR - max(q.values()), ok,
                            {"regime": "degenerate"}, None, q)
    keys = list(q)
    worst, wit = math.inf, {}
    ratios = {}
    for i in range(3):
        for j in range(i + 1, 3):
            r = _ratio(q[keys[i]], q[keys[j]])
            ratios[f"{keys[i]}/{keys[j]}"] = r
            m = math.log(band) - abs(math.log(r)) if 0 < r < math.inf else -math.inf
            if m < worst:
                worst, wit = m, {"pair": f"{keys[i]}/{keys[j]}", "ratio": r}
    return CheckOutcome("comparability", name, worst, worst >= 0, wit,
                        max(max(ratios.values()), 1 / min(ratios.values())), ratios)


# ---------------------------------------------------------------- asymptotic identities

def stirling_ratio(params: SpaceParams, modulus: float, tol: float = 1e-15) -> float:
    """(1-r) ** alpha * sum_k gamma_k max(k,1)^(1-alpha-m) r^k at r = modulus."""
    al, m = params.alpha, params.m
    if modulus == 0:
        return 1.0
    # terms decay like k^(alpha-1) r^k
    N = int(min(5e7, max(64, (math.log(tol) - 10) / math.log(modulus) * 2)))
    k = np.arange(N, dtype=float)
    logg = gammaln(k + params.kernel_exp) - gammaln(params.kernel_exp) - gammaln(k + 1)
    logt = logg + (1 - al - m) * np.log(np.maximum(k, 1)) + k * math.log(modulus)
    return float(np.exp(logt + al * math.log1p(-modulus)).sum())


def check_stirling(params: SpaceParams, a_moduli: Optional[Sequence[float]] = None,
                   band: Optional[float] = STIRLING_BAND) -> CheckOutcome:
    """sum gamma_k k^(1-alpha-m) |a|^k against (1-|a|)^(-alpha): ratio within [1/c, c].

    With band=None the constant is only measured and the check asks that
    dropping the outermost modulus moves it by less than 10%.
    """
    if a_moduli is None:
        a_moduli = AGrid(levels=14).moduli
    ratios = np.array([stirling_ratio(params, float(r)) for r in a_moduli])
    spread = np.maximum(ratios, 1 / ratios)
    c = float(spread.max())
    k = int(np.argmax(spread))
    details = {"limit": math.exp(math.lgamma(params.alpha) - math.lgamma(params.kernel_exp)),
               "ratios": ratios, "moduli": np.asarray(a_moduli, dtype=float)}
    if band is None:
        c_inner = float(spread[:-1].max()) if len(spread) > 1 else c
        drift = _drift(c, c_inner)
        margin, ok = STABILITY_DRIFT - drift, drift < STABILITY_DRIFT
        details["constant_without_outermost"] = c_inner
    else:
        margin, ok = band - c, c <= band
    return CheckOutcome("stirling", _pdesc(params), margin, ok,
                        {"modulus": float(a_moduli[k]), "ratio": float(ratios[k])}, c, details)


def stolz_sequence(params: SpaceParams, k_values: Sequence[int]) -> np.ndarray:
    """a_k / k^(2alpha+m-1) with a_k = sum_{l<k} l^(2alpha+m-2); l = 0 dropped if the power is negative."""
    p = params.kernel_exp - 1
    kmax = int(max(k_values))
    l = np.arange(kmax, dtype=float)
    with np.errstate(divide="ignore"):
        terms = l ** p
    if p < 0:
        terms[0] = 0.0
    elif p == 0:
        terms[0] = 1.0
    cums = np.concatenate([[0.0], np.cumsum(terms)])
    k = np.asarray(k_values, dtype=int)
    return cums[k] / k.astype(float) ** (p + 1)


def check_stolz(params: SpaceParams, k_max: int = 10_000) -> CheckOutcome:
    """|a_k / k^(2alpha+m-1) - 1/(2alpha+m-1)| <= 100 / k, i.e. 1e-2 at k = 1e4."""
    ks = np.unique(np.geomspace(10, k_max, 13).astype(int))
    dev = np.abs(stolz_sequence(params, ks) - 1 / params.kernel_exp)
    tol = 100.0 / ks
    margin = tol - dev
    j = int(np.argmin(margin))
    return CheckOutcome("stolz", _pdesc(params), float(margin[j]), bool(np.all(margin >= 0)),
                        {"k": int(ks[j]), "deviation": float(dev[j])}, None,
                        {"k": ks, "deviation": dev, "deviation_at_kmax": float(dev[-1])})


def check_znorm(params: SpaceParams, n: int = 4096, grid: Optional[DiskGrid] = None,
                tol: float = 0.02) -> CheckOutcome:
    """n^(alpha-1) ||z^n||_B within 2% of (2 alpha / e)^alpha."""
    grid = grid or DiskGrid()
    al = params.alpha
    target = (2 * al / math.e) ** al
    val = bloch_norm(PowerSeries.monomial(n), al, grid) * n ** (al - 1)
    rel = abs(val - target) / target
    return CheckOutcome("znorm", _pdesc(params), tol - rel, rel <= tol,
                        {"n": n, "scaled_norm": val}, val / target,
                        {"target": target, "closed": monomial_bloch_norm(n, al) * n ** (al - 1)})


# ---------------------------------------------------------------- regression driver

@dataclass
class RegressionResult:
    outcomes: List[CheckOutcome]
    reports: Dict[str, cr.CriterionReport]
    fine_reports: Dict[str, cr.CriterionReport]
    seed: int

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)


ALL_CHECKS = ("lipschitz", "tfg", "fgn", "limfgn", "comparability", "stirling", "stolz", "znorm")
PAIR_CHECKS = {"tfg", "fgn", "limfgn", "comparability"}


def run_regression(family: Optional[Sequence[Preset]] = None, seed: int = 0,
                   grid: Optional[DiskGrid] = None, checks: Sequence[str] = ALL_CHECKS,
                   refine_depth: int = DEFAULT_REFINE,
                   n_schedule: Optional[Sequence[int]] = None,
                   tail_start: int = cr.TAIL_START) -> RegressionResult:
    """Run the selected checks over a family (default: presets plus seeded random pairs)."""
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    family = regression_family(seed) if family is None else list(family)
    if not family:
        raise ValueError("empty regression family")
    grid = grid or DiskGrid(10, 4)
    fine_grid = grid.doubled()
    ag = AGrid.for_grid(grid)
    outcomes, reports, fine = [], {}, {}
    need_fine = bool({"fgn", "limfgn"} & set(checks))
    for p in family:
        if PAIR_CHECKS & set(checks):
            reports[p.name] = cr.analyze(p.pair, p.params, grid, ag, n_schedule, tail_start,
                                         refine_depth, seed, oracle=False)
        if need_fine:
            fine[p.name] = cr.analyze(p.pair, p.params, fine_grid, ag.doubled(), n_schedule,
                                      tail_start, refine_depth, seed, oracle=False)
        if "tfg" in checks:
            outcomes.append(check_tfg(p.pair, p.params, name=p.name))
        if "fgn" in checks:
            outcomes.append(check_fgn(p.pair, p.params, reports[p.name], fine[p.name], p.name))
        if "limfgn" in checks:
            outcomes.append(check_limfgn(p.pair, p.params, reports[p.name], fine[p.name], p.name))
        if "comparability" in checks:
            outcomes.append(check_comparability(p.name, reports[p.name]))
    if "stirling" in checks:
        outcomes.append(check_stirling(SpaceParams(1.0, 1, natural_weight(1.0, 1)),
                                       STIRLING_MODULI))
    if "stolz" in checks:
        for alpha, m in STOLZ_PARAMS:
            outcomes.append(check_stolz(SpaceParams(alpha, m, natural_weight(alpha, m))))
    seen = []
    for p in family:
        key = (p.params.alpha, p.params.m)
        if key not in seen:
            seen.append(key)
    for alpha, m in seen:
        params = SpaceParams(alpha, m, natural_weight(alpha, m))
        if "stirling" in checks:
            outcomes.append(check_stirling(params, band=None))
        if "stolz" in checks:
            outcomes.append(check_stolz(params))
        if "lipschitz" in checks:
            outcomes.append(check_lipschitz(params, seed=seed))
        if "znorm" in checks:
            outcomes.append(check_znorm(params))
    return RegressionResult(outcomes, reports, fine, seed)
