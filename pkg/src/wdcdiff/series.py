"""Truncated Maclaurin series with rigorous tails, and the kernel test functions.

The test functions are

    f_a = m-fold primitive of (1 - |a|^2)^alpha (1 - conj(a) t)^-(2 alpha + m - 1)
    g_a = m-fold primitive of the same kernel times (a - t) / (1 - conj(a) t)

Their m-th derivatives have closed forms (`fa_deriv_closed`, `ga_deriv_closed`);
the series forms are needed whenever lower derivatives or Bloch norms enter.

Every `PowerSeries` carries a majorant |c_n| <= M * prod_i (n + e_i) * t**n valid
for all n above the truncation order, which survives differentiation and
integration exactly and yields a rigorous tail bound on any disk |z| <= r < 1/t.
"""

import csv
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .errors import TruncationError
from .symbols import SpaceParams

ORDER_CAP = 20000
TAIL_DELTA = 0.05


# ---------------------------------------------------------------- Gamma ratios

@dataclass(frozen=True)
class GammaRatio:
    """gamma_k = Gamma(k + base) / (Gamma(base) k!), k = 0..N."""

    base: float
    values: np.ndarray

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def partial_sums(self) -> np.ndarray:
        """S_k = sum_{l<k} gamma_l for k = 0..N+1 (S_0 = 0)."""
        return np.concatenate([[0.0], np.cumsum(self.values)])


def _gamma_values(base: float, N: int) -> np.ndarray:
    k = np.arange(N, dtype=float)
    return np.cumprod(np.concatenate([[1.0], (k + base) / (k + 1)]))


def gamma_ratios(params: SpaceParams, N: int) -> GammaRatio:
    """Binomial-series coefficients of (1 - x)^-(2 alpha + m - 1), by recurrence."""
    if N < 0:
        raise ValueError("order must be nonnegative")
    base = params.kernel_exp
    return GammaRatio(base, _gamma_values(base, N))


def _falling_ratio(m: int, K: int) -> np.ndarray:
    """k! / (k + m)! for k = 0..K via the recurrence ratio (k + 1) / (k + m + 1)."""
    k = np.arange(K, dtype=float)
    return np.cumprod(np.concatenate([[1.0 / math.factorial(m)], (k + 1) / (k + m + 1)]))


# ---------------------------------------------------------------- power series

@dataclass(frozen=True)
class Majorant:
    """|c_n| <= M * prod(n + e for e in offsets) * t**n for every n > N."""

    M: float = 0.0
    t: float = 0.0
    offsets: Tuple[float, ...] = ()

    def _log_term(self, n):
        n = np.asarray(n, dtype=float)
        out = math.log(self.M) + np.zeros_like(n)
        for e in self.offsets:
            out = out + np.log(n + e)
        return out

    def tail(self, N: int, r: float) -> float:
        """Rigorous bound on sum_{n>N} M prod(n+e) (t r)^n."""
        if self.t == 0.0 or r == 0.0:
            return 0.0
        q0 = self.t * r
        if q0 >= 1.0:
            return math.inf
        if self.M == 0.0:  # constant underflowed; the tail is below the double range
            return 0.0
        lq = math.log(q0)
        d = self.offsets

        def log_ratio(n):
            return sum(math.log((n + 1 + e) / (n + e)) for e in d) + lq

        K = N + 1
        if log_ratio(K) >= 0:
            lo, hi = K, K + 1
            while log_ratio(hi) >= 0:
                lo, hi = hi, hi + 2 * (hi - K + 1)
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if log_ratio(mid) >= 0:
                    lo = mid
                else:
                    hi = mid
            K = hi
        n = np.arange(N + 1, K + 1, dtype=float)
        logs = self._log_term(n) + n * lq
        head = float(np.sum(np.exp(logs[:-1])))
        last = float(np.exp(logs[-1])) / (-math.expm1(log_ratio(K)))
        return head + last

    def derivative(self) -> "Majorant":
        if self.M == 0.0:
            return Majorant()
        return Majorant(self.M * self.t, self.t,
                        tuple(e + 1 for e in self.offsets) + (1.0,))

    def integral(self) -> "Majorant":
        if self.M == 0.0:
            return Majorant()
        return Majorant(self.M / self.t, self.t, tuple(e - 1 for e in self.offsets))


@dataclass(frozen=True)
class PowerSeries:
    """sum_{n <= N} c_n z^n plus a majorant controlling the omitted tail."""

    coefficients: np.ndarray
    majorant: Majorant = field(default_factory=Majorant)

    @classmethod
    def polynomial(cls, coeffs) -> "PowerSeries":
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        return cls(c, Majorant())

    @classmethod
    def monomial(cls, n: int, c: complex = 1.0) -> "PowerSeries":
        coeffs = np.zeros(n + 1, dtype=complex)
        coeffs[n] = c
        return cls(coeffs, Majorant())

    @property
    def N(self) -> int:
        return len(self.coefficients) - 1

    @property
    def radius_bound(self) -> float:
        return math.inf if self.majorant.t == 0 else 1.0 / self.majorant.t

    def tail_bound(self, r: float) -> float:
        return self.majorant.tail(self.N, r)

    def derivative(self, k: int = 1) -> "PowerSeries":
        s = self
        for _ in range(k):
            c = s.coefficients
            if len(c) > 1:
                c = c[1:] * np.arange(1, len(c))
            elif s.majorant.M == 0.0:
                c = np.zeros(1, dtype=complex)
            else:
                raise ValueError("cannot differentiate past the truncation order")
            s = PowerSeries(c, s.majorant.derivative())
        return s

    def integral(self) -> "PowerSeries":
        c = self.coefficients
        out = np.concatenate([[0.0], c / np.arange(1, len(c) + 1)])
        return PowerSeries(out, self.majorant.integral())

    def __call__(self, z):
        return self.evaluate(z)

    def evaluate(self, z):
        """Value of the truncated sum (add tail_bound(|z|) for the true-sum error)."""
        z = np.asarray(z, dtype=complex)
        c = self.coefficients
        nz = np.flatnonzero(c)
        if len(nz) == 0:
            return np.zeros(z.shape, dtype=complex)
        if len(nz) <= 16:
            out = np.zeros(z.shape, dtype=complex)
            for n in nz:
                out = out + c[n] * z ** int(n)
            return out
        return np.polynomial.polynomial.polyval(z, c)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "re", "im"])
            for n, c in enumerate(self.coefficients):
                w.writerow([n, repr(float(c.real)), repr(float(c.imag))])


# ---------------------------------------------------------------- test functions

def _check_order(N: int, cap: int):
    if N > cap:
        raise TruncationError(f"requested order {N} exceeds the cap {cap}")


def _window_const(b: np.ndarray, lo: int, ratio_k0: int, delta: float) -> float:
    """max_{lo <= k <= max(lo, k0)} b_k / (1+delta)^k, a bound for all k >= lo."""
    hi = max(lo, ratio_k0)
    k = np.arange(lo, hi + 1)
    return float(np.exp(np.max(np.log(b[lo:hi + 1]) - k * math.log1p(delta))))


def _k0(s_eff: float, m: int, delta: float) -> int:
    # ratio (k + s_eff)/(k + m + 1) <= 1 + delta for k >= k0
    return max(0, math.ceil((s_eff - (1 + delta) * (m + 1)) / delta))


def _f_majorant(a: complex, params: SpaceParams, N: int, delta: float) -> Majorant:
    m, s = params.m, params.kernel_exp
    aa = abs(a)
    if aa == 0:
        return Majorant()
    lo = max(0, N - m + 1)
    k0 = _k0(s, m, delta)
    b = _gamma_values(s, max(lo, k0)) * _falling_ratio(m, max(lo, k0))
    C = _window_const(b, lo, k0, delta)
    t = (1 + delta) * aa
    S = (1 - aa * aa) ** params.alpha
    return Majorant(S * C * t ** (-m), t, ())


def _g_majorant(a: complex, params: SpaceParams, N: int, delta: float) -> Majorant:
    m, s = params.m, params.kernel_exp
    aa = abs(a)
    if aa == 0:
        return Majorant()
    lo = max(1, N - m + 1)
    s_eff = max(s, 1.0)
    k0 = _k0(s_eff, m, delta)
    K = max(lo, k0)
    bt = np.maximum(_gamma_values(s, K), 1.0) * _falling_ratio(m, K)
    C = _window_const(bt, lo, k0, delta)
    t = (1 + delta) * aa
    w = 1 - aa * aa
    S, S1 = w ** params.alpha, w ** (params.alpha + 1)
    return Majorant(C * (S * aa * aa + S1) / aa * t ** (-m), t, (float(-m),))


def fa_series(a: complex, params: SpaceParams, N: int, cap: int = ORDER_CAP,
              delta: float = TAIL_DELTA) -> PowerSeries:
    """Maclaurin coefficients of f_a through z^N (N is raised to at least m)."""
    a = complex(a)
    if not abs(a) < 1:
        raise ValueError("need |a| < 1")
    _check_order(N, cap)
    m = params.m
    N = max(N, m)
    K = N - m
    g = gamma_ratios(params, K).values
    k = np.arange(K + 1)
    S = (1 - abs(a) ** 2) ** params.alpha
    coeffs = np.zeros(N + 1, dtype=complex)
    coeffs[m:] = S * g * _falling_ratio(m, K) * a.conjugate() ** k
    return PowerSeries(coeffs, _f_majorant(a, params, N, delta))


def ga_series(a: complex, params: SpaceParams, N: int, cap: int = ORDER_CAP,
              delta: float = TAIL_DELTA) -> PowerSeries:
    """Maclaurin coefficients of g_a through z^N (N is raised to at least m + 1)."""
    a = complex(a)
    if not abs(a) < 1:
        raise ValueError("need |a| < 1")
    _check_order(N, cap)
    m = params.m
    N = max(N, m + 1)
    K = N - m
    gr = gamma_ratios(params, K)
    P = gr.partial_sums()[:K + 1]  # P_k = sum_{l<k} gamma_l
    k = np.arange(K + 1)
    w = 1 - abs(a) ** 2
    fr = _falling_ratio(m, K)
    ab = a.conjugate()
    first = a * w ** params.alpha * gr.values * fr * ab ** k
    second = np.zeros(K + 1, dtype=complex)
    second[1:] = w ** (params.alpha + 1) * fr[1:] * P[1:] * ab ** (k[1:] - 1)
    coeffs = np.zeros(N + 1, dtype=complex)
    coeffs[m:] = first - second
    return PowerSeries(coeffs, _g_majorant(a, params, N, delta))


def _kernel(a, z, params: SpaceParams):
    a = np.asarray(a, dtype=complex)
    z = np.asarray(z, dtype=complex)
    base = 1 - np.conj(a) * z
    # Re(base) > 0 on the disk, so the principal log never meets its cut
    return (1 - np.abs(a) ** 2) ** params.alpha * np.exp(-params.kernel_exp * np.log(base))


def fa_deriv_closed(a, z, params: SpaceParams):
    """f_a^(m)(z) = (1 - |a|^2)^alpha / (1 - conj(a) z)^(2 alpha + m - 1)."""
    return _kernel(a, z, params)


def ga_deriv_closed(a, z, params: SpaceParams):
    """g_a^(m)(z) = f_a^(m)(z) * (a - z) / (1 - conj(a) z)."""
    a = np.asarray(a, dtype=complex)
    z = np.asarray(z, dtype=complex)
    return _kernel(a, z, params) * (a - z) / (1 - np.conj(a) * z)


def choose_order(a: complex, params: SpaceParams, r_max: float, eps: float,
                 family: str = "f", derivative: int = 0, cap: int = ORDER_CAP,
                 delta: float = TAIL_DELTA) -> int:
    """Smallest N whose tail bound on |z| <= r_max is <= eps.

    `derivative` measures the tail of that derivative of the series instead.
    """
    a = complex(a)
    if not abs(a) * r_max < 1:
        raise ValueError("need |a| * r_max < 1")
    if family not in ("f", "g"):
        raise ValueError("family must be 'f' or 'g'")
    m = params.m
    n_min = max(m if family == "f" else m + 1, derivative)
    build = _f_majorant if family == "f" else _g_majorant

    def bound(N):
        maj = build(a, params, N, delta)
        for _ in range(derivative):
            maj = maj.derivative()
        return maj.tail(N - derivative, r_max)

    if bound(n_min) <= eps:
        return n_min
    if bound(cap) > eps:
        raise TruncationError(
            f"tail bound at order cap {cap} is {bound(cap):.3g} > {eps:g} "
            f"(|a| = {abs(a):.6g}, r = {r_max:.6g})")
    lo, hi = n_min, cap
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) <= eps:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------- monomials

def monomial_bloch_norm(n: int, alpha: float) -> float:
    """||z^n||_{B^alpha} = max_r n r^(n-1) (1 - r^2)^alpha, exact optimum."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 1.0
    r2 = (n - 1) / (n - 1 + 2 * alpha)
    return n * math.exp(0.5 * (n - 1) * math.log(r2) + alpha * math.log1p(-r2))
