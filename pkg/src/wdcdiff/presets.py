"""Named symbol-pair presets and the seeded regression family.

case1: C_phi1 - C_phi2                    (m = 0, u = 1)
case2: u1 C_phi1 - u2 C_phi2              (m = 0)
case3: C_phi1 D - C_phi2 D                (m = 1, u = 1)
case4: u1 C_phi1 D - u2 C_phi2 D          (m = 1)
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from .symbols import (ONE, Constant, Identity, MobiusTo, Monomial, Product,
                      Scale, SpaceParams, StandardPower, Sum, SymbolPair, WeightSpec)


@dataclass(frozen=True)
class Preset:
    name: str
    params: SpaceParams
    pair: SymbolPair
    description: str = ""


def _lens():
    # z (1 + z) / 2: touches the circle only at z = 1, with finite angular derivative
    return Product((Identity(), Sum((Constant(0.5), Scale(0.5, Identity())))))


def _automorphism(a: complex, lam: complex = 1.0):
    # lam (z - a) / (1 - conj(a) z)
    return Scale(-lam, MobiusTo(a))


def case1() -> Preset:
    return Preset("case1", SpaceParams(1.5, 0, StandardPower(0.5)),
                  SymbolPair(Identity(), ONE, _automorphism(-0.5), ONE),
                  "C_z - C_psi, psi(z) = (z + 0.5)/(1 + 0.5 z), B^1.5 -> H^inf_(1-|z|^2)^0.5")


def case2() -> Preset:
    return Preset("case2", SpaceParams(1.5, 0, StandardPower(0.5)),
                  SymbolPair(Identity(), Identity(), _automorphism(0.4j), Constant(0.5)),
                  "z C_z - 0.5 C_psi, psi(z) = (z - 0.4i)/(1 + 0.4i z)")


def case3() -> Preset:
    return Preset("case3", SpaceParams(1.0, 1, StandardPower(1.0)),
                  SymbolPair(Identity(), ONE, _automorphism(0.3), ONE),
                  "C_z D - C_psi D, psi(z) = (z - 0.3)/(1 - 0.3 z)")


def case4() -> Preset:
    return Preset("case4", SpaceParams(1.5, 1, StandardPower(1.5)),
                  SymbolPair(Identity(), Identity(), _lens(), Monomial(2)),
                  "z C_z D - z^2 C_{z(1+z)/2} D on B^1.5")


PRESETS = {"case1": case1, "case2": case2, "case3": case3, "case4": case4}

PARAM_CHOICES = ((1.0, 0), (1.0, 1), (1.5, 2), (0.75, 1))
# alpha + m - 1 = 0 is left to compact pairs: with v = 1 - |z|^2 every
# boundary quantity decays to 0 as slowly as (1 - r), which no finite grid settles
BOUNDARY_PARAM_CHOICES = ((1.0, 1), (1.5, 2), (0.75, 1))


def preset(name: str) -> Preset:
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def natural_weight(alpha: float, m: int) -> WeightSpec:
    """(1 - |z|^2)^(alpha+m-1), or (1 - |z|^2) when that exponent vanishes."""
    g = alpha + m - 1
    return StandardPower(g) if g > 0 else StandardPower(1.0)


def _poly_symbol(coeffs):
    terms = [Constant(complex(c)) if k == 0 else Scale(complex(c), Monomial(k))
             for k, c in enumerate(coeffs) if c != 0]
    return Sum(tuple(terms)) if len(terms) > 1 else terms[0]


def _compact_map(rng, bound=0.9):
    c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    c *= bound * rng.uniform(0.5, 1.0) / np.abs(c).sum()
    return _poly_symbol(np.round(c, 6))


def _bounded_multiplier(rng):
    c = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return _poly_symbol(np.round(c / np.abs(c).sum(), 6))


def random_pair(rng: np.random.Generator, index: int) -> Preset:
    """Even index: compact symbols (sup |phi| <= 0.9); odd: automorphism-based."""
    choices = PARAM_CHOICES if index % 2 == 0 else BOUNDARY_PARAM_CHOICES
    alpha, m = choices[int(rng.integers(len(choices)))]
    params = SpaceParams(alpha, m, natural_weight(alpha, m))
    if index % 2 == 0:
        pair = SymbolPair(_compact_map(rng), _bounded_multiplier(rng),
                          _compact_map(rng), _bounded_multiplier(rng))
        kind = "compact"
    else:
        def aut():
            # |a| <= 0.5 keeps the boundary distortion (1+|a|)/(1-|a|) at most 3
            a = complex(np.round(0.5 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform()), 6))
            lam = complex(np.round(np.exp(1j * rng.uniform(0, 2 * np.pi)), 6))
            lam /= abs(lam)
            return _automorphism(a, lam)
        pair = SymbolPair(aut(), _bounded_multiplier(rng), aut(), _bounded_multiplier(rng))
        kind = "automorphism"
    return Preset(f"random{index}", params, pair, f"{kind} pair, alpha={alpha}, m={m}")


def regression_family(seed: int = 0, n_random: int = 8) -> List[Preset]:
    """The four case presets followed by `n_random` seeded random pairs."""
    rng = np.random.default_rng(seed)
    fam = [f() for f in PRESETS.values()]
    fam += [random_pair(rng, i) for i in range(n_random)]
    return fam


def compact_pair(alpha=1.0, m=1) -> Preset:
    return Preset("compact", SpaceParams(alpha, m, natural_weight(alpha, m)),
                  SymbolPair(Scale(0.9, Identity()), ONE,
                             Sum((Constant(0.2), Scale(0.5, Monomial(2)))), Identity()),
                  "sup |phi_i| <= 0.9")


def identity_vs_zero(alpha=1.0, m=0, weight=None) -> Preset:
    """phi1 = z, u1 = 1 against phi2 = 0, u2 = 0 (a single weighted composition)."""
    return Preset("identity_vs_zero",
                  SpaceParams(alpha, m, weight or StandardPower(alpha)),
                  SymbolPair(Identity(), ONE, Constant(0), Constant(0)),
                  "D^m_{z,1} alone")


def identical_pair(alpha=1.0, m=1) -> Preset:
    phi = _automorphism(0.3j)
    return Preset("identical", SpaceParams(alpha, m, natural_weight(alpha, m)),
                  SymbolPair(phi, Identity(), phi, Identity()), "phi1 = phi2, u1 = u2")
