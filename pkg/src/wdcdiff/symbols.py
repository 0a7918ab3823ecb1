"""Holomorphic symbols on the disk: self-maps, multipliers, weights, space parameters.

Symbols are small immutable expression trees evaluated with numpy, so a
single call evaluates a whole grid of points.

>>> phi = parse_symbol("scale(0.5, mobius(0.2))")
>>> complex(eval_symbol(phi, 0.2))
0j
"""

import ast
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .errors import ConfigError, DomainError, SelfMapViolation, WeightError
from .grid import DiskGrid

SELF_MAP_MARGIN = 1e-12


def _check_disk(z):
    z = np.asarray(z, dtype=complex)
    if np.any(~np.isfinite(z)) or np.any(np.abs(z) >= 1.0):
        raise DomainError("point outside the open unit disk")
    return z


def _fmt(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    return repr(c).strip("()")


class SymbolExpr:
    """Base class of expression nodes; subclasses implement `evaluate`."""

    def evaluate(self, z: np.ndarray) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError

    def to_text(self) -> str:  # pragma: no cover
        raise NotImplementedError

    def __call__(self, z):
        return eval_symbol(self, z)

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class Identity(SymbolExpr):
    def evaluate(self, z):
        return np.asarray(z, dtype=complex)

    def to_text(self):
        return "identity"


@dataclass(frozen=True)
class Constant(SymbolExpr):
    c: complex

    def evaluate(self, z):
        return np.full(np.shape(z), complex(self.c), dtype=complex)

    def to_text(self):
        return f"constant({_fmt(self.c)})"


@dataclass(frozen=True)
class Scale(SymbolExpr):
    c: complex
    child: SymbolExpr

    def evaluate(self, z):
        return complex(self.c) * self.child.evaluate(z)

    def to_text(self):
        return f"scale({_fmt(self.c)}, {self.child.to_text()})"


@dataclass(frozen=True)
class Monomial(SymbolExpr):
    k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("monomial degree must be a positive integer")

    def evaluate(self, z):
        return np.asarray(z, dtype=complex) ** int(self.k)

    def to_text(self):
        return f"monomial({int(self.k)})"


@dataclass(frozen=True)
class MobiusTo(SymbolExpr):
    """The disk automorphism z -> (a - z) / (1 - conj(a) z) swapping 0 and a."""

    a: complex

    def __post_init__(self):
        if not abs(complex(self.a)) < 1:
            raise ValueError("mobius parameter must satisfy |a| < 1")

    def evaluate(self, z):
        a = complex(self.a)
        z = np.asarray(z, dtype=complex)
        return (a - z) / (1 - a.conjugate() * z)

    def to_text(self):
        return f"mobius({_fmt(self.a)})"


@dataclass(frozen=True)
class Sum(SymbolExpr):
    children: Tuple[SymbolExpr, ...]

    def evaluate(self, z):
        out = np.zeros(np.shape(z), dtype=complex)
        for ch in self.children:
            out = out + ch.evaluate(z)
        return out

    def to_text(self):
        return "sum(" + ", ".join(ch.to_text() for ch in self.children) + ")"


@dataclass(frozen=True)
class Product(SymbolExpr):
    children: Tuple[SymbolExpr, ...]

    def evaluate(self, z):
        out = np.ones(np.shape(z), dtype=complex)
        for ch in self.children:
            out = out * ch.evaluate(z)
        return out

    def to_text(self):
        return "product(" + ", ".join(ch.to_text() for ch in self.children) + ")"


@dataclass(frozen=True)
class Compose(SymbolExpr):
    """outer(inner(z)); inner must map the disk into itself."""

    outer: SymbolExpr
    inner: SymbolExpr

    def evaluate(self, z):
        return self.outer.evaluate(self.inner.evaluate(z))

    def to_text(self):
        return f"compose({self.outer.to_text()}, {self.inner.to_text()})"


ONE = Constant(1.0)
ZERO = Constant(0.0)


def eval_symbol(e: SymbolExpr, z):
    """Evaluate `e` at z (scalar or array); raises DomainError unless |z| < 1."""
    z = _check_disk(z)
    return e.evaluate(z)


@dataclass(frozen=True)
class SelfMapVerdict:
    accepted: bool
    max_modulus: float
    witness: complex


def validate_self_map(e: SymbolExpr, grid: DiskGrid, margin: float = SELF_MAP_MARGIN,
                      raise_on_violation: bool = True) -> SelfMapVerdict:
    """Check max |e(z)| < 1 - margin over the grid and report the maximiser."""
    if grid.size == 0:
        raise ValueError("empty grid")
    mod = np.abs(e.evaluate(grid.points))
    if np.any(np.isnan(mod)):
        idx = int(np.flatnonzero(np.isnan(mod))[0])
        verdict = SelfMapVerdict(False, float("nan"), complex(grid.points[idx]))
    else:
        idx = int(np.argmax(mod))
        verdict = SelfMapVerdict(bool(mod[idx] < 1.0 - margin), float(mod[idx]),
                                 complex(grid.points[idx]))
    if not verdict.accepted and raise_on_violation:
        raise SelfMapViolation(
            f"{e.to_text()} reaches |phi| = {verdict.max_modulus:.6g} at {verdict.witness}",
            witness=verdict.witness, max_modulus=verdict.max_modulus)
    return verdict


# ---------------------------------------------------------------- weights

@dataclass(frozen=True)
class WeightSpec:
    """Radial weight v(z).

    kind "power": v = (1 - |z|^2)**beta; "one": v = 1;
    "radial": v = sum_i coeffs[i] * (1 - |z|^2)**i.
    """

    kind: str
    beta: float = 0.0
    coeffs: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind == "power" and not self.beta > 0:
            raise ValueError("StandardPower needs beta > 0")
        if self.kind == "radial" and not self.coeffs:
            raise ValueError("CustomRadial needs at least one coefficient")
        if self.kind not in ("power", "one", "radial"):
            raise ValueError(f"unknown weight kind {self.kind!r}")

    def evaluate(self, z) -> np.ndarray:
        t = 1.0 - np.abs(np.asarray(z)) ** 2
        if self.kind == "power":
            return t ** self.beta
        if self.kind == "one":
            return np.ones(np.shape(t))
        v = np.polynomial.polynomial.polyval(t, np.asarray(self.coeffs, dtype=float))
        if np.any(v <= 0):
            raise WeightError(f"{self.to_text()} is not positive on the disk")
        return v

    def to_text(self) -> str:
        if self.kind == "power":
            return f"standard({self.beta!r})"
        if self.kind == "one":
            return "one"
        return "radial(" + ", ".join(repr(float(c)) for c in self.coeffs) + ")"


def StandardPower(beta: float) -> WeightSpec:
    return WeightSpec("power", beta=float(beta))


def ConstantOne() -> WeightSpec:
    return WeightSpec("one")


def CustomRadial(*coeffs: float) -> WeightSpec:
    return WeightSpec("radial", coeffs=tuple(float(c) for c in coeffs))


def eval_weight(w: WeightSpec, z) -> np.ndarray:
    z = _check_disk(z)
    return w.evaluate(z)


@dataclass(frozen=True)
class SpaceParams:
    """Source space B^alpha, derivative order m, target weight v."""

    alpha: float
    m: int
    weight: WeightSpec

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if int(self.m) != self.m or self.m < 0:
            raise ValueError("m must be a nonnegative integer")
        if not 2 * self.alpha + self.m - 1 > 0:
            raise ValueError("need 2*alpha + m - 1 > 0 for the test functions")

    @property
    def t_exp(self) -> float:
        """alpha + m - 1: exponent of the T-quotient and of the n-th power factor."""
        return self.alpha + self.m - 1

    @property
    def kernel_exp(self) -> float:
        """2 alpha + m - 1: exponent of the test-function kernel."""
        return 2 * self.alpha + self.m - 1


@dataclass(frozen=True)
class SymbolPair:
    phi1: SymbolExpr
    u1: SymbolExpr
    phi2: SymbolExpr
    u2: SymbolExpr

    def validate(self, grid: DiskGrid) -> Tuple[SelfMapVerdict, SelfMapVerdict]:
        return validate_self_map(self.phi1, grid), validate_self_map(self.phi2, grid)

    @property
    def is_identical(self) -> bool:
        return self.phi1 == self.phi2 and self.u1 == self.u2

    def to_dict(self) -> dict:
        return {k: getattr(self, k).to_text() for k in ("phi1", "u1", "phi2", "u2")}


# ---------------------------------------------------------------- parsing

_NULLARY = {"identity": Identity, "id": Identity, "z": Identity}


def _number(node) -> complex:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)) \
            and not isinstance(node.value, bool):
        return complex(node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _number(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult)):
        left, right = _number(node.left), _number(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        return left * right
    raise ConfigError(f"expected a number, got {ast.unparse(node)!r}")


def _simplify(c: complex) -> Union[float, complex]:
    return c.real if c.imag == 0 else c


def _build(node) -> SymbolExpr:
    if isinstance(node, ast.Name):
        if node.id in _NULLARY:
            return _NULLARY[node.id]()
        raise ConfigError(f"unknown symbol {node.id!r}")
    if not isinstance(node, ast.Call):
        return Constant(_simplify(_number(node)))
    if not isinstance(node.func, ast.Name) or node.keywords:
        raise ConfigError(f"malformed call {ast.unparse(node)!r}")
    name, args = node.func.id, node.args
    try:
        if name in _NULLARY and not args:
            return _NULLARY[name]()
        if name == "constant" and len(args) == 1:
            return Constant(_simplify(_number(args[0])))
        if name == "scale" and len(args) == 2:
            return Scale(_simplify(_number(args[0])), _build(args[1]))
        if name == "monomial" and len(args) == 1:
            k = _number(args[0])
            if k.imag or k.real != int(k.real):
                raise ConfigError("monomial degree must be an integer")
            return Monomial(int(k.real))
        if name == "mobius" and len(args) == 1:
            return MobiusTo(_simplify(_number(args[0])))
        if name == "sum" and args:
            return Sum(tuple(_build(a) for a in args))
        if name == "product" and args:
            return Product(tuple(_build(a) for a in args))
        if name == "compose" and len(args) == 2:
            return Compose(_build(args[0]), _build(args[1]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown or mis-called constructor {ast.unparse(node)!r}")


def parse_symbol(text: str) -> SymbolExpr:
    """Parse e.g. ``mobius(0.5)``, ``scale(0.9, identity)``, ``sum(1, monomial(2))``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse symbol {text!r}: {exc.msg}") from exc
    return _build(tree.body)


def parse_weight(text: str) -> WeightSpec:
    """Parse ``standard(beta)``, ``one`` or ``radial(c0, c1, ...)``."""
    try:
        tree = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse weight {text!r}") from exc
    try:
        if isinstance(tree, ast.Name) and tree.id == "one":
            return ConstantOne()
        if isinstance(tree, ast.Call) and isinstance(tree.func, ast.Name):
            vals = [_number(a) for a in tree.args]
            if any(v.imag for v in vals):
                raise ConfigError("weight parameters must be real")
            vals = [v.real for v in vals]
            if tree.func.id == "standard" and len(vals) == 1:
                return StandardPower(vals[0])
            if tree.func.id == "one" and not vals:
                return ConstantOne()
            if tree.func.id == "radial" and vals:
                return CustomRadial(*vals)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown weight {text!r}")
