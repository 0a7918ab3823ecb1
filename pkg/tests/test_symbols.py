import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wdcdiff.errors import ConfigError, DomainError, SelfMapViolation
from wdcdiff.grid import DiskGrid
from wdcdiff.symbols import (Compose, Constant, ConstantOne, CustomRadial, Identity,
                             MobiusTo, Monomial, Product, Scale, SpaceParams, StandardPower,
                             Sum, SymbolPair, parse_symbol, parse_weight, validate_self_map)

disk_point = st.builds(lambda r, t: r * np.exp(1j * t),
                       st.floats(0, 0.95), st.floats(0, 2 * np.pi))


def test_basic_evaluation():
    assert Identity()(0.3 + 0.4j) == pytest.approx(0.3 + 0.4j)
    assert MobiusTo(0.5)(0.5) == pytest.approx(0)
    assert MobiusTo(0.5)(0) == pytest.approx(0.5)
    assert Sum((Constant(1), Monomial(2)))(0.5) == pytest.approx(1.25)
    assert Product((Identity(), Scale(2, Identity())))(0.5) == pytest.approx(0.5)


def test_domain_checked():
    with pytest.raises(DomainError):
        Identity()(1.0)
    with pytest.raises(DomainError):
        Identity()(np.nan)


@settings(max_examples=50, deadline=None)
@given(a=disk_point, z=disk_point)
def test_mobius_is_involution(a, z):
    f = MobiusTo(a)
    assert abs(f(f(z)) - z) < 1e-9


@settings(max_examples=50, deadline=None)
@given(a=disk_point, z=disk_point)
def test_compose_matches_nesting(a, z):
    outer, inner = Sum((Constant(0.1), Scale(0.5, Monomial(2)))), MobiusTo(a)
    assert Compose(outer, inner)(z) == pytest.approx(outer(inner(z)))


def test_validate_self_map():
    g = DiskGrid(8, 4)
    v = validate_self_map(Scale(0.5, Identity()), g)
    assert v.accepted and v.max_modulus == pytest.approx(0.5 * g.r_max)
    assert validate_self_map(MobiusTo(0.7), g).accepted
    with pytest.raises(SelfMapViolation) as exc:
        validate_self_map(Constant(1.2), g)
    assert exc.value.max_modulus == pytest.approx(1.2)
    assert not validate_self_map(Constant(1.2), g, raise_on_violation=False).accepted


def test_weights():
    assert StandardPower(1).evaluate(0) == 1
    assert StandardPower(2).evaluate(np.sqrt(0.5)) == pytest.approx(0.25)
    assert np.all(ConstantOne().evaluate(np.array([0, 0.9j])) == 1)
    assert CustomRadial(1, 2).evaluate(0.0) == pytest.approx(3)
    with pytest.raises(ValueError):
        StandardPower(0)


def test_space_params_validation():
    p = SpaceParams(1.5, 2, StandardPower(1))
    assert p.t_exp == 2.5 and p.kernel_exp == 4
    with pytest.raises(ValueError):
        SpaceParams(0.25, 0, StandardPower(1))  # 2 alpha + m - 1 <= 0
    with pytest.raises(ValueError):
        SpaceParams(1, -1, StandardPower(1))


def test_parse_round_trip():
    for text in ("identity", "mobius(0.3)", "scale(-1, mobius(0.3))",
                 "sum(0.2, scale(0.5, monomial(2)))", "compose(monomial(2), mobius(0.1j))",
                 "product(identity, sum(0.5, scale(0.5, identity)))"):
        e = parse_symbol(text)
        assert parse_symbol(e.to_text()) == e
    assert parse_symbol("1") == Constant(1.0)
    assert parse_weight("standard(1.5)") == StandardPower(1.5)
    assert parse_weight("one") == ConstantOne()


@pytest.mark.parametrize("text", ["foo", "mobius(2)", "monomial(1.5)", "scale(1)", "1 +"])
def test_parse_errors(text):
    with pytest.raises(ConfigError):
        parse_symbol(text)


def test_pair_identity_flag():
    phi = MobiusTo(0.3j)
    assert SymbolPair(phi, Identity(), phi, Identity()).is_identical
    assert not SymbolPair(phi, Identity(), Identity(), Identity()).is_identical
