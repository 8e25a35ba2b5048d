import numpy as np
import pytest

from hessian_kk import expr
from hessian_kk.errors import ConfigError, DomainError
from hessian_kk.expr import ExpressionError
from hessian_kk.pairs import (
    GrowthPair,
    const_g,
    exp_critical_pair,
    expression_pair,
    linear_g,
    pair_from_config,
    poly_g,
    power_exp_pair,
    power_pair,
    zero_pair,
)


@pytest.mark.parametrize(
    "src, env, value",
    [
        ("1 + 2 * 3", {}, 7.0),
        ("-2^2", {}, -4.0),
        ("2^3^2", {}, 512.0),
        ("2^-1", {}, 0.5),
        ("(1 + z) / 4", {"z": 3.0}, 1.0),
        ("exp(log(2)) + abs(-3)", {}, 5.0),
        ("pi", {}, np.pi),
        ("x * r - z", {"x": 2.0, "r": 3.0, "z": 1.0}, 5.0),
        ("1.5e1 + .5", {}, 15.5),
    ],
)
def test_expression_values(src, env, value):
    assert expr.parse(src)(**env) == pytest.approx(value, rel=1e-15)


def test_expression_is_elementwise():
    e = expr.parse("abs(z)^2 * exp(z)")
    z = np.array([-1.0, -2.0])
    np.testing.assert_allclose(e(z=z), z**2 * np.exp(z), rtol=1e-15)
    assert e.variables == {"z"}


@pytest.mark.parametrize(
    "src, position",
    [("exp(", 4), ("1 +", 3), ("2 * y", 4), ("3 $ 4", 2), ("(1 + 2", 6), ("1 2", 2), ("log 2", 4)],
)
def test_expression_errors_point_at_token(src, position):
    with pytest.raises(ExpressionError) as info:
        expr.parse(src)
    assert info.value.position == position
    assert src in str(info.value)
    assert isinstance(info.value, ConfigError)


def test_missing_variable_and_non_string():
    with pytest.raises(ConfigError):
        expr.parse("z + 1")()
    with pytest.raises(ConfigError):
        expr.parse(3)


def test_g_families():
    t = np.array([0.0, -1.0, -2.0])
    np.testing.assert_array_equal(const_g(2.0)(t), 2.0)
    np.testing.assert_array_equal(linear_g(0.5)(t), [0.0, 0.5, 1.0])
    np.testing.assert_array_equal(poly_g([1.0, 0.0, 2.0])(t), [1.0, 3.0, 9.0])
    for bad in (lambda: const_g(-1), lambda: linear_g(-1), lambda: poly_g([1, -1])):
        with pytest.raises(DomainError):
            bad()


def test_pair_validation():
    with pytest.raises(DomainError):
        power_exp_pair(3, 4, 2.0)
    with pytest.raises(DomainError):
        power_exp_pair(3, 1, -1.0)
    with pytest.raises(DomainError):
        GrowthPair(2, 1, lambda t: t, lambda x, z: np.abs(z))  # g < 0 on t < 0
    with pytest.raises(DomainError):
        GrowthPair(2, 1, const_g(0), lambda x, z: np.zeros(np.shape(z)))  # not positive
    zero_pair(2, 1)  # positivity waived


def test_zero_extension_and_log_f():
    pair = power_exp_pair(3, 1, 2.0)
    x = np.zeros(3)
    assert pair.f_at(x, 1.0) == 0.0
    assert pair.log_f_at(x, 1.0) == -np.inf
    z = np.array([-0.5, -3.0, -100.0])
    np.testing.assert_allclose(pair.log_f_at(x, z[:2]), np.log(pair.f_at(x, z[:2])), rtol=1e-14)
    assert np.isfinite(pair.log_f_at(x, -1e6))


def test_exp_critical_log_form():
    pair = exp_critical_pair(2, 1, 4 * np.pi, b0=0.5, m=-1)
    z = -3.0
    assert pair.log_f_at(np.zeros(2), z) == pytest.approx(np.log(0.5) + 4 * np.pi * 3**2 - np.log(4), rel=1e-14)


def test_expression_pair_flags():
    p = expression_pair(3, 1, "abs(z)^2 * (1 + r)", "1")
    assert p.x_independent is False and p.radial is True
    q = expression_pair(3, 1, "abs(z)^2 * (2 + x)")
    assert q.radial is False
    with pytest.raises(ConfigError):
        expression_pair(3, 1, "abs(z)", "r")


def test_pair_from_config():
    p = pair_from_config(5, 2, {"family": "power-exp", "p": 5, "g": {"family": "linear", "a": 2}})
    assert p.describe() == {"name": "power-exp", "n": 5, "k": 2, "p": 5.0, "g": "linear", "g_a": 2}
    assert pair_from_config(2, 1, {"family": "power", "c": 3.0}).params["p"] == 1.0
    assert pair_from_config(2, 1, {"family": "exp-critical", "alpha0": 1.0}).name == "exp-critical"
    assert pair_from_config(2, 1, {"family": "zero"}).name == "zero"
    assert pair_from_config(2, 1, {"f": "abs(z)"}).name == "expression"
    for bad in ({"family": "nope"}, {"family": "power-exp"}, {"family": "power-exp", "p": -1},
                {"family": "power", "g": {"family": "weird"}}, {"family": "expression"}, "power"):
        with pytest.raises(ConfigError):
            pair_from_config(2, 1, bad)
