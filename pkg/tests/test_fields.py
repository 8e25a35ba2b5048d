from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hessian_kk import fields
from hessian_kk.errors import DomainError, NumericError
from hessian_kk.fields import (
    RadialFunction,
    ScalarField,
    ScalarMap1D,
    check_derivatives,
    compose,
    cubic_map,
    exp_map,
    gradient,
    hessian,
    hk_of_field,
    lemma1_residual,
    polynomial_field,
    radial_field,
    random_polynomial_field,
    sk_of_field,
)


def half_norm_sq(n):
    return ScalarField(n, lambda x: 0.5 * (x @ x - 1.0), lambda x: np.array(x, dtype=float), lambda x: np.eye(n))


def test_gradient_examples():
    sq = ScalarField(1, lambda x: x[0] ** 2)
    np.testing.assert_allclose(gradient(sq, [3.0]), [6.0], rtol=1e-8)
    const = ScalarField(3, lambda x: 2.5)
    np.testing.assert_allclose(gradient(const, [0.1, 0.2, 0.3]), 0.0, atol=1e-12)
    prod = ScalarField(2, lambda x: x[0] * x[1])
    np.testing.assert_allclose(gradient(prod, [1.0, 1.0]), [1.0, 1.0], rtol=1e-8)


def test_hessian_examples():
    np.testing.assert_allclose(hessian(ScalarField(3, lambda x: 0.5 * x @ x), np.ones(3)), np.eye(3), atol=1e-6)
    np.testing.assert_allclose(hessian(ScalarField(2, lambda x: 3 * x[0] - x[1] + 1), [0.4, 2.0]), 0.0, atol=1e-6)
    H = hessian(ScalarField(2, lambda x: x[0] ** 2 * x[1]), [1.0, 1.0])
    np.testing.assert_allclose(H, [[2, 2], [2, 0]], atol=1e-6)
    np.testing.assert_array_equal(H, H.T)


def test_sk_of_quadratic_is_binomial():
    rng = np.random.default_rng(0)
    for n in range(1, 6):
        u = half_norm_sq(n)
        for k in range(1, n + 1):
            assert sk_of_field(u, rng.normal(size=n), k) == comb(n, k)


def test_constant_field_has_zero_operators():
    u = ScalarField(3, lambda x: -1.0, lambda x: np.zeros(3), lambda x: np.zeros((3, 3)))
    for k in (1, 2, 3):
        assert sk_of_field(u, [0.2, 0.1, 0.0], k) == 0
        assert hk_of_field(u, [0.2, 0.1, 0.0], k) == 0


def test_h1_of_field_is_squared_gradient():
    rng = np.random.default_rng(1)
    for _ in range(50):
        n = int(rng.integers(1, 5))
        u = random_polynomial_field(n, 3, rng)
        x = rng.uniform(-1, 1, n)
        g = gradient(u, x)
        assert hk_of_field(u, x, 1) == pytest.approx(float(g @ g), rel=1e-12, abs=1e-14)


def test_identity_map_residual_is_zero():
    A = ScalarMap1D(lambda t: t, lambda t: 1.0, lambda t: 0.0)
    rng = np.random.default_rng(2)
    u = random_polynomial_field(3, 4, rng)
    for k in (1, 2, 3):
        assert lemma1_residual(A, u, rng.uniform(-1, 1, 3), k) == 0


def test_one_dimensional_exponential_chain_rule():
    # (e^u)'' = e^u (u'' + u'^2) for u = sin in one dimension, both sides by hand
    u = ScalarField(1, lambda x: np.sin(x[0]), lambda x: np.array([np.cos(x[0])]), lambda x: np.array([[-np.sin(x[0])]]))
    A = ScalarMap1D(np.exp, np.exp, np.exp)
    for x0 in (-1.0, 0.3, 2.0):
        hand = np.exp(np.sin(x0)) * (-np.sin(x0) + np.cos(x0) ** 2)
        assert sk_of_field(compose(A, u), [x0], 1) == pytest.approx(hand, rel=1e-14)
        assert lemma1_residual(A, u, [x0], 1) < 1e-6


def test_identity_with_finite_difference_composite():
    # the composite is differentiated numerically, never through the chain rule
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(30):
        n = int(rng.integers(2, 5))
        k = int(rng.integers(1, n + 1))
        u = random_polynomial_field(n, 3, rng, scale=0.5)
        A = cubic_map()
        x = rng.uniform(-0.8, 0.8, n)
        fd = ScalarField(n, lambda y, u=u: A.func(u.func(y)))
        lhs = sk_of_field(fd, x, k)
        a1, a2 = A.d1(u(x)), A.d2(u(x))
        rhs = a1**k * sk_of_field(u, x, k) + a1 ** (k - 1) * a2 * hk_of_field(u, x, k)
        worst = max(worst, abs(lhs - rhs) / (abs(lhs) + 1))
    assert worst < 1e-4


def test_polynomial_derivatives_match_differences():
    rng = np.random.default_rng(4)
    u = random_polynomial_field(3, 4, rng)
    assert check_derivatives(u, rng.uniform(-1, 1, (10, 3))) < 1e-4
    bad = ScalarField(2, lambda x: x @ x, lambda x: x, lambda x: np.eye(2))
    with pytest.raises(NumericError):
        check_derivatives(bad, [[0.5, 0.5]])


def test_field_validation():
    with pytest.raises(DomainError):
        ScalarField(0, lambda x: 0.0)
    with pytest.raises(DomainError):
        ScalarField(2, lambda x: 0.0, grad=lambda x: x)
    with pytest.raises(DomainError):
        ScalarField(2, lambda x: 0.0, step=-1.0)
    with pytest.raises(DomainError):
        gradient(half_norm_sq(2), [1.0, 2.0, 3.0])
    with pytest.raises(NumericError):
        ScalarField(1, lambda x: np.inf)([0.0])


def test_radial_field_examples():
    quad = RadialFunction(lambda r: 0.5 * (r**2 - 1), lambda r: r, lambda r: 1.0 + 0 * r)
    f = radial_field(quad, 4)
    for x in ([0.0, 0, 0, 0], [0.3, -0.2, 0.1, 0.5]):
        np.testing.assert_allclose(f.hess(np.array(x)), np.eye(4), atol=1e-14)
    c = 1.7
    sq = radial_field(RadialFunction(lambda r: c * r**2, lambda r: 2 * c * r, lambda r: 2 * c + 0 * r), 3)
    x = np.array([0.2, -0.4, 0.1])
    np.testing.assert_allclose(sq.grad(x), 2 * c * x, rtol=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_radial_hessian_eigenstructure(n, seed):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=3)
    prof = RadialFunction(
        lambda r: c[0] * r**2 + c[1] * r**4 + c[2] * r**3,
        lambda r: 2 * c[0] * r + 4 * c[1] * r**3 + 3 * c[2] * r**2,
        lambda r: 2 * c[0] + 12 * c[1] * r**2 + 6 * c[2] * r,
    )
    r = float(rng.uniform(0.05, 1.0))
    d = rng.normal(size=n)
    d /= np.linalg.norm(d)
    H = radial_field(prof, n).hess(r * d)
    np.testing.assert_allclose(H @ d, prof.d2u(r) * d, atol=1e-12 * (1 + abs(prof.d2u(r))))
    w = rng.normal(size=n)
    w -= (w @ d) * d
    np.testing.assert_allclose(H @ w, prof.du(r) / r * w, atol=1e-12 * (1 + abs(prof.du(r) / r)) * np.linalg.norm(w))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(0, 2**32 - 1), st.sampled_from(["cubic", "exp"]))
def test_composition_identity_property(n, seed, which):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, n + 1))
    u = random_polynomial_field(n, int(rng.integers(1, 5)), rng, scale=0.5)
    A = cubic_map() if which == "cubic" else exp_map(float(rng.uniform(0.5, 2)))
    assert lemma1_residual(A, u, rng.uniform(-1, 1, n), k, relative=True) < 1e-6
