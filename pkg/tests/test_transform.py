import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import hessian_kk as hk
from hessian_kk.errors import DomainError, OutOfRangeError, OverflowCapError
from hessian_kk.pairs import const_g, linear_g, poly_g, power_exp_pair, power_pair, zero_pair
from hessian_kk.radial import RadialProfile, lobatto_nodes
from hessian_kk.transform import Transform, get_transform, log_tail_integrals


@pytest.fixture(scope="module")
def unit():
    return power_exp_pair(3, 2, 2.0)  # g = 1


def test_big_g_examples(unit):
    assert hk.big_g(unit, -3.0) == pytest.approx(3.0, rel=1e-13)
    assert hk.big_g(zero_pair(2, 1), -7.0) == 0.0
    lin = power_exp_pair(3, 1, 2.0, g=linear_g(1.0))
    assert hk.big_g(lin, -2.0) == pytest.approx(2.0, rel=1e-13)
    assert get_transform(unit).G(0.0) == 0.0


def test_a_g_examples(unit):
    # g = 1: A(s) = 1 - e^{-s}
    assert hk.a_g(unit, -1.0) == pytest.approx(1 - np.e, rel=1e-13)
    s = np.array([-3.5, -1.0, -0.25])
    # identity up to the roundoff of the tabulated interpolant
    np.testing.assert_allclose(hk.a_g(zero_pair(2, 1), s), s, rtol=4e-15)
    assert hk.a_g(unit, 0.0) == 0.0


def test_a_g_inv_examples(unit):
    assert hk.a_g_inv(unit, 1 - np.e) == pytest.approx(-1.0, rel=1e-13)
    v = np.array([-2.0, -0.5])
    np.testing.assert_allclose(hk.a_g_inv(zero_pair(2, 1), v), v, rtol=4e-15)
    # analytic inverse -log(1 - v)
    v = -np.geomspace(1e-8, 1e6, 30)
    np.testing.assert_allclose(hk.a_g_inv(unit, v), -np.log1p(-v), rtol=1e-13)


def test_roundtrip_on_random_points():
    rng = np.random.default_rng(0)
    for g in (const_g(1.0), linear_g(0.5), poly_g([0.2, 0.1, 0.05])):
        tr = get_transform(power_exp_pair(3, 1, 2.0, g=g))
        s = -rng.uniform(0, 20, 100)
        s = s[s >= tr.floor]
        back = tr.A_inv(tr.A(s))
        assert np.all(np.abs(back - s) <= 1e-12 * (1 + np.abs(s)))


def test_transform_matches_direct_quadrature():
    rng = np.random.default_rng(1)
    pair = power_exp_pair(3, 1, 2.0, g=poly_g([0.3, 0.2, 0.1]))
    tr = get_transform(pair)
    from scipy.integrate import quad

    for s in -rng.uniform(0.01, 6, 10):
        G_ref = quad(lambda t: 0.3 - 0.2 * t + 0.1 * t * t, s, 0, epsabs=0, epsrel=2e-14)[0]
        assert tr.G(s) == pytest.approx(G_ref, rel=1e-12)
        assert tr.G_exact(s) == pytest.approx(G_ref, rel=1e-12)
        A_ref = -quad(lambda t: np.exp(tr.G_exact(t)), s, 0, epsabs=0, epsrel=1e-13)[0]
        assert tr.A(s) == pytest.approx(A_ref, rel=1e-11)


def test_monotone_and_below_identity():
    for g in (const_g(1.0), linear_g(1.0), const_g(0.0)):
        tr = get_transform(power_exp_pair(3, 1, 2.0, g=g))
        s = np.linspace(max(tr.floor, -30), 0, 2000)
        A = tr.A(s)
        assert np.all(np.diff(A) > 0)
        assert np.all(A <= s + 4e-15 * np.abs(s))


def test_h_closed_form_points():
    for p in (2, 3):
        tr = get_transform(power_exp_pair(3, 1, float(p)))
        for v in (-0.5, -1.0, -2.0):
            assert tr.h(np.zeros(3), v) == pytest.approx((-v) ** p, rel=1e-12)


def test_h_trivial_cases():
    pair = power_pair(3, 1, 2.0, 3.0)  # g = 0
    z = np.array([-2.0, -0.3])
    np.testing.assert_allclose(hk.transformed_h(pair)(np.zeros(3), z), pair.f_at(np.zeros(3), z), rtol=1e-14)
    assert np.all(hk.transformed_h(zero_pair(3, 1, g=const_g(1.0)))(np.zeros(3), z) == 0)
    assert hk.transformed_h(pair)(np.zeros(3), 0.0) == 0.0
    assert hk.transformed_h(pair)(np.zeros(3), 1.0) == 0.0


def test_ode_residual_examples(unit):
    # A' comes from the A table and A'' from the G table, so the
    # cancellation is to table accuracy rather than exact
    assert hk.ode_residual(power_exp_pair(3, 2, 2.0), -1.0, relative=True) < 1e-12
    assert np.all(hk.ode_residual(zero_pair(3, 2), np.array([-1.0, -5.0])) == 0)


def test_range_errors(unit):
    tr = Transform(zero_pair(2, 1), s_min=-10.0)
    with pytest.raises(OutOfRangeError):
        tr.A_inv(-11.0)
    with pytest.raises(OverflowCapError):
        get_transform(unit).A(-1000.0)
    with pytest.raises(DomainError):
        tr.A(1.0)
    with pytest.raises(DomainError):
        Transform(zero_pair(2, 1), s_min=1.0)


def test_overflow_cap_is_reported():
    tr = Transform(power_exp_pair(3, 1, 2.0), s_min=-2000.0)
    assert tr.overflow_at is not None and -720 < tr.floor < -680


def test_log_tail_integrals_closed_forms(unit):
    z = -np.geomspace(2.0**-39, 2.0**39, 40)
    G, logA = log_tail_integrals(unit, z)
    np.testing.assert_allclose(G, -z, rtol=1e-14)
    # log(e^{|z|} - 1)
    ref = -z + np.log(-np.expm1(z))
    np.testing.assert_allclose(logA, ref, rtol=1e-14)
    G0, logA0 = log_tail_integrals(zero_pair(2, 1), z)
    np.testing.assert_array_equal(G0, 0.0)
    np.testing.assert_allclose(logA0, np.log(-z), rtol=1e-14, atol=1e-14)


def test_verify_equivalence_g_zero_matches_solver():
    # u = v when g = 0: both residuals coincide
    pair = power_pair(3, 1, 1.0, 2.0)
    out = hk.solve_transformed_and_map(pair, N=64)
    assert out["report"]["s_min"] < -50  # centre lies beyond the default interval
    rep = out["report"]
    np.testing.assert_allclose(out["u"].values, out["v"].values, rtol=0, atol=1e-14)
    np.testing.assert_allclose(rep["residuals"], rep["transformed_residuals"], rtol=1e-6, atol=1e-13)


def test_verify_equivalence_zero_profile():
    r = lobatto_nodes(64)
    v = RadialProfile(r, np.zeros_like(r), np.zeros_like(r), 3, 1)
    rep = hk.verify_equivalence(zero_pair(3, 1, g=const_g(1.0)), v)
    assert rep["max_residual"] == 0


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=3), st.integers(1, 3))
def test_ode_residual_property(coeffs, k):
    pair = power_exp_pair(4, k, 2.0, g=poly_g(coeffs))
    s = -np.linspace(1e-3, 3.0, 25)
    assert np.max(hk.ode_residual(pair, s, relative=True)) < 1e-10
