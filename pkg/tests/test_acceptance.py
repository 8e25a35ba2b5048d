"""Acceptance gate: the ten end-to-end criteria at their stated tolerances.

Each test prints one ``PASS`` / ``FAIL`` line (also under pytest, where the
line bypasses output capture).  Run ``python3 tests/test_acceptance.py`` for
the same lines without pytest.
"""
import sys
import time
from math import comb, pi

import numpy as np
import pytest
from scipy.special import jn_zeros

import hessian_kk as hk
from hessian_kk import fields, growth, minors, radial
from hessian_kk.pairs import (
    const_g,
    exp_critical_pair,
    expression_pair,
    linear_g,
    poly_g,
    power_exp_pair,
    power_pair,
)

J01_SQ = jn_zeros(0, 1)[0] ** 2


def _report(capsys, number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}: {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    return ok


# -- 1 -----------------------------------------------------------------------
def criterion_1(capsys=None):
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    worst, cases = 0.0, set()
    for _ in range(100):
        n = int(rng.integers(2, 6))
        k = int(rng.integers(1, n + 1))
        u = fields.random_polynomial_field(n, int(rng.integers(1, 5)), rng, scale=0.5)
        if rng.random() < 0.5:
            A, name = fields.cubic_map(), "cubic"
        else:
            A, name = fields.exp_map(float(rng.uniform(0.5, 2.0))), "exp"
        x = rng.uniform(-1, 1, size=n)
        worst = max(worst, fields.lemma1_residual(A, u, x, k, relative=True))
        cases.add(name)
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-6 and elapsed < 30 and cases == {"cubic", "exp"}
    return _report(capsys, 1, "composition identity suite", ok,
                   f"max relative residual {worst:.2e} (< 1e-6), {elapsed:.2f} s (< 30 s)")


# -- 2 -----------------------------------------------------------------------
def criterion_2(capsys=None):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        grad = rng.normal(size=n)
        B = rng.normal(size=(n, n))
        hess = B + B.T
        exact = float(np.sum(grad**2))
        worst = max(worst, abs(minors.h_k(grad, hess, 1) - exact) / max(exact, 1.0))
    ok = worst < 1e-12
    return _report(capsys, 2, "H_1 equals |grad|^2", ok, f"max deviation {worst:.2e} (< 1e-12)")


# -- 3 -----------------------------------------------------------------------
def criterion_3(capsys=None):
    v = np.linspace(-10.0, -0.01, 2001)
    x = np.zeros(5)
    worst = 0.0
    for p in (2, 3):
        for k in (1, 2):
            tr = hk.get_transform(power_exp_pair(5, k, p))
            worst = max(worst, float(np.max(np.abs(tr.h(x, v) - (-v) ** p))))
    ok = worst < 1e-8
    return _report(capsys, 3, "transformed h equals (-v)^p", ok, f"sup error {worst:.2e} (< 1e-8)")


# -- 4 -----------------------------------------------------------------------
def criterion_4(capsys=None):
    a2 = growth.alpha_n(2, 1)
    e = abs(a2 - 4 * pi)
    ks = (growth.k_star(3, 1), growth.k_star(5, 2))
    ok = e < 1e-12 and ks == (6, 15)
    return _report(capsys, 4, "constants", ok,
                   f"|alpha_2 - 4 pi| = {e:.1e} (< 1e-12), k*(3,1) = {ks[0]:g}, k*(5,2) = {ks[1]:g}")


# -- 5 -----------------------------------------------------------------------
def criterion_5(capsys=None):
    t0 = time.perf_counter()
    labels = {p: hk.nonexistence_scan(power_exp_pair(5, 2, p)) for p in (5, 14, 15)}
    elapsed = time.perf_counter() - t0
    zero_rel = labels[14].details["max_abs_relative"]
    got = {p: v.label for p, v in labels.items()}
    want = {5: "Mixed", 14: "NonnegativeWithZeros", 15: "StrictlyPositive"}
    ok = got == want and zero_rel < 1e-10 and elapsed < 5
    return _report(capsys, 5, "non-existence threshold", ok,
                   f"verdicts {got}, max |density|/scale at p=14 {zero_rel:.1e} (< 1e-10), "
                   f"{elapsed:.2f} s (< 5 s)")


# -- 6 -----------------------------------------------------------------------
def criterion_6(capsys=None):
    t0 = time.perf_counter()
    out = hk.solve_transformed_and_map(power_exp_pair(5, 2, 5), radii=np.linspace(0.05, 0.95, 19))
    elapsed = time.perf_counter() - t0
    rep = out["report"]
    out["u"].check_invariants(1e-8)
    ok = rep["max_residual"] < 1e-4 and elapsed < 60
    return _report(capsys, 6, "end-to-end solve and map back", ok,
                   f"original-equation residual {rep['max_residual']:.2e} (< 1e-4), "
                   f"u(0) = {rep['center_u']:.6f}, {elapsed:.2f} s (< 60 s)")


# -- 7 -----------------------------------------------------------------------
def criterion_7(capsys=None):
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, n + 1))
        c = rng.normal(size=4)
        prof = fields.RadialFunction(
            lambda r, c=c: c[0] + c[1] * r**2 + c[2] * r**4 + c[3] * r**6,
            lambda r, c=c: 2 * c[1] * r + 4 * c[2] * r**3 + 6 * c[3] * r**5,
            lambda r, c=c: 2 * c[1] + 12 * c[2] * r**2 + 30 * c[3] * r**4,
        )
        r = float(rng.uniform(0.01, 1.0))
        d = rng.normal(size=n)
        x = r * d / np.linalg.norm(d)
        full = fields.sk_of_field(fields.radial_field(prof, n), x, k)
        closed = radial.radial_sk(prof.du(r), prof.d2u(r), r, n, k)
        worst = max(worst, abs(full - closed) / max(abs(full), 1e-300))
    quad_err = 0.0
    for n in range(1, 7):
        for k in range(1, n + 1):
            r = np.linspace(0.0, 1.0, 11)
            quad_err = max(quad_err, float(np.max(np.abs(radial.radial_sk(r, np.ones_like(r), r, n, k) - comb(n, k)))))
    ok = worst <= 1e-8 and quad_err <= 1e-12
    return _report(capsys, 7, "radial S_k against the minor sum", ok,
                   f"max relative gap {worst:.2e} (<= 1e-8), (r^2-1)/2 error {quad_err:.1e} (<= 1e-12)")


# -- 8 -----------------------------------------------------------------------
def criterion_8(capsys=None):
    lam = hk.lambda1_ball(2, 1).value
    Lam = hk.big_lambda1(2, 1).value
    L4 = hk.big_lambda1(4, 2)
    e1 = abs(lam - J01_SQ) / J01_SQ
    e2 = abs(Lam - J01_SQ) / J01_SQ
    e3 = L4.agreement
    ok = e1 < 5e-3 and e2 < 1e-2 and e3 < 1e-2
    return _report(capsys, 8, "eigenvalue cross-checks", ok,
                   f"lambda_1(2,1) off j01^2 by {e1:.1e} (< 5e-3), Lambda_1(2,1) by {e2:.1e} (< 1e-2), "
                   f"Lambda_1(4,2) methods {L4.value:.6f} / {L4.cross_check:.6f} differ by {e3:.1e} (< 1e-2)")


# -- 9 -----------------------------------------------------------------------
def criterion_9(capsys=None):
    rng = np.random.default_rng(9)
    worst_rel, worst_abs = 0.0, 0.0
    for _ in range(50):
        g = poly_g(rng.uniform(0.0, 1.0, size=int(rng.integers(1, 4))))
        pair = power_exp_pair(5, int(rng.integers(1, 3)), 3.0, g=g)
        worst_rel = max(worst_rel, float(np.max(hk.ode_residual(pair, -rng.uniform(1e-3, 5.0, 20), relative=True))))
        worst_abs = max(worst_abs, float(np.max(hk.ode_residual(pair, -rng.uniform(1e-3, 1.0, 20)))))
    ok = worst_rel < 1e-10 and worst_abs < 1e-10
    return _report(capsys, 9, "change-of-variables ODE residual", ok,
                   f"max relative {worst_rel:.1e} on s in [-5, 0), max absolute {worst_abs:.1e} on s in [-1, 0) (< 1e-10)")


# -- 10 ----------------------------------------------------------------------
def random_pairs(rng, count=20):
    """Mixed families with random parameters; every pair is positive for z < 0."""
    gs = [lambda: const_g(float(rng.uniform(0, 2))), lambda: linear_g(float(rng.uniform(0, 1))),
          lambda: poly_g(rng.uniform(0, 0.5, size=3))]
    out = []
    for i in range(count):
        n = int(rng.integers(2, 6))
        k = int(rng.integers(1, n + 1))
        g = gs[i % 3]()
        kind = i % 4
        if kind == 0:
            out.append(power_exp_pair(n, k, float(rng.uniform(0.5, 6)), g=g))
        elif kind == 1:
            out.append(power_pair(n, k, float(rng.uniform(0.1, 10)), float(rng.uniform(0.5, 6)), g=g))
        elif kind == 2:
            out.append(expression_pair(n, k, f"{rng.uniform(0.5, 3):.4f}*abs(z)^{k}*exp(z)", "0"))
        else:
            out.append(exp_critical_pair(n, k, float(rng.uniform(0.1, 1)), float(rng.uniform(0.5, 2)), g=g))
    return out


def criterion_10(capsys=None):
    rng = np.random.default_rng(10)
    probe = growth.LimitProbe()
    mism, worst_dom = [], 0.0
    for j, pair in enumerate(random_pairs(rng)):
        raw = growth.origin_limits(pair, probe)
        tra = growth.origin_limits(pair, probe, transformed=True)
        for a, b in zip(raw, tra):
            same = a.kind == b.kind and (a.kind != "finite" or abs(a.log_value - b.log_value) <= probe.tol)
            if not same:
                mism.append((j, a.kind, b.kind))
        for x in probe.x_samples(pair.n)[:8]:
            z = np.concatenate([probe.origin_grid(), probe.infinity_grid()])
            Li = growth.log_ratio_infinity(pair, x, z)
            Lr = growth.log_ratio_raw(pair, x, z)
            fin = np.isfinite(Li) & np.isfinite(Lr)
            # equality holds when g vanishes, so allow roundoff in the logarithms
            gap = (Lr[fin] - Li[fin]) / (1 + np.abs(Lr[fin]))
            worst_dom = max(worst_dom, float(np.max(gap, initial=-np.inf)))
    ok = not mism and worst_dom <= 1e-12
    return _report(capsys, 10, "classifier coherence", ok,
                   f"origin-limit mismatches {len(mism)} of 20 pairs, "
                   f"max (raw - infinity) log-ratio excess {worst_dom:.1e} (<= 1e-12 roundoff)")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_acceptance(check, capsys):
    assert check(capsys)


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
