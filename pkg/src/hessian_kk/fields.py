"""Scalar fields with derivatives, pointwise S_k[u] and H_k, and the
composition identity

    S_k[A(u)] = A'(u)^k S_k[u] + A'(u)^(k-1) A''(u) H_k.

The left-hand side is always obtained by differentiating the composed field
itself, never from the right-hand side.
"""
from collections import namedtuple
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable, Optional

import numpy as np

from . import minors
from .errors import DomainError, NumericError

__all__ = [
    "ScalarField",
    "ScalarMap1D",
    "RadialFunction",
    "gradient",
    "hessian",
    "sk_of_field",
    "hk_of_field",
    "compose",
    "lemma1_residual",
    "radial_field",
    "check_derivatives",
    "polynomial_field",
    "random_polynomial_field",
    "cubic_map",
    "exp_map",
]

EPS = np.finfo(float).eps
GRAD_STEP = EPS ** (1 / 3)
HESS_STEP = EPS ** (1 / 4)
RADIAL_CUTOFF = 1e-6


@dataclass(frozen=True)
class ScalarField:
    """A function u: R^n -> R.

    With `grad` and `hess` callbacks the field is analytic; otherwise
    derivatives come from central differences.  `step`, when given, fixes
    the difference step (scaled by ``max(1, |x_i|)``); by default the step
    balances truncation against roundoff.
    """

    dim: int
    func: Callable
    grad: Optional[Callable] = None
    hess: Optional[Callable] = None
    step: Optional[float] = None

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError(f"dimension must be >= 1, got {self.dim}")
        if self.step is not None and not self.step > 0:
            raise DomainError(f"finite-difference step must be positive, got {self.step}")
        if (self.grad is None) != (self.hess is None):
            raise DomainError("supply both gradient and Hessian callbacks, or neither")

    @property
    def analytic(self):
        return self.grad is not None

    def __call__(self, x):
        return _finite(self.func(_point(self, x)), "field value")


@dataclass(frozen=True)
class ScalarMap1D:
    """A C^2 map A: I -> R given with its first two derivatives."""

    func: Callable
    d1: Callable
    d2: Callable

    def __call__(self, t):
        return self.func(t)


RadialFunction = namedtuple("RadialFunction", ["u", "du", "d2u"])
RadialFunction.__doc__ = "A radial profile r -> u(r) with its first two derivatives."


def _point(field, x):
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (field.dim,):
        raise DomainError(f"point has {x.size} coordinates, field dimension is {field.dim}")
    return x


def _finite(value, what):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"non-finite {what}")
    return arr if arr.ndim else float(arr)


def gradient(field, x):
    """Gradient of `field` at `x`, analytic or by central differences."""
    x = _point(field, x)
    if field.analytic:
        return _finite(np.asarray(field.grad(x), dtype=float).reshape(field.dim), "gradient")
    base = field.step if field.step is not None else GRAD_STEP
    g = np.empty(field.dim)
    for i in range(field.dim):
        h = base * max(1.0, abs(x[i]))
        e = np.zeros(field.dim)
        e[i] = h
        g[i] = (field.func(x + e) - field.func(x - e)) / (2 * h)
    return _finite(g, "gradient")


def hessian(field, x):
    """Hessian of `field` at `x`; the difference version is symmetrized."""
    x = _point(field, x)
    n = field.dim
    if field.analytic:
        H = np.asarray(field.hess(x), dtype=float).reshape(n, n)
        return _finite(0.5 * (H + H.T), "Hessian")
    base = field.step if field.step is not None else HESS_STEP
    h = base * np.maximum(1.0, np.abs(x))
    f0 = field.func(x)
    H = np.empty((n, n))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h[i]
        H[i, i] = (field.func(x + ei) - 2 * f0 + field.func(x - ei)) / h[i] ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h[j]
            H[i, j] = (
                field.func(x + ei + ej)
                - field.func(x + ei - ej)
                - field.func(x - ei + ej)
                + field.func(x - ei - ej)
            ) / (4 * h[i] * h[j])
            H[j, i] = H[i, j]
    return _finite(H, "Hessian")


def sk_of_field(field, x, k):
    return minors.s_k(hessian(field, x), k)


def hk_of_field(field, x, k):
    return minors.h_k(gradient(field, x), hessian(field, x), k)


def compose(A, field):
    """The field ``x -> A(u(x))``.

    For an analytic `field` the derivatives of the composite are assembled
    by the chain rule from the callbacks of `A` and `field`; otherwise the
    composite is differentiated numerically like any other field.
    """

    def func(x):
        return A.func(field.func(x))

    if not field.analytic:
        return ScalarField(field.dim, func, step=field.step)

    def grad(x):
        return A.d1(field.func(x)) * np.asarray(field.grad(x), dtype=float)

    def hess(x):
        u = field.func(x)
        g = np.asarray(field.grad(x), dtype=float)
        return A.d2(u) * np.outer(g, g) + A.d1(u) * np.asarray(field.hess(x), dtype=float)

    return ScalarField(field.dim, func, grad, hess)


def lemma1_residual(A, field, x, k, relative=False):
    """Residual of the composition identity at `x`.

    Returns ``|S_k[A(u)] - A'(u)^k S_k[u] - A'(u)^(k-1) A''(u) H_k|``, or that
    value divided by ``|S_k[A(u)]| + 1`` when `relative` is true.
    """
    x = _point(field, x)
    lhs = sk_of_field(compose(A, field), x, k)
    u = field(x)
    a1 = A.d1(u)
    a2 = A.d2(u)
    g = gradient(field, x)
    H = hessian(field, x)
    rhs = a1**k * minors.s_k(H, k) + a1 ** (k - 1) * a2 * minors.h_k(g, H, k)
    res = abs(lhs - rhs)
    if not np.isfinite(res):
        raise NumericError("non-finite intermediate in composition residual")
    return res / (abs(lhs) + 1.0) if relative else res


def radial_field(profile, n):
    """Embed a radial profile as the field ``x -> u(|x|)`` on R^n.

    `profile` is anything with callables ``u``, ``du``, ``d2u`` of r (for
    instance a :class:`RadialFunction`).  Below ``r = 1e-6`` the quadratic
    Taylor model about the origin is used, since ``u'(0) = 0``.
    """
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")

    def func(x):
        return float(profile.u(np.linalg.norm(x)))

    def grad(x):
        r = np.linalg.norm(x)
        if r < RADIAL_CUTOFF:
            return float(profile.d2u(0.0)) * x
        return float(profile.du(r)) / r * x

    def hess(x):
        r = np.linalg.norm(x)
        if r < RADIAL_CUTOFF:
            return float(profile.d2u(0.0)) * np.eye(n)
        d1 = float(profile.du(r))
        d2 = float(profile.d2u(r))
        xh = x / r
        return (d2 - d1 / r) * np.outer(xh, xh) + (d1 / r) * np.eye(n)

    return ScalarField(n, func, grad, hess)


def check_derivatives(field, points, rtol=1e-4):
    """Compare analytic callbacks with central differences at `points`.

    Returns the largest relative discrepancy (scaled by ``max(1, |.|)``);
    raises :class:`NumericError` when it exceeds `rtol`.
    """
    if not field.analytic:
        raise DomainError("field has no analytic derivatives to check")
    fd = ScalarField(field.dim, field.func)
    worst = 0.0
    for x in np.atleast_2d(points):
        for exact, approx in (
            (gradient(field, x), gradient(fd, x)),
            (hessian(field, x), hessian(fd, x)),
        ):
            scale = max(1.0, float(np.max(np.abs(exact))))
            worst = max(worst, float(np.max(np.abs(exact - approx))) / scale)
    if worst > rtol:
        raise NumericError(f"analytic derivatives disagree with finite differences ({worst:.3g})")
    return worst


def polynomial_field(exponents, coeffs):
    """Multivariate polynomial ``sum_j c_j prod_i x_i**E[j, i]``, analytic."""
    E = np.asarray(exponents, dtype=int)
    c = np.asarray(coeffs, dtype=float)
    if E.ndim != 2 or E.shape[0] != c.size or np.any(E < 0):
        raise DomainError("exponents must be an (m, n) array of non-negative integers")
    n = E.shape[1]

    def powers(x, shift):
        # x_i ** (E - shift) with zero where the exponent would go negative
        e = E - shift
        out = np.where(e >= 0, np.power(x, np.maximum(e, 0)), 0.0)
        return out

    def func(x):
        return float(c @ np.prod(powers(x, 0), axis=1))

    def grad(x):
        P = powers(x, 0)
        g = np.empty(n)
        for i in range(n):
            Q = P.copy()
            Q[:, i] = E[:, i] * powers(x, 1)[:, i]
            g[i] = c @ np.prod(Q, axis=1)
        return g

    def hess(x):
        P = powers(x, 0)
        P1 = powers(x, 1)
        P2 = powers(x, 2)
        H = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                Q = P.copy()
                if i == j:
                    Q[:, i] = E[:, i] * (E[:, i] - 1) * P2[:, i]
                else:
                    Q[:, i] = E[:, i] * P1[:, i]
                    Q[:, j] = E[:, j] * P1[:, j]
                H[i, j] = H[j, i] = c @ np.prod(Q, axis=1)
        return H

    return ScalarField(n, func, grad, hess)


def random_polynomial_field(n, degree, rng, scale=1.0):
    """Random polynomial of total degree <= `degree` with N(0, scale^2) coefficients."""
    monomials = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = np.zeros(n, dtype=int)
            for i in combo:
                e[i] += 1
            monomials.append(e)
    E = np.array(monomials)
    c = rng.normal(scale=scale, size=len(E))
    return polynomial_field(E, c)


def cubic_map():
    """A(t) = t + t^3."""
    return ScalarMap1D(lambda t: t + t**3, lambda t: 1 + 3 * t**2, lambda t: 6 * t)


def exp_map(a=1.0):
    """A(t) = 1 - exp(a t)."""
    return ScalarMap1D(
        lambda t: 1 - np.exp(a * t),
        lambda t: -a * np.exp(a * t),
        lambda t: -(a**2) * np.exp(a * t),
    )
