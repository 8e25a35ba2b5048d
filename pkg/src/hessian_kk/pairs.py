"""The pair (f, g) of the gradient-term equation and builtin families.

Conventions
-----------
``g(t)`` is evaluated element-wise on arrays of ``t <= 0``.

``f(x, z)`` receives points ``x`` of shape ``(..., n)`` and values ``z`` of a
broadcast-compatible shape ``(...)``.  Families that know ``log f`` in closed
form supply it as `log_f`, which keeps growth ratios finite far beyond the
range where ``f`` itself overflows.

For ``z > 0`` the nonlinearity is extended by zero.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import expr
from .errors import ConfigError, DomainError

__all__ = [
    "GrowthPair",
    "const_g",
    "linear_g",
    "poly_g",
    "power_exp_pair",
    "power_pair",
    "exp_critical_pair",
    "zero_pair",
    "expression_pair",
]

_PROBE_T = -np.concatenate([[0.0], np.geomspace(1e-6, 64.0, 24)])


@dataclass(frozen=True, eq=False)
class GrowthPair:
    """Nonlinearity f and gradient coefficient g in dimension n, order k.

    Parameters
    ----------
    n, k : int
        Dimension and Hessian order, ``1 <= k <= n``.
    g : callable
        ``g(t) >= 0`` for ``t <= 0``.
    f : callable
        ``f(x, z) >= 0`` for ``z <= 0``.
    log_f : callable, optional
        Closed form of ``log f(x, z)`` for ``z < 0``.
    radial, x_independent : bool
        Declared symmetry of f in x.
    positive : bool
        Whether f is asserted positive for ``z < 0``; probed on construction.
    smooth_h : bool
        User assertion that the transformed nonlinearity is C^{1,1}; recorded,
        not verified.
    """

    n: int
    k: int
    g: Callable
    f: Callable
    log_f: Optional[Callable] = None
    radial: bool = True
    x_independent: bool = True
    positive: bool = True
    smooth_h: bool = False
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise DomainError(f"dimension must be a positive integer, got {self.n!r}")
        if not (isinstance(self.k, (int, np.integer)) and 1 <= self.k <= self.n):
            raise DomainError(f"order must satisfy 1 <= k <= n={self.n}, got {self.k!r}")
        gt = self.g_at(_PROBE_T)
        if np.any(~np.isfinite(gt)) or np.any(gt < 0):
            bad = _PROBE_T[np.argmax(~np.isfinite(gt) | (gt < 0))]
            raise DomainError(f"g must be finite and non-negative on t <= 0; fails at t={bad:.4g}")
        x0 = np.zeros(self.n)
        f0 = self.f_at(x0, 0.0)
        if not (np.isfinite(f0) and f0 >= 0):
            raise DomainError(f"f(x, 0) must be finite and non-negative, got {f0}")
        if self.positive:
            fz = self.f_at(x0, _PROBE_T[1:])
            if np.any(~(fz > 0)):
                raise DomainError("f must be positive for z < 0 (set positive=False to waive)")

    def g_at(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            return np.broadcast_to(np.asarray(self.g(t), dtype=float), t.shape) + 0.0

    def f_at(self, x, z):
        """f with the zero extension to ``z > 0``."""
        z = np.asarray(z, dtype=float)
        x = np.asarray(x, dtype=float)
        zc = np.minimum(z, 0.0)
        with np.errstate(all="ignore"):
            val = np.asarray(self.f(x, zc), dtype=float)
        out = np.where(z > 0, 0.0, val)
        return float(out) if out.ndim == 0 else out

    def log_f_at(self, x, z):
        """``log f`` (``-inf`` where f vanishes), from the closed form when known."""
        z = np.asarray(z, dtype=float)
        with np.errstate(all="ignore"):
            if self.log_f is not None:
                val = np.asarray(self.log_f(np.asarray(x, dtype=float), np.minimum(z, 0.0)), dtype=float)
                out = np.where(z > 0, -np.inf, val)
            else:
                out = np.log(np.asarray(self.f_at(x, z), dtype=float))
        return float(out) if out.ndim == 0 else out

    def describe(self):
        return {"name": self.name, "n": int(self.n), "k": int(self.k), **self.params}


def const_g(c=1.0):
    """g(t) = c."""
    if c < 0:
        raise DomainError(f"constant g must be non-negative, got {c}")
    return lambda t: np.full(np.shape(t), float(c))


def linear_g(a=1.0):
    """g(t) = -a t, non-negative on t <= 0 for a >= 0."""
    if a < 0:
        raise DomainError(f"linear g needs a >= 0, got {a}")
    return lambda t: -a * np.asarray(t, dtype=float)


def poly_g(coeffs):
    """g(t) = sum_i c_i (-t)^i with non-negative coefficients."""
    c = np.asarray(coeffs, dtype=float)
    if np.any(c < 0):
        raise DomainError("poly g needs non-negative coefficients")
    return lambda t: np.polynomial.polynomial.polyval(-np.asarray(t, dtype=float), c)


def _g_from_spec(spec):
    kind = spec.get("family", "const")
    if kind == "const":
        return const_g(spec.get("c", 1.0)), {"g": "const", "g_c": spec.get("c", 1.0)}
    if kind == "linear":
        return linear_g(spec.get("a", 1.0)), {"g": "linear", "g_a": spec.get("a", 1.0)}
    if kind == "poly":
        return poly_g(spec.get("coeffs", [0.0])), {"g": "poly", "g_coeffs": list(spec.get("coeffs", [0.0]))}
    raise ConfigError(f"unknown g family {kind!r} (expected const, linear, poly)")


def power_exp_pair(n, k, p, g=None, **kw):
    """f(x, z) = (e^{-z} - 1)^p e^{kz}; with g = 1 the transformed h is (-v)^p."""
    if p <= 0:
        raise DomainError(f"exponent p must be positive, got {p}")

    def f(x, z):
        return np.expm1(-z) ** p * np.exp(k * z)

    def log_f(x, z):
        # log(e^a - 1) = a + log(1 - e^-a), finite for every a = -z > 0
        a = -np.asarray(z, dtype=float)
        return p * (a + np.log(-np.expm1(-a))) + k * z

    kw.setdefault("params", {"p": p})
    return GrowthPair(n, k, const_g(1.0) if g is None else g, f, log_f, name="power-exp", **kw)


def power_pair(n, k, c=1.0, p=None, g=None, **kw):
    """f(x, z) = c |z|^p (p defaults to k), g = 0 unless given."""
    p = k if p is None else p

    def f(x, z):
        return c * np.abs(z) ** p

    def log_f(x, z):
        return np.log(c) + p * np.log(np.abs(z))

    kw.setdefault("params", {"c": c, "p": p})
    return GrowthPair(n, k, const_g(0.0) if g is None else g, f, log_f, name="power", **kw)


def exp_critical_pair(n, k, alpha0, b0=1.0, m=0.0, g=None, **kw):
    """f(x, z) = b0 exp(alpha0 |z|^{(n+2)/n}) (1 + |z|)^m, g = 0 unless given.

    With ``m = -1`` the min-max limit ``|z| f e^{-alpha0 |z|^{(n+2)/n}}``
    tends to `b0`.
    """
    q = (n + 2) / n

    def log_f(x, z):
        a = np.abs(z)
        return np.log(b0) + alpha0 * a**q + m * np.log1p(a)

    def f(x, z):
        return np.exp(log_f(x, z))

    kw.setdefault("params", {"alpha0": alpha0, "b0": b0, "m": m})
    return GrowthPair(n, k, const_g(0.0) if g is None else g, f, log_f, name="exp-critical", **kw)


def zero_pair(n, k, g=None, **kw):
    """f = 0."""
    kw.setdefault("params", {})
    return GrowthPair(
        n, k, const_g(0.0) if g is None else g,
        lambda x, z: np.zeros(np.shape(z)),
        positive=False, name="zero", **kw,
    )


def expression_pair(n, k, f_src, g_src="0", **kw):
    """Pair from expression strings in the variables x (= x_1), r (= |x|) and z."""
    fe = expr.parse(f_src)
    ge = expr.parse(g_src)
    if ge.variables - {"z"}:
        raise ConfigError(f"g may only depend on z, got variables {sorted(ge.variables)}")

    def f(x, z):
        x = np.asarray(x, dtype=float)
        return fe(x=x[..., 0], r=np.linalg.norm(x, axis=-1), z=z)

    def g(t):
        return ge(z=t)

    x_free = not (fe.variables & {"x", "r"})
    kw.setdefault("params", {"f": f_src, "g": g_src})
    kw.setdefault("x_independent", x_free)
    kw.setdefault("radial", "x" not in fe.variables)
    return GrowthPair(n, k, g, f, name="expression", **kw)


def pair_from_config(n, k, spec):
    """Build a pair from the ``pair`` block of a problem configuration."""
    if not isinstance(spec, dict):
        raise ConfigError("'pair' must be an object")
    family = spec.get("family")
    flags = {key: bool(spec[key]) for key in ("smooth_h",) if key in spec}
    try:
        if family == "expression" or ("f" in spec and family is None):
            if "f" not in spec:
                raise ConfigError("expression pair needs an 'f' string")
            pair = expression_pair(n, k, spec["f"], spec.get("g", "0"),
                                   positive=bool(spec.get("positive", True)), **flags)
            return pair
        g, gparams = _g_from_spec(spec.get("g", {"family": "const", "c": 1.0}))
        if family == "power-exp":
            p = float(_need(spec, "p"))
            return power_exp_pair(n, k, p, g=g, params={"p": p, **gparams}, **flags)
        if family == "power":
            c = float(spec.get("c", 1.0))
            p = float(spec.get("p", k))
            return power_pair(n, k, c, p, g=g, params={"c": c, "p": p, **gparams}, **flags)
        if family == "exp-critical":
            a0 = float(_need(spec, "alpha0"))
            b0 = float(spec.get("b0", 1.0))
            m = float(spec.get("m", 0.0))
            return exp_critical_pair(n, k, a0, b0, m, g=g,
                                     params={"alpha0": a0, "b0": b0, "m": m, **gparams}, **flags)
        if family == "zero":
            return zero_pair(n, k, g=g, params=gparams, **flags)
    except DomainError as exc:
        raise ConfigError(f"invalid pair: {exc}") from exc
    raise ConfigError(
        f"unknown pair family {family!r} (expected power-exp, power, exp-critical, zero, expression)"
    )


def _need(spec, key):
    if key not in spec:
        raise ConfigError(f"pair family {spec.get('family')!r} needs parameter {key!r}")
    return spec[key]
