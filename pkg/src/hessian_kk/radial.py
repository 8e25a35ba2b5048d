"""Radial Dirichlet problems ``S_k[u] = psi(r, u)`` on the unit ball.

Radial k-Hessian
----------------
For ``u(x) = u(|x|)`` the k-Hessian is

    S_k[u] = C(n-1, k) (u'/r)^k + C(n-1, k-1) (u'/r)^(k-1) u''

which is equivalent to the divergence identity
``(r^(n-k) u'^k)' = (k / C(n-1, k-1)) r^(n-1) S_k[u]``.  Writing
``W(r) = r^-n int_0^r s^(n-1) psi`` turns the equation into the
non-singular first-order system

    u' = r (c W)^(1/k),   W' = (psi - n W) / r,   c = k / C(n-1, k-1),

which is integrated outward from the centre for a trial centre value
``u(0) = u0``; ``u0`` is then adjusted until ``u(1) = 0`` (shooting).

Profiles are sampled on Chebyshev-Lobatto nodes of [0, 1]; values between
nodes and the second derivative come from the Chebyshev interpolant, so the
reported residual ``|S_k[u] - psi|`` is an independent a-posteriori check of
the sampled solution rather than a restatement of the ODE.
"""
from dataclasses import dataclass, field
from math import comb, gamma, pi
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq, minimize

from .errors import (
    AdmissibilityError, ConvergenceError, DomainError, NumericError, OutOfRangeError,
)
from .quadrature import gauss_legendre

__all__ = [
    "radial_sk",
    "RadialProblem",
    "RadialProfile",
    "EigenResult",
    "lobatto_nodes",
    "solve_dirichlet",
    "lambda1_ball",
    "big_lambda1",
    "solve_transformed_and_map",
    "sphere_area",
]

R0 = 1e-5
RTOL = 1e-13


def sphere_area(n):
    """Surface area of the unit sphere in R^n."""
    return 2 * pi ** (n / 2) / gamma(n / 2)


def _check_nk(n, k):
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise DomainError(f"dimension must be a positive integer, got {n!r}")
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= n):
        raise DomainError(f"order must satisfy 1 <= k <= n={n}, got {k!r}")


def radial_sk(uprime, usecond, r, n, k):
    """S_k of a radial function from u'(r), u''(r); the centre formula at r = 0."""
    _check_nk(n, k)
    up, upp, r = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (uprime, usecond, r)))
    if np.any(r < 0):
        raise DomainError("radius must be non-negative")
    with np.errstate(divide="ignore", invalid="ignore"):
        q = up / r
        val = comb(n - 1, k) * q**k + comb(n - 1, k - 1) * q ** (k - 1) * upp
    out = np.where(r == 0, comb(n, k) * upp**k, val)
    return float(out) if out.ndim == 0 else out


def lobatto_nodes(N):
    """N + 1 Chebyshev-Lobatto nodes on [0, 1], increasing."""
    return 0.5 * (1 - np.cos(np.pi * np.arange(N + 1) / N))


@dataclass
class RadialProblem:
    """``S_k[u] = psi(r, u)`` in the unit ball of R^n with ``u = 0`` on the sphere.

    `psi` must accept array (or scalar) arguments ``r`` and ``u <= 0`` and be
    non-negative.  `N` is the number of Chebyshev intervals of the returned
    profile.
    """

    n: int
    k: int
    psi: Callable
    N: int = 128
    tol: float = 1e-6
    method: str = "shooting"
    damping: float = 0.5
    max_iter: int = 500

    def __post_init__(self):
        _check_nk(self.n, self.k)
        if self.N < 64:
            raise DomainError(f"grid size must be at least 64, got {self.N}")
        if self.method not in ("shooting", "picard"):
            raise DomainError(f"unknown method {self.method!r}")


class RadialProfile:
    """Sampled radial profile ``(r_i, u_i, u'_i)`` on [0, 1].

    Callables :meth:`u`, :meth:`du`, :meth:`d2u` evaluate the interpolant
    (Chebyshev on Lobatto nodes, cubic spline otherwise), so a profile can be
    embedded with :func:`hessian_kk.fields.radial_field`.
    """

    def __init__(self, r, u, du, n, k, psi=None, meta=None):
        self.r = np.asarray(r, dtype=float)
        self.values = np.asarray(u, dtype=float)
        self.slopes = np.asarray(du, dtype=float)
        if not (self.r.ndim == 1 and self.r.shape == self.values.shape == self.slopes.shape):
            raise DomainError("profile arrays must be 1-d and of equal length")
        if self.r[0] != 0.0 or self.r[-1] != 1.0 or np.any(np.diff(self.r) <= 0):
            raise DomainError("profile nodes must increase from 0 to 1")
        self.n = n
        self.k = k
        self.psi = psi
        self.meta = dict(meta or {})
        N = self.r.size - 1
        if np.allclose(self.r, lobatto_nodes(N), rtol=0, atol=1e-14):
            xi = 2 * self.r - 1
            C = np.polynomial.chebyshev.Chebyshev
            self._u = C.fit(xi, self.values, N, domain=[-1, 1], window=[-1, 1])
            self._du = C.fit(xi, self.slopes, N, domain=[-1, 1], window=[-1, 1])
            self._d2u = self._du.deriv()
            self._scale = 2.0
            self.interpolation = "chebyshev"
        else:
            self._u = CubicSpline(self.r, self.values)
            self._du = CubicSpline(self.r, self.slopes)
            self._d2u = self._du.derivative()
            self._scale = None
            self.interpolation = "spline"
        self._residuals = None

    def _call(self, fn, r, factor=1.0):
        r = np.asarray(r, dtype=float)
        x = 2 * r - 1 if self._scale else r
        out = factor * fn(x)
        return float(out) if np.ndim(out) == 0 else out

    def u(self, r):
        return self._call(self._u, r)

    def du(self, r):
        return self._call(self._du, r)

    def d2u(self, r):
        return self._call(self._d2u, r, self._scale or 1.0)

    @property
    def center(self):
        return float(self.values[0])

    def sk(self, r=None):
        r = self.r if r is None else np.asarray(r, dtype=float)
        return radial_sk(self.du(r), self.d2u(r), r, self.n, self.k)

    def pointwise_residuals(self):
        """``|S_k[u] - psi|`` at the nodes (zeros when no psi is attached)."""
        if self._residuals is None:
            if self.psi is None:
                self._residuals = np.zeros_like(self.r)
            else:
                target = np.broadcast_to(np.asarray(self.psi(self.r, np.minimum(self.values, 0.0)), dtype=float), self.r.shape)
                self._residuals = np.abs(self.sk() - target)
        return self._residuals

    @property
    def residual(self):
        """Max node residual relative to ``max |psi|`` over the nodes."""
        if "residual" in self.meta and self.psi is None:
            return float(self.meta["residual"])
        if self.psi is None:
            return 0.0
        target = np.abs(np.asarray(self.psi(self.r, np.minimum(self.values, 0.0)), dtype=float))
        scale = max(float(np.max(target)), np.finfo(float).tiny)
        return float(np.max(self.pointwise_residuals()) / scale)

    def to_dict(self):
        """JSON-ready dictionary; :meth:`from_dict` rebuilds the profile."""
        return {
            "n": int(self.n),
            "k": int(self.k),
            "r": self.r.tolist(),
            "u": self.values.tolist(),
            "uprime": self.slopes.tolist(),
            "sk": np.asarray(self.sk()).tolist(),
            "residual": self.pointwise_residuals().tolist(),
            "center": self.center,
            "meta": _jsonable(self.meta),
        }

    @classmethod
    def from_dict(cls, data, psi=None):
        try:
            return cls(data["r"], data["u"], data["uprime"], int(data["n"]), int(data["k"]),
                       psi=psi, meta=data.get("meta"))
        except KeyError as exc:
            raise DomainError(f"profile record lacks field {exc.args[0]!r}") from None

    def to_csv(self, path):
        """Write columns ``r, u, uprime, sk, residual`` with a header line."""
        table = np.column_stack([self.r, self.values, self.slopes, self.sk(), self.pointwise_residuals()])
        header = f"n={self.n} k={self.k}\nr,u,uprime,sk,residual"
        np.savetxt(path, table, delimiter=",", header=header, comments="# ", fmt="%.17g")

    @classmethod
    def from_csv(cls, path, n=None, k=None, psi=None):
        """Read a profile written by :meth:`to_csv` (n, k from the header unless given)."""
        with open(path) as fh:
            first = fh.readline()
        meta = dict(item.split("=") for item in first.lstrip("# ").split() if "=" in item)
        n = int(meta["n"]) if n is None else n
        k = int(meta["k"]) if k is None else k
        data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
        return cls(data[:, 0], data[:, 1], data[:, 2], n, k, psi=psi)

    def check_invariants(self, tol=1e-8):
        """Boundary, sign and monotonicity of an admissible radial profile."""
        amp = max(1.0, float(np.max(np.abs(self.values))))
        problems = []
        if abs(self.values[-1]) > tol * amp:
            problems.append(f"u(1) = {self.values[-1]:.3g}")
        if abs(self.slopes[0]) > tol * amp:
            problems.append(f"u'(0) = {self.slopes[0]:.3g}")
        if np.any(self.values > tol * amp):
            problems.append(f"max u = {np.max(self.values):.3g} > 0")
        if np.any(self.slopes < -tol * amp):
            problems.append(f"min u' = {np.min(self.slopes):.3g} < 0")
        if problems:
            raise NumericError("profile violates radial invariants: " + "; ".join(problems))


@dataclass
class EigenResult:
    """Eigenvalue estimate with its normalized (max |u| = 1) profile."""

    value: float
    profile: RadialProfile
    iterations: int
    method: str
    history: list = field(default_factory=list)
    cross_check: Optional[float] = None
    cross_method: Optional[str] = None

    @property
    def agreement(self):
        """Relative gap between the two methods, when a cross-check ran."""
        if self.cross_check is None:
            return None
        return abs(self.value - self.cross_check) / abs(self.value)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(key): _jsonable(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(val) for val in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


# -- outward integration ----------------------------------------------------
def _psi_scalar(psi):
    def f(r, u):
        return float(psi(r, u))
    return f


def _integrate(n, k, coef, psi, u0, dense=False):
    """Integrate ``u' = r (coef W)^(1/k), W' = (psi - nW)/r`` from the centre.

    Returns the ``solve_ivp`` solution (or raises) together with the centre
    data used for the series start.
    """
    p0 = psi(0.0, min(u0, 0.0))
    if p0 < 0:
        raise AdmissibilityError(f"psi(0, {u0:.6g}) = {p0:.6g} < 0")
    W0 = p0 / n
    a = (coef * W0) ** (1.0 / k)
    y0 = [u0 + 0.5 * a * R0**2, W0]
    floor = -1e-12 * max(abs(W0), 1.0)

    def rhs(r, y):
        u, W = y
        p = psi(r, u if u < 0 else 0.0)
        if p < 0:
            raise AdmissibilityError(f"psi({r:.6g}, {u:.6g}) = {p:.6g} < 0")
        if W < 0:
            W = 0.0  # trial stages may overshoot; accepted steps are checked below
        return [r * (coef * W) ** (1.0 / k), (p - n * W) / r]

    atol = [1e-15 * max(abs(u0), 1e-300), 1e-15 * max(abs(W0), 1e-300)]
    sol = solve_ivp(rhs, (R0, 1.0), y0, method="DOP853", rtol=RTOL, atol=atol, dense_output=dense)
    if sol.status != 0:
        raise NumericError(f"outward integration failed: {sol.message}")
    if np.min(sol.y[1]) < floor:
        raise AdmissibilityError(f"negative integrand average {np.min(sol.y[1]):.3g}")
    return sol, a


def _sample(n, k, coef, sol, a, u0, r):
    """u and u' at nodes `r` from an outward solution (series below R0)."""
    u = np.empty_like(r)
    du = np.empty_like(r)
    small = r < R0
    u[small] = u0 + 0.5 * a * r[small] ** 2
    du[small] = a * r[small]
    y = sol.sol(r[~small])
    u[~small] = y[0]
    du[~small] = r[~small] * (coef * np.maximum(y[1], 0.0)) ** (1.0 / k)
    return u, du


def _bracket_scan(F, start=2.0**-20, factor=4.0, count=32):
    """First sign change of F along ``u0 = -start * factor^j``."""
    history = []
    prev = None
    for j in range(count):
        u0 = -start * factor**j
        try:
            val = F(u0)
        except OutOfRangeError as exc:
            raise ConvergenceError(
                f"centre scan left the tabulated range before u(1) changed sign: {exc}", history
            ) from exc
        history.append((u0, val))
        if prev is not None and np.sign(val) != np.sign(prev[1]) and val != 0:
            return (u0, prev[0]), history
        if val == 0:
            return (u0, u0), history
        prev = (u0, val)
    raise ConvergenceError("no sign change of u(1) found while scanning centre values", history)


def _is_trivial(psi, n_probe=9):
    r = np.linspace(0, 1, n_probe)
    for u in (0.0, -1e-3, -0.5, -1.0):
        if any(psi(float(ri), u) != 0 for ri in r):
            return False
    return True


def solve_dirichlet(problem):
    """Solve ``S_k[u] = psi(r, u)``, ``u(1) = 0`` for a radial profile.

    ``method="shooting"`` (default) scans centre values geometrically for
    the first sign change of ``u(1)`` and refines it with Brent's method; each
    trial integrates the outward system with DOP853.  ``method="picard"`` runs
    the damped fixed-point map ``u <- (1-b) u + b T(u)`` from ``u = 0`` on the
    Chebyshev nodes; it suits psi that do not depend on u or grow sublinearly,
    but for superlinear psi it returns the trivial solution.

    Raises
    ------
    AdmissibilityError
        psi became negative.
    ConvergenceError
        No centre value bracket, Picard stagnation, or a final residual
        above ``problem.tol``.
    """
    n, k, N = problem.n, problem.k, problem.N
    psi = _psi_scalar(problem.psi)
    c = k / comb(n - 1, k - 1)
    r = lobatto_nodes(N)
    meta = {"method": problem.method}

    if problem.method == "picard":
        u, du, its = _picard(problem, c, r)
        meta["iterations"] = its
    elif _is_trivial(psi):
        u = np.zeros_like(r)
        du = np.zeros_like(r)
        meta["trivial"] = True
    else:
        def F(u0):
            sol, _ = _integrate(n, k, c, psi, u0)
            return float(sol.y[0, -1])

        (lo, hi), history = _bracket_scan(F)
        if lo == hi:
            u0 = lo
        else:
            u0 = brentq(F, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
        sol, a = _integrate(n, k, c, psi, u0, dense=True)
        u, du = _sample(n, k, c, sol, a, u0, r)
        u[-1] = 0.0
        meta["shots"] = len(history)
        meta["boundary_miss"] = float(sol.y[0, -1])

    profile = RadialProfile(r, u, du, n, k, psi=problem.psi, meta=meta)
    res = profile.residual
    profile.meta["residual"] = res
    if not np.isfinite(res) or res > problem.tol:
        raise ConvergenceError(
            f"profile residual {res:.3g} exceeds tolerance {problem.tol:.3g}", [res]
        )
    profile.check_invariants(tol=max(1e-8, problem.tol))
    return profile


def _cheb_eval_factory(r):
    N = r.size - 1
    C = np.polynomial.chebyshev

    def fit(values):
        return C.chebfit(2 * r - 1, values, N)

    def integral_to_one(values):
        # -int_r^1 of the interpolant of `values`, at the nodes
        coef = C.chebint(fit(values), lbnd=1.0) * 0.5
        return C.chebval(2 * r - 1, coef)

    return fit, integral_to_one


def _averages(n, r, values, psi_of, Q=64):
    """``K(r_i) = int_0^1 t^(n-1) psi(r_i t, u(r_i t)) dt`` by Gauss-Legendre."""
    x, w = gauss_legendre(Q)
    t = 0.5 * (x + 1)
    w = 0.5 * w * t ** (n - 1)
    coef = np.polynomial.chebyshev.chebfit(2 * r - 1, values, r.size - 1)
    rt = r[:, None] * t[None, :]
    ut = np.polynomial.chebyshev.chebval(2 * rt - 1, coef)
    vals = psi_of(rt, np.minimum(ut, 0.0))
    if np.any(vals < 0):
        raise AdmissibilityError("psi became negative during the fixed-point iteration")
    return vals @ w


def _fixed_point_map(n, k, c, r, values, psi_of):
    _, integral_to_one = _cheb_eval_factory(r)
    K = _averages(n, r, values, psi_of)
    du = r * (c * K) ** (1.0 / k)
    return integral_to_one(du), du


def _picard(problem, c, r):
    n, k = problem.n, problem.k
    psi_of = lambda rr, uu: np.broadcast_to(np.asarray(problem.psi(rr, uu), dtype=float), rr.shape)
    u = np.zeros_like(r)
    history = []
    for it in range(1, problem.max_iter + 1):
        Tu, du = _fixed_point_map(n, k, c, r, u, psi_of)
        step = float(np.max(np.abs(Tu - u)))
        u = (1 - problem.damping) * u + problem.damping * Tu
        history.append(step)
        if step <= 1e-14 * max(1.0, float(np.max(np.abs(u)))):
            Tu, du = _fixed_point_map(n, k, c, r, u, psi_of)
            return Tu, du, it
    raise ConvergenceError(f"Picard iteration did not converge in {problem.max_iter} sweeps", history[-10:])


# -- eigenvalues ------------------------------------------------------------
def _normalized_profile(r, u, du, n, k, meta):
    s = float(np.max(np.abs(u)))
    return RadialProfile(r, u / s, du / s, n, k, meta=meta)


def _lambda1_inverse_iteration(n, k, N, tol=1e-13, max_iter=1000):
    c = k / comb(n - 1, k - 1)
    r = lobatto_nodes(N)
    w = 0.5 * (r**2 - 1)
    w /= np.max(np.abs(w))
    power = lambda rr, uu: (-uu) ** k
    history = []
    lam_old = None
    for it in range(1, max_iter + 1):
        y, dy = _fixed_point_map(n, k, c, r, w, power)
        amp = float(np.max(np.abs(y)))
        lam = amp ** (-k)
        history.append(lam)
        w, dw = y / amp, dy / amp
        if lam_old is not None and abs(lam - lam_old) <= tol * lam:
            return lam, r, w, dw, it, history
        lam_old = lam
    raise ConvergenceError("inverse iteration for lambda_1 did not converge", history[-10:])


def _eigen_shoot(n, k, coef, F_scale=1.0):
    """Smallest mu with ``(r^(n-k) u'^k)' = coef... `` hitting u(1) = 0 from u0 = -1.

    Solves ``u' = r (coef W)^(1/k)``, ``W' = (mu (-u)^k - nW)/r`` and returns
    the bracketing history and root ``mu``.
    """
    def F(mu):
        sol, _ = _integrate(n, k, coef, lambda r, u: mu * (-u) ** k, -1.0)
        return float(sol.y[0, -1])

    lo, hi = 0.0, 1.0
    history = [(lo, -1.0)]
    while True:
        val = F(hi)
        history.append((hi, val))
        if val > 0:
            break
        lo = hi
        hi *= 2.0
        if hi > 1e12:
            raise ConvergenceError("could not bracket the first eigenvalue", history)
    mu = brentq(F, lo, hi, xtol=1e-300, rtol=1e-14, maxiter=200)
    return mu, history


def lambda1_ball(n, k, N=128, cross_check=True):
    """First eigenvalue of ``S_k[u] = lambda (-u)^k`` in the unit ball.

    The main estimate is inverse iteration on the fixed-point map (each
    sweep solves ``S_k[y] = (-w)^k`` and renormalizes ``max |w| = 1``); the
    cross-check shoots from ``u(0) = -1`` and brackets lambda until
    ``u(1) = 0`` with Brent's method.
    """
    _check_nk(n, k)
    if N < 64:
        raise DomainError(f"grid size must be at least 64, got {N}")
    lam, r, w, dw, its, history = _lambda1_inverse_iteration(n, k, N)
    profile = _normalized_profile(r, w, dw, n, k, {"method": "inverse-iteration"})
    result = EigenResult(lam, profile, its, "inverse-iteration", history)
    if cross_check:
        c = k / comb(n - 1, k - 1)
        mu, _ = _eigen_shoot(n, k, c)
        result.cross_check = mu
        result.cross_method = "shooting"
    return result


def _quotient_parts(n, k, N):
    h = 1.0 / N
    r = np.linspace(0.0, 1.0, N + 1)
    mid = (np.arange(N) + 0.5) * h
    wd = mid ** (n - k)
    wb = h * r ** (n - 1)
    wb[0] *= 0.5
    wb[-1] *= 0.5
    return r, h, wd, wb


def _log_quotient(x, k, h, wd, wb):
    u = np.append(x, 0.0)
    d = np.diff(u) / h
    ad = np.abs(d)
    D = h * np.sum(wd * ad ** (k + 1))
    B = np.sum(wb * np.abs(u) ** (k + 1))
    gd = wd * (k + 1) * ad ** (k - 1) * d
    gradD = np.zeros_like(u)
    gradD[1:] += gd
    gradD[:-1] -= gd
    gradB = wb * (k + 1) * np.abs(u) ** (k - 1) * u
    val = np.log(D) - np.log(B)
    grad = gradD / D - gradB / B
    return val, grad[:-1]


def big_lambda1(n, k, N=512, cross_check=True):
    """Minimum of ``c_n int r^(n-k) |u'|^(k+1) / (tau int r^(n-1) |u|^(k+1))``.

    ``c_n = (|S^(n-1)| / k) C(n-1, k-1)`` and ``tau = |S^(n-1)|``.  The
    discretized quotient (midpoint differences, trapezoidal weights, uniform
    grid of N cells, ``u(1) = 0``) is minimized by L-BFGS-B projected onto
    ``u <= 0``.  The cross-check shoots the Euler-Lagrange equation
    ``(r^(n-k) u'^k)' = (Lambda tau / c_n) r^(n-1) (-u)^k``.
    """
    _check_nk(n, k)
    if N < 64:
        raise DomainError(f"grid size must be at least 64, got {N}")
    tau = sphere_area(n)
    cn = tau / k * comb(n - 1, k - 1)
    r, h, wd, wb = _quotient_parts(n, k, N)
    x0 = 0.5 * (r[:-1] ** 2 - 1)
    trace = []
    res = minimize(
        _log_quotient, x0, args=(k, h, wd, wb), jac=True, method="L-BFGS-B",
        bounds=[(None, 0.0)] * N, callback=lambda intermediate_result: trace.append(float(intermediate_result.fun)),
        options={"maxiter": 50000, "maxfun": 100000, "ftol": 1e-15, "gtol": 1e-12},
    )
    if not np.isfinite(res.fun) or (not res.success and res.nit < 5):
        raise ConvergenceError(f"quotient minimization stagnated: {res.message}", [res.x])
    value = cn / tau * float(np.exp(res.fun))
    u = np.append(res.x, 0.0)
    du = np.gradient(u, r, edge_order=2)
    du[0] = 0.0
    profile = _normalized_profile(r, u, du, n, k, {"method": "direct-minimization", "grid": N})
    history = [cn / tau * float(np.exp(f)) for f in trace] or [value]
    result = EigenResult(value, profile, int(res.nit), "direct-minimization", history)
    if cross_check:
        # Euler-Lagrange: u' = r (mu W)^(1/k) with mu = Lambda tau / c_n, psi = (-u)^k
        mu, _ = _eigen_shoot(n, k, 1.0)
        result.cross_check = mu * cn / tau
        result.cross_method = "euler-lagrange-shooting"
    return result


# -- transformed problem ----------------------------------------------------
class _TabulatedH:
    """Chebyshev tables of an x-independent ``v -> h(v)`` on dyadic panels.

    Panels are ``[-2^(j+1), -2^j]`` for ``j_min <= j < j_max`` plus
    ``[-2^j_min, 0]``; values outside the table fall back to direct
    evaluation.
    """

    def __init__(self, h, v_floor, j_min=-40, j_max=20, degree=24):
        self.h = h
        top = min(j_max, int(np.floor(np.log2(-v_floor))) if v_floor < 0 else j_min)
        self.j_min, self.j_max = j_min, max(top, j_min)
        xi = np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1))
        lo = -(2.0 ** np.arange(j_min + 1, self.j_max + 1))
        hi = -(2.0 ** np.arange(j_min, self.j_max))
        lo = np.concatenate([[-(2.0**j_min)], lo])
        hi = np.concatenate([[0.0], hi])
        self.lo, self.hi = lo, hi
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        nodes = mid[:, None] + half[:, None] * xi
        vals = np.asarray(h(nodes.ravel()), dtype=float).reshape(nodes.shape)
        self.coef = np.polynomial.chebyshev.chebfit(xi, vals.T, degree).T
        self.mid, self.half = mid, half
        self.v_min = float(lo[-1])

    def __call__(self, v):
        v = float(v)
        if v > 0:
            return 0.0
        if v < self.v_min:
            return float(self.h(np.array([v]))[0])
        a = -v
        j = 0 if a <= 2.0**self.j_min else int(np.floor(np.log2(a))) - self.j_min + 1
        j = min(max(j, 0), self.mid.size - 1)
        xi = (v - self.mid[j]) / self.half[j]
        # h = e^{kG} f >= 0; clamp interpolation roundoff near v = 0
        return max(float(np.polynomial.chebyshev.chebval(xi, self.coef[j])), 0.0)


def solve_transformed_and_map(pair, N=128, tol=1e-6, radii=None, seed=0, s_min=-50.0, max_extend=3):
    """Solve ``S_k[v] = h(x, v)`` radially, map ``u = A_g^{-1}(v)`` and verify.

    When the centre scan leaves the reachable range of the transform and
    the working interval was limited by `s_min` rather than by overflow of
    ``exp(G)``, the interval is widened 20-fold, at most `max_extend` times.

    Returns
    -------
    dict
        ``v`` (profile of the transformed problem), ``u`` (mapped profile),
        ``transform`` and ``report`` (residuals of both equations at
        off-axis collocation points, see
        :func:`hessian_kk.transform.verify_equivalence`, plus the working
        interval actually used).
    """
    from .transform import get_transform, verify_equivalence

    if not pair.radial:
        raise DomainError("the radial solver needs a radially symmetric pair")
    for attempt in range(max_extend + 1):
        tr = get_transform(pair, s_min)
        try:
            v = _solve_transformed(pair, tr, N, tol)
            break
        except ConvergenceError as exc:
            capped = tr.overflow_at is not None or tr.floor > s_min
            if not isinstance(exc.__cause__, OutOfRangeError) or capped or attempt == max_extend:
                raise
            s_min *= 20.0
    U = tr.A_inv(v.values)
    dU = v.slopes / np.exp(tr.G(U))
    u = RadialProfile(v.r, U, dU, pair.n, pair.k, meta={"mapped_from": "v"})
    report = verify_equivalence(pair, v, radii=radii, seed=seed, transform=tr)
    report["solver_residual"] = v.residual
    report["center_v"] = v.center
    report["center_u"] = u.center
    report["s_min"] = s_min
    return {"v": v, "u": u, "transform": tr, "report": report}


def _solve_transformed(pair, tr, N, tol):
    n, k = pair.n, pair.k
    e1 = np.zeros(n)
    e1[0] = 1.0
    if pair.x_independent:
        table = _TabulatedH(lambda v: tr.h(e1, v), tr.v_floor)
        psi = lambda r, v: table(v) if np.ndim(v) == 0 else np.vectorize(table)(v)
    else:
        def psi(r, v):
            r = np.asarray(r, dtype=float)
            return tr.h(r[..., None] * e1, v)

    return solve_dirichlet(RadialProblem(n, k, psi, N=N, tol=tol))
