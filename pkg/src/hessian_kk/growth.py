"""Numeric verdicts on the growth conditions of a pair (f, g).

Every limit is probed on a geometric grid ``z_j = -z0 rho^j`` (toward
``-inf``) or ``z_j = -z0 rho^-j`` (toward ``0-``) and at a fixed set of
points of the closed unit ball.  Ratios are carried as logarithms: the
quantities ``G(z)`` and ``log |A_g(z)|`` come from
:func:`hessian_kk.transform.log_tail_integrals` and stay finite long after
``exp(G)`` overflows.

A sampled sequence is declared convergent when its last `window` log values
spread by less than `tol` (a plateau), or when every step of the window moves
the log value by at least ``trend * log(rho)`` in the same direction (limit
0 or infinity).  Anything else is ``Indeterminate``.
"""
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, exp, gamma, log, pi
from typing import Optional

import numpy as np

from .errors import DomainError, OverflowCapError
from .transform import get_transform, log_tail_integrals

__all__ = [
    "k_star",
    "harmonic",
    "constants",
    "alpha_n",
    "minmax_threshold",
    "LimitProbe",
    "LimitResult",
    "Verdict",
    "ARParams",
    "CriticalGrowth",
    "ratio_infinity",
    "log_ratio_infinity",
    "log_ratio_raw",
    "origin_limits",
    "primitive_origin_log_ratio",
    "classify_infinity",
    "classify_origin",
    "check_super_origin",
    "check_subcritical_sobolev",
    "check_ar",
    "exp_growth_type",
    "minmax_check",
    "critical_growth",
    "analyze_log_sequence",
    "default_lambda1",
    "default_big_lambda1",
    "classification_report",
]

INDETERMINATE = "Indeterminate"
SLACK_TOL = 1e-8


# -- constants ---------------------------------------------------------------
def _check_nk(n, k):
    if not (isinstance(n, (int, np.integer)) and n >= 1 and isinstance(k, (int, np.integer)) and 1 <= k <= n):
        raise DomainError(f"need integers 1 <= k <= n, got n={n!r}, k={k!r}")


def k_star(n, k):
    """Critical Sobolev exponent ``n(k+1)/(n-2k)``; requires ``n > 2k``."""
    _check_nk(n, k)
    if n <= 2 * k:
        raise DomainError(f"k* needs n > 2k, got n={n}, k={k}")
    return n * (k + 1) / (n - 2 * k)


def harmonic(k):
    """``1 + 1/2 + ... + 1/k``."""
    if k < 1:
        raise DomainError(f"harmonic number needs k >= 1, got {k}")
    return float(sum(Fraction(1, j) for j in range(1, k + 1)))


def _sphere(n):
    return 2 * pi ** (n / 2) / gamma(n / 2)


def alpha_n(n, k):
    """Critical Trudinger-Moser constant ``n c_n^(2/n)``; requires ``k = n/2``."""
    _check_nk(n, k)
    if 2 * k != n:
        raise DomainError(f"alpha_n is defined for k = n/2, got n={n}, k={k}")
    c = _sphere(n) / k * comb(n - 1, k - 1)
    return n * c ** (2 / n)


def constants(n, k):
    """``c_n``, ``tau``, ``alpha_n`` (None unless ``k = n/2``) and ``harmonic(k)``."""
    _check_nk(n, k)
    tau = _sphere(n)
    return {
        "c_n": tau / k * comb(n - 1, k - 1),
        "tau": tau,
        "alpha_n": alpha_n(n, k) if 2 * k == n else None,
        "harmonic": harmonic(k),
    }


def minmax_threshold(n, k, alpha0):
    """``exp(-harmonic(k)) (alpha_n / alpha0)^(n/2) n / tau``."""
    if not alpha0 > 0:
        raise DomainError(f"alpha0 must be positive, got {alpha0}")
    c = constants(n, k)
    if c["alpha_n"] is None:
        raise DomainError(f"the min-max bound needs k = n/2, got n={n}, k={k}")
    return exp(-c["harmonic"]) * (c["alpha_n"] / alpha0) ** (n / 2) * n / c["tau"]


# -- probing -----------------------------------------------------------------
@dataclass(frozen=True)
class LimitProbe:
    """Sampling plan for limits in z and uniformity in x.

    The x-samples are `n_x` points on `shells` concentric spheres of radii
    ``0, 1/(shells-1), ..., 1`` with seeded random directions.
    """

    z0: float = 1.0
    rho: float = 2.0
    npts: int = 40
    n_x: int = 32
    shells: int = 8
    window: int = 5
    tol: float = 1e-3
    trend: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if not self.rho > 1:
            raise DomainError(f"rho must exceed 1, got {self.rho}")
        if not self.z0 > 0:
            raise DomainError(f"z0 must be positive, got {self.z0}")
        if not (2 <= self.window <= self.npts):
            raise DomainError(f"need 2 <= window <= npts, got window={self.window}, npts={self.npts}")
        if self.n_x < 1 or self.shells < 1:
            raise DomainError("need n_x >= 1 and shells >= 1")
        if not (self.tol > 0 and self.trend > 0):
            raise DomainError("tol and trend must be positive")

    def infinity_grid(self):
        return -self.z0 * self.rho ** np.arange(self.npts, dtype=float)

    def origin_grid(self):
        return -self.z0 * self.rho ** -np.arange(self.npts, dtype=float)

    def x_samples(self, n, r_lo=0.0, r_hi=1.0):
        rng = np.random.default_rng(self.seed)
        radii = np.linspace(r_lo, r_hi, self.shells) if self.shells > 1 else np.array([r_hi])
        d = rng.normal(size=(self.n_x, n))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        return radii[np.arange(self.n_x) % radii.size, None] * d

    @property
    def step(self):
        return log(self.rho)


@dataclass(frozen=True)
class LimitResult:
    """Outcome of a sampled limit: kind in {finite, zero, infinite, indeterminate}."""

    kind: str
    log_value: float

    @property
    def value(self):
        if self.kind == "zero":
            return 0.0
        if self.kind == "infinite":
            return float("inf")
        if self.kind == "finite":
            return exp(self.log_value)
        return float("nan")


def analyze_log_sequence(L, probe):
    """Classify the limit of ``exp(L)`` from its last `probe.window` values."""
    L = np.asarray(L, dtype=float)
    if L.size < probe.window:
        return LimitResult("indeterminate", float("nan"))
    w = L[-probe.window:]
    if np.any(np.isnan(w)):
        return LimitResult("indeterminate", float("nan"))
    if np.all(w == -np.inf):
        return LimitResult("zero", -np.inf)
    if np.all(w == np.inf):
        return LimitResult("infinite", np.inf)
    if np.all(np.isfinite(w)) and np.ptp(w) < probe.tol:
        return LimitResult("finite", float(w[-1]))
    d = np.diff(np.clip(w, -1e300, 1e300)) / probe.step
    if np.all(d <= -probe.trend):
        return LimitResult("zero", float(w[-1]))
    if np.all(d >= probe.trend):
        return LimitResult("infinite", float(w[-1]))
    return LimitResult("indeterminate", float(w[-1]))


def _finite_prefix(L):
    """Columns before the first NaN or +inf in any row (overflow truncation)."""
    bad = np.isnan(L) | (L == np.inf)
    cols = np.nonzero(np.any(bad, axis=0))[0]
    return L.shape[1] if cols.size == 0 else int(cols[0])


@dataclass
class Verdict:
    """Label of one hypothesis with its sampled evidence.

    ``converged=False`` forces ``label = "Indeterminate"``.  `margin` is the
    relative distance to the decisive threshold (see each check).
    """

    hypothesis: str
    label: str
    converged: bool
    margin: float
    evidence: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.converged and self.label != INDETERMINATE:
            self.details.setdefault("unconverged_label", self.label)
            self.label = INDETERMINATE

    @property
    def passed(self):
        return self.label in ("Pass",)

    def to_dict(self):
        return _json_safe(asdict(self))


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _json_safe(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if np.isnan(v):
            return "nan"
        if np.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


@dataclass(frozen=True)
class ARParams:
    """Constants of an Ambrosetti-Rabinowitz type inequality.

    ``kind="sobolev"``: ``theta`` in (0, 1) and cutoff ``M``.
    ``kind="tm"``: ``vartheta > k + 1``, annulus ``0 < r1 < r2 < 1``, cutoff ``z0``.
    ``kind="ar1"``: cutoff ``L`` and bound ``M``.
    """

    kind: str = "sobolev"
    theta: Optional[float] = None
    M: Optional[float] = None
    vartheta: Optional[float] = None
    r1: Optional[float] = None
    r2: Optional[float] = None
    z0: Optional[float] = None
    L: Optional[float] = None

    def __post_init__(self):
        if self.kind == "sobolev":
            if self.theta is None or not (0 < self.theta < 1):
                raise DomainError(f"theta must lie in (0, 1), got {self.theta}")
            if self.M is None or self.M < 0:
                raise DomainError(f"cutoff M must be non-negative, got {self.M}")
        elif self.kind == "tm":
            if self.vartheta is None or self.r1 is None or self.r2 is None or self.z0 is None:
                raise DomainError("the annulus variant needs vartheta, r1, r2 and z0")
            if not (0 < self.r1 < self.r2 < 1):
                raise DomainError(f"need 0 < r1 < r2 < 1, got r1={self.r1}, r2={self.r2}")
            if self.z0 < 0:
                raise DomainError(f"cutoff z0 must be non-negative, got {self.z0}")
        elif self.kind == "ar1":
            if self.L is None or self.M is None or not (self.L > 0 and self.M > 0):
                raise DomainError(f"need L, M > 0, got L={self.L}, M={self.M}")
        else:
            raise DomainError(f"unknown AR variant {self.kind!r} (sobolev, tm, ar1)")

    def check_order(self, k):
        if self.kind == "tm" and not self.vartheta > k + 1:
            raise DomainError(f"vartheta must exceed k + 1 = {k + 1}, got {self.vartheta}")


@dataclass(frozen=True)
class CriticalGrowth:
    """Critical exponent estimate ``alpha0`` and min-max limit estimate ``b0``."""

    alpha0: float
    b0: Optional[float] = None

    def __post_init__(self):
        if not self.alpha0 > 0:
            raise DomainError(f"critical growth needs alpha0 > 0, got {self.alpha0}")


# -- sampled ratios ----------------------------------------------------------
def _log_f_rows(pair, X, z):
    z = np.asarray(z, dtype=float)
    if pair.x_independent:
        row = pair.log_f_at(np.broadcast_to(X[0], z.shape + (pair.n,)), z)
        return np.tile(np.asarray(row, dtype=float), (X.shape[0], 1))
    return np.stack([
        np.asarray(pair.log_f_at(np.broadcast_to(x, z.shape + (pair.n,)), z), dtype=float) for x in X
    ])


def _as_point(pair, x):
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (pair.n,):
        raise DomainError(f"point has {x.size} coordinates, pair dimension is {pair.n}")
    return x


def log_ratio_infinity(pair, x, z):
    """``log [e^(kG(z)) f(x,z) / (int_z^0 e^G)^k]`` at an array of ``z < 0``."""
    x = _as_point(pair, x)
    G, logA = log_tail_integrals(pair, z)
    return pair.k * G + _log_f_rows(pair, x[None], z)[0] - pair.k * logA


def log_ratio_raw(pair, x, z):
    """``log [f(x,z) / |z|^k]``."""
    x = _as_point(pair, x)
    z = np.asarray(z, dtype=float)
    return _log_f_rows(pair, x[None], z)[0] - pair.k * np.log(-z)


def ratio_infinity(pair, x):
    """The function ``z -> e^(kG(z)) f(x,z) / (int_z^0 e^G)^k`` for ``z < 0``.

    Raises :class:`OverflowCapError` where the ratio itself leaves the float
    range (its logarithm, :func:`log_ratio_infinity`, does not).
    """
    x = _as_point(pair, x)

    def ratio(z):
        zz = np.atleast_1d(np.asarray(z, dtype=float))
        L = log_ratio_infinity(pair, x, zz)
        big = L > np.log(np.finfo(float).max)
        if np.any(big):
            raise OverflowCapError("ratio overflows", t=float(zz[np.argmax(big)]))
        out = np.exp(L)
        return float(out[0]) if np.ndim(z) == 0 else out.reshape(np.shape(z))

    return ratio


def _sample_limits(pair, Lmat, probe, z):
    cut = _finite_prefix(Lmat)
    limits = [analyze_log_sequence(row[:cut], probe) for row in Lmat]
    evidence = {
        "z": z[:cut],
        "log_ratio_max": np.max(Lmat[:, :cut], axis=0) if cut else [],
        "log_ratio_min": np.min(Lmat[:, :cut], axis=0) if cut else [],
        "limits": [lim.value for lim in limits],
        "x_samples": int(Lmat.shape[0]),
    }
    if cut < Lmat.shape[1]:
        evidence["truncated_at"] = float(z[cut])
    return limits, evidence


def _compare(hyp, limits, evidence, threshold, probe, below, above):
    if any(lim.kind == "indeterminate" for lim in limits):
        return Verdict(hyp, INDETERMINATE, False, float("nan"), evidence, {"threshold": threshold})
    vals = np.array([lim.value for lim in limits])
    sup, inf = float(np.max(vals)), float(np.min(vals))
    details = {"threshold": threshold, "sup": sup, "inf": inf}
    if sup < threshold * (1 - probe.tol):
        return Verdict(hyp, below, True, (threshold - sup) / threshold, evidence, details)
    if inf > threshold * (1 + probe.tol):
        return Verdict(hyp, above, True, (inf - threshold) / threshold, evidence, details)
    gap = min(abs(sup - threshold), abs(inf - threshold)) / threshold
    return Verdict(hyp, INDETERMINATE, True, gap, evidence, details)


@lru_cache(maxsize=None)
def default_lambda1(n, k):
    """First k-Hessian eigenvalue of the unit ball from the radial solver."""
    from .radial import lambda1_ball

    return lambda1_ball(n, k, cross_check=False).value


@lru_cache(maxsize=None)
def default_big_lambda1(n, k):
    """Rayleigh-quotient constant of the unit ball from the radial solver."""
    from .radial import big_lambda1

    return big_lambda1(n, k, cross_check=False).value


def classify_infinity(pair, lam1=None, probe=None):
    """Sublinear / Superlinear comparison of the infinity ratio with lambda_1."""
    probe = probe or LimitProbe()
    lam1 = default_lambda1(pair.n, pair.k) if lam1 is None else float(lam1)
    if not lam1 > 0:
        raise DomainError(f"lambda_1 must be positive, got {lam1}")
    z = probe.infinity_grid()
    X = probe.x_samples(pair.n)
    G, logA = log_tail_integrals(pair, z)
    L = pair.k * G + _log_f_rows(pair, X, z) - pair.k * logA
    limits, ev = _sample_limits(pair, L, probe, z)
    return _compare("infinity-ratio", limits, ev, lam1, probe, "Sublinear", "Superlinear")


def origin_limits(pair, probe=None, transformed=False):
    """Per-sample limits of ``f/|z|^k`` (or ``h/|v|^k`` when `transformed`) at 0-."""
    probe = probe or LimitProbe()
    z = probe.origin_grid()
    X = probe.x_samples(pair.n)
    if transformed:
        tr = get_transform(pair)
        s = tr.A_inv(z)
        L = pair.k * tr.G(s) + _log_f_rows(pair, X, s) - pair.k * np.log(-z)
    else:
        L = _log_f_rows(pair, X, z) - pair.k * np.log(-z)
    return [analyze_log_sequence(row[: _finite_prefix(L)], probe) for row in L]


def _super_origin_logs(pair, X, z):
    G, logA = log_tail_integrals(pair, z)
    return pair.k * G + _log_f_rows(pair, X, z) - pair.k * logA


def check_super_origin(pair, Lam1=None, probe=None):
    """``limsup_{z->0-} e^(kG) f / (int_z^0 e^G)^k < Lambda_1`` (Pass / Fail).

    A lim sup needs no plateau: when the window neither plateaus nor trends,
    its largest value is used as the estimate.
    """
    probe = probe or LimitProbe()
    Lam1 = default_big_lambda1(pair.n, pair.k) if Lam1 is None else float(Lam1)
    z = probe.origin_grid()
    X = probe.x_samples(pair.n)
    L = _super_origin_logs(pair, X, z)
    limits, ev = _sample_limits(pair, L, probe, z)
    fixed = []
    cut = _finite_prefix(L)
    for lim, row in zip(limits, L):
        w = row[:cut][-probe.window:]
        if lim.kind == "indeterminate" and w.size == probe.window and np.all(w < np.inf):
            fixed.append(LimitResult("finite", float(np.max(w))))
        else:
            fixed.append(lim)
    v = _compare("origin-ratio-rayleigh", fixed, ev, Lam1, probe, "Pass", "Fail")
    v.details["limsup_from_window"] = any(a is not b for a, b in zip(fixed, limits))
    return v


def classify_origin(pair, lam1=None, probe=None, Lam1=None):
    """Compare ``lim_{z->0-} f/|z|^k`` with lambda_1.

    Labels are ``BelowEigenvalue`` and ``AboveEigenvalue``.  When ``k = n/2``
    or `Lam1` is given, the verdict of :func:`check_super_origin` is attached
    under ``details["rayleigh"]``.
    """
    probe = probe or LimitProbe()
    lam1 = default_lambda1(pair.n, pair.k) if lam1 is None else float(lam1)
    z = probe.origin_grid()
    X = probe.x_samples(pair.n)
    L = _log_f_rows(pair, X, z) - pair.k * np.log(-z)
    limits, ev = _sample_limits(pair, L, probe, z)
    v = _compare("origin-ratio", limits, ev, lam1, probe, "BelowEigenvalue", "AboveEigenvalue")
    if Lam1 is not None or 2 * pair.k == pair.n:
        v.details["rayleigh"] = check_super_origin(pair, Lam1, probe).to_dict()
    return v


def primitive_origin_log_ratio(pair, probe=None):
    """``log [(k+1) H(x, s) / |s|^(k+1)]`` with ``s = A_g(z)`` on the origin grid.

    ``H(x, s) = int_s^0 h = int_z^0 e^((k+1)G) f``.  Rows are x-samples.
    """
    probe = probe or LimitProbe()
    z = probe.origin_grid()
    X = probe.x_samples(pair.n)
    _, logA = log_tail_integrals(pair, z)
    rows = [_log_primitive(pair, x, z) for x in (X[:1] if pair.x_independent else X)]
    L = np.log(pair.k + 1) + np.array(rows) - (pair.k + 1) * logA
    return np.tile(L, (X.shape[0], 1)) if pair.x_independent else L


def _log_primitive(pair, x, z):
    """``log int_z^0 e^((k+1)G(s)) f(x, s) ds``."""
    k, n = pair.k, pair.n

    def weight(s, G):
        s = np.asarray(s, dtype=float)
        return (k + 1) * G + pair.log_f_at(np.broadcast_to(x, s.shape + (n,)), s)

    return log_tail_integrals(pair, z, weight)[1]


def check_subcritical_sobolev(pair, probe=None):
    """``e^(kG) f / (int_z^0 e^G)^(k*-1) -> 0`` as ``z -> -inf`` (Pass / Fail).

    For a Pass the margin is the final decay rate of the log ratio per log
    step; for a Fail it is the smallest sampled limit.
    """
    probe = probe or LimitProbe()
    ks = k_star(pair.n, pair.k)
    z = probe.infinity_grid()
    X = probe.x_samples(pair.n)
    G, logA = log_tail_integrals(pair, z)
    L = pair.k * G + _log_f_rows(pair, X, z) - (ks - 1) * logA
    limits, ev = _sample_limits(pair, L, probe, z)
    details = {"k_star": ks}
    if any(lim.kind == "indeterminate" for lim in limits):
        return Verdict("sobolev-subcritical", INDETERMINATE, False, float("nan"), ev, details)
    if all(lim.kind == "zero" for lim in limits):
        cut = _finite_prefix(L)
        tail = np.clip(L[:, :cut][:, -2:], -1e300, 1e300)
        rate = float(np.max(np.diff(tail, axis=1)) / probe.step) if cut >= 2 else float("-inf")
        return Verdict("sobolev-subcritical", "Pass", True, -rate, ev, details)
    worst = min(lim.value for lim in limits if lim.kind != "zero")
    return Verdict("sobolev-subcritical", "Fail", True, worst, ev, details)


def check_ar(pair, params=None, probe=None, variant="sobolev"):
    """Ambrosetti-Rabinowitz type inequality at sampled ``z`` below the cutoff.

    With ``I(x,z) = int_z^0 e^((k+1)G) f`` and
    ``R(x,z) = e^(kG(z)) f(x,z) int_z^0 e^G``:

    * ``sobolev``: ``(k+1)/(1-theta) I <= R`` and ``I > 0``;
    * ``tm``: ``vartheta I <= R`` on the ball and ``I > 0`` on the annulus
      ``r1 < |x| < r2``;
    * ``ar1``: ``0 < I <= M e^(kG) f``.

    The margin is the smallest normalized slack (``1 - lhs/rhs``); the check
    passes when it is at least ``-1e-8`` at every sample, widened by the
    resolution ``8 eps |log|`` of the logarithms the ratio is formed from.  With
    ``params=None`` the best constant for `variant` is estimated instead
    (largest theta or largest vartheta, cutoff ``probe.z0``, annulus
    ``0.25 < |x| < 0.75``) and the verdict records it.
    """
    probe = probe or LimitProbe()
    k, n = pair.k, pair.n
    kind = variant if params is None else params.kind
    if params is not None:
        params.check_order(k)
    elif kind not in ("sobolev", "tm"):
        raise DomainError(f"constant search supports the sobolev and tm variants, got {kind!r}")
    if params is None:
        cutoff = probe.z0
    elif kind == "sobolev":
        cutoff = params.M
    elif kind == "tm":
        cutoff = params.z0
    else:
        cutoff = params.L
    z = probe.infinity_grid()
    z = z[z < -cutoff]
    hyp = {"sobolev": "ar-sobolev", "tm": "ar-annulus", "ar1": "ar-bounded"}[kind]
    if z.size == 0:
        return Verdict(hyp, INDETERMINATE, False, float("nan"), {}, {"reason": "no samples below cutoff"})
    X = probe.x_samples(n)
    G, logA = log_tail_integrals(pair, z)
    Lf = _log_f_rows(pair, X, z)
    if pair.x_independent:
        logI = np.tile(_log_primitive(pair, X[0], z), (X.shape[0], 1))
    else:
        logI = np.array([_log_primitive(pair, x, z) for x in X])
    logR = k * G + Lf + logA
    valid = ~np.any(np.isnan(logI) | np.isnan(logR), axis=0)
    if not np.all(valid):
        keep = int(np.argmin(valid))
        z, G, Lf, logI, logR = z[:keep], G[:keep], Lf[:, :keep], logI[:, :keep], logR[:, :keep]
    if z.size == 0:
        return Verdict(hyp, INDETERMINATE, False, float("nan"), {}, {"reason": "no resolvable samples"})
    positive = bool(np.all(logI > -np.inf))
    evidence = {"z": z, "log_primitive_min": np.min(logI, axis=0), "log_rhs_min": np.min(logR, axis=0)}
    details = {"variant": kind}
    if not np.all(valid):
        evidence["truncated_at"] = float(probe.infinity_grid()[probe.infinity_grid() < -cutoff][keep])

    with np.errstate(all="ignore"):
        if kind == "ar1":
            ratio = np.exp(logI - (k * G + Lf))
        else:
            ratio = np.exp(logI - logR)
    finite = np.all(np.isfinite(ratio))

    if kind == "tm":
        r1 = 0.25 if params is None else params.r1
        r2 = 0.75 if params is None else params.r2
        Xa = probe.x_samples(n, r1 + (r2 - r1) / (probe.shells + 1), r2 - (r2 - r1) / (probe.shells + 1))
        rows = np.array([_log_primitive(pair, x, z) for x in (Xa[:1] if pair.x_independent else Xa)])
        positive = bool(np.all(rows[~np.isnan(rows)] > -np.inf))
        details["annulus"] = [r1, r2]
    details["positivity"] = positive
    if not positive or not finite:
        reason = "primitive vanishes" if not positive else "non-finite ratio"
        details["reason"] = reason
        return Verdict(hyp, "Fail", True, float("-inf"), evidence, details)

    worst = float(np.max(ratio))
    if params is None:
        if kind == "sobolev":
            best = 1 - (k + 1) * worst
            details["theta_max"] = best
            label = "Pass" if best > probe.tol else "Fail"
            return Verdict(hyp, label, True, best, evidence, details)
        if kind == "tm":
            best = 1 / worst
            details["vartheta_max"] = best
            label = "Pass" if best > (k + 1) * (1 + probe.tol) else "Fail"
            return Verdict(hyp, label, True, best / (k + 1) - 1, evidence, details)
    if kind == "sobolev":
        factor = (k + 1) / (1 - params.theta)
    elif kind == "tm":
        factor = params.vartheta
    else:
        factor = 1 / params.M
    # a ratio formed from two logs of size L is only resolved to ~eps*L
    mag = np.maximum(np.abs(logI), np.abs(k * G + Lf if kind == "ar1" else logR))
    tol = SLACK_TOL + 8 * np.finfo(float).eps * mag
    slacks = 1 - factor * ratio
    slack = float(np.min(slacks))
    details["min_slack"] = slack
    label = "Pass" if np.all(slacks >= -tol) else "Fail"
    return Verdict(hyp, label, True, slack, evidence, details)


def _signed_log_alpha(N, q_logA):
    with np.errstate(all="ignore"):
        return np.where(N == -np.inf, -np.inf, np.log(np.abs(N)) - q_logA), np.sign(N)


def exp_growth_type(pair, probe=None, delta=0.05):
    """Subcritical or critical exponential growth at ``-inf``.

    Estimates ``alpha(z) = log(e^(kG) f) / (int_z^0 e^G)^((n+2)/n)``.  A
    positive plateau gives ``CriticalExp`` with ``alpha0`` its value,
    confirmed only if the ratio ``e^(kG) f / exp(alpha A^((n+2)/n))`` tends
    to 0 at ``alpha0 (1 + delta)`` and to infinity at ``alpha0 (1 - delta)``;
    ``alpha -> 0`` gives ``SubcriticalExp``.
    """
    probe = probe or LimitProbe()
    n, k = pair.n, pair.k
    q = (n + 2) / n
    z = probe.infinity_grid()
    X = probe.x_samples(n)
    G, logA = log_tail_integrals(pair, z)
    N = k * G + _log_f_rows(pair, X, z)
    details = {"tm_regime": 2 * k == n, "delta": delta}
    if np.all(N == -np.inf):
        details["degenerate"] = "f vanishes on the grid"
        return Verdict("exp-growth", "SubcriticalExp", True, float("inf"), {"z": z}, details)
    la, sign = _signed_log_alpha(N, q * logA)
    limits, ev = _sample_limits(pair, la, probe, z)
    if any(lim.kind == "indeterminate" for lim in limits):
        return Verdict("exp-growth", INDETERMINATE, False, float("nan"), ev, details)
    if any(lim.kind == "infinite" for lim in limits):
        details["reason"] = "faster than every exponential of A^((n+2)/n)"
        return Verdict("exp-growth", INDETERMINATE, True, float("nan"), ev, details)
    if all(lim.kind == "zero" for lim in limits):
        return Verdict("exp-growth", "SubcriticalExp", True, 0.0, ev, details)
    if not all(lim.kind == "finite" for lim in limits) or np.any(sign[:, -1] <= 0):
        details["reason"] = "mixed limits across x-samples"
        return Verdict("exp-growth", INDETERMINATE, True, float("nan"), ev, details)
    alphas = np.array([lim.value for lim in limits])
    alpha0 = float(np.mean(alphas))
    details["alpha0"] = alpha0
    if np.ptp(alphas) > probe.tol * alpha0:
        details["reason"] = "alpha0 differs across x-samples"
        return Verdict("exp-growth", INDETERMINATE, True, float("nan"), ev, details)
    Aq = np.exp(q * logA)
    sides = {}
    for name, a in (("above", alpha0 * (1 + delta)), ("below", alpha0 * (1 - delta))):
        Ls = N - a * Aq
        cut = _finite_prefix(np.where(Ls == np.inf, 1e300, Ls))
        sides[name] = [analyze_log_sequence(row[:cut], probe).kind for row in Ls]
    details["two_sided"] = {key: sorted(set(val)) for key, val in sides.items()}
    ok = all(kd == "zero" for kd in sides["above"]) and all(kd == "infinite" for kd in sides["below"])
    if not ok:
        details["reason"] = "two-sided test at alpha0 +/- delta failed"
        return Verdict("exp-growth", INDETERMINATE, True, delta, ev, details)
    return Verdict("exp-growth", "CriticalExp", True, delta, ev, details)


def critical_growth(verdict):
    """:class:`CriticalGrowth` from a ``CriticalExp`` verdict."""
    if verdict.label != "CriticalExp":
        raise DomainError(f"growth is not critical (label {verdict.label})")
    return CriticalGrowth(verdict.details["alpha0"], verdict.details.get("b0"))


def minmax_check(pair, cg, probe=None):
    """Estimate ``b0 = lim e^(kG) |z| f / exp(alpha0 A^((n+2)/n))`` and compare.

    Pass iff ``b0`` exceeds :func:`minmax_threshold` by more than the probe
    tolerance (relative).  The limit must plateau.  Grid points where the
    difference ``log(e^(kG) f) - alpha0 A^q`` loses more than a tenth of the
    tolerance to cancellation are dropped and recorded.
    """
    probe = probe or LimitProbe()
    n, k = pair.n, pair.k
    thr = minmax_threshold(n, k, cg.alpha0)
    q = (n + 2) / n
    z = probe.infinity_grid()
    X = probe.x_samples(n)
    G, logA = log_tail_integrals(pair, z)
    Lf = _log_f_rows(pair, X, z)
    big = cg.alpha0 * np.exp(q * logA)
    L = k * G + np.log(-z) + Lf - big
    noise = 8 * np.finfo(float).eps * (np.abs(k * G) + np.max(np.abs(np.where(np.isfinite(Lf), Lf, 0)), axis=0) + big)
    keep = int(np.sum(np.cumprod(noise < 0.1 * probe.tol)))
    L = L[:, :keep]
    limits, ev = _sample_limits(pair, L, probe, z[:keep])
    details = {"threshold": thr, "alpha0": cg.alpha0}
    if keep < z.size:
        ev["cancellation_cut"] = float(z[keep]) if keep < z.size else None
    if any(lim.kind != "finite" for lim in limits):
        details["reason"] = "no plateau" if any(l.kind == "indeterminate" for l in limits) else "limit is 0 or infinite"
        if all(l.kind == "zero" for l in limits):
            return Verdict("min-max", "Fail", True, -1.0, ev, {**details, "b0": 0.0})
        if all(l.kind == "infinite" for l in limits):
            return Verdict("min-max", "Pass", True, float("inf"), ev, {**details, "b0": float("inf")})
        return Verdict("min-max", INDETERMINATE, False, float("nan"), ev, details)
    b0 = float(min(lim.value for lim in limits))
    details["b0"] = b0
    margin = (b0 - thr) / thr
    if margin > probe.tol:
        return Verdict("min-max", "Pass", True, margin, ev, details)
    if margin < -probe.tol:
        return Verdict("min-max", "Fail", True, margin, ev, details)
    return Verdict("min-max", INDETERMINATE, True, margin, ev, details)


def classification_report(pair, probe=None, lam1=None, Lam1=None, ar=None):
    """All applicable verdicts for `pair` as a JSON-ready dictionary.

    ``conditions`` summarizes them as Pass / Fail / Indeterminate for each
    named condition.
    """
    probe = probe or LimitProbe()
    n, k = pair.n, pair.k
    lam1 = default_lambda1(n, k) if lam1 is None else float(lam1)
    verdicts = []
    cond = {}

    def pf(flag, v):
        return INDETERMINATE if v.label == INDETERMINATE else ("Pass" if flag else "Fail")

    vi = classify_infinity(pair, lam1, probe)
    verdicts.append(vi)
    cond["sublinear-at-infinity"] = pf(vi.label == "Sublinear", vi)
    cond["superlinear-at-infinity"] = pf(vi.label == "Superlinear", vi)
    vo = classify_origin(pair, lam1, probe, Lam1)
    verdicts.append(vo)
    cond["origin-below-eigenvalue"] = pf(vo.label == "BelowEigenvalue", vo)
    cond["origin-above-eigenvalue"] = pf(vo.label == "AboveEigenvalue", vo)
    if "rayleigh" in vo.details:
        cond["origin-below-rayleigh-constant"] = vo.details["rayleigh"]["label"]
    if n > 2 * k:
        vs = check_subcritical_sobolev(pair, probe)
        verdicts.append(vs)
        cond["sobolev-subcritical"] = vs.label
        va = check_ar(pair, ar if ar is not None and ar.kind == "sobolev" else None, probe)
        verdicts.append(va)
        cond["ambrosetti-rabinowitz"] = va.label
    if 2 * k == n:
        tm = ar if ar is not None and ar.kind == "tm" else None
        va = check_ar(pair, tm, probe, variant="tm")
        verdicts.append(va)
        cond["ambrosetti-rabinowitz-annulus"] = va.label
        ve = exp_growth_type(pair, probe)
        verdicts.append(ve)
        cond["exponential-growth"] = ve.label
        if ve.label == "CriticalExp":
            vm = minmax_check(pair, critical_growth(ve), probe)
            verdicts.append(vm)
            cond["min-max-bound"] = vm.label
    return {
        "pair": pair.describe(),
        "probe": asdict(probe),
        "lambda1": lam1,
        "Lambda1": Lam1,
        "conditions": cond,
        "verdicts": [v.to_dict() for v in verdicts],
    }
