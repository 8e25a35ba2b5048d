"""The change of variables that removes the gradient term from the k-Hessian equation.

    G(t)   = int_t^0 g,
    A_g(s) = -int_s^0 exp(G(t)) dt,
    h(x, v) = exp(k G(A_g^{-1}(v))) f(x, A_g^{-1}(v)).

A :class:`Transform` tabulates G and A_g once on panels covering the working
interval ``[floor, 0]``: breakpoint values come from adaptive quadrature and
each panel carries a Chebyshev interpolant of ``G(t)/t`` and ``A_g(t)/t``.
Dividing by t keeps full relative accuracy as ``t -> 0``, which the origin
limits need.  The working interval stops at `s_min` or where ``G`` would
exceed `G_cap`, whichever comes first; the cut is recorded in
``Transform.floor`` and ``Transform.overflow_at``.
"""
from functools import lru_cache

import numpy as np

from . import fields
from .errors import DomainError, NumericError, OutOfRangeError, OverflowCapError
from .quadrature import gauss_legendre, integrate_segments

__all__ = [
    "Transform",
    "TransformedNonlinearity",
    "get_transform",
    "big_g",
    "a_g",
    "a_g_inv",
    "transformed_h",
    "ode_residual",
    "log_tail_integrals",
    "verify_equivalence",
]

EPS = np.finfo(float).eps


def _clenshaw(coef, j, xi):
    """Evaluate the Chebyshev series of panel ``j[i]`` at ``xi[i]``.

    ``coef`` is (panels, d+1); columns are gathered one at a time, which
    avoids an (m, d+1) temporary for long argument arrays.
    """
    cols = coef.T
    b1 = np.zeros_like(xi)
    b2 = np.zeros_like(xi)
    for i in range(coef.shape[1] - 1, 0, -1):
        b1, b2 = cols[i][j] + 2 * xi * b1 - b2, b1
    return cols[0][j] + xi * b1 - b2


class Transform:
    """Tabulated G, A_g and A_g^{-1} for the g of a :class:`GrowthPair`.

    Parameters
    ----------
    pair : GrowthPair
    s_min : float
        Requested left end of the working interval.
    panel : float
        Panel width near the origin; further out panels span ``|t|/8``.
        Panels shrink where ``g`` is large so that G changes by at most 1/2
        across a panel.
    degree : int
        Degree of the per-panel Chebyshev interpolants.
    G_cap : float
        Largest admissible value of G (``exp(G)`` must stay finite).
    tol, max_iter : float, int
        Newton settings of the inverse.
    """

    def __init__(self, pair, s_min=-50.0, panel=0.25, degree=20, G_cap=700.0,
                 epsabs=1e-13, epsrel=1e-12, tol=4 * EPS, max_iter=100):
        if not s_min < 0:
            raise DomainError(f"s_min must be negative, got {s_min}")
        self.pair = pair
        self.k = pair.k
        self.s_min = float(s_min)
        self.tol = tol
        self.max_iter = max_iter
        self._quad = dict(epsabs=epsabs, epsrel=epsrel)

        bp, cut = self._breakpoints(panel, G_cap)
        G_bp = np.concatenate(
            [[0.0], np.cumsum(integrate_segments(pair.g_at, bp[1:], bp[:-1], **self._quad))]
        )
        over = np.nonzero(G_bp > G_cap)[0]
        if over.size:
            cut = float(bp[over[0]])
            bp = bp[: over[0]]
            G_bp = G_bp[: over[0]]
        if bp.size < 2:
            raise OverflowCapError("exp(G) overflows immediately left of 0", t=cut)
        self.breakpoints = bp
        self.floor = float(bp[-1])
        self.overflow_at = cut
        self.G_bp = G_bp

        xi = np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1))
        self._mid = 0.5 * (bp[:-1] + bp[1:])
        self._half = 0.5 * (bp[:-1] - bp[1:])
        nodes = self._mid[:, None] + self._half[:, None] * xi
        right = np.broadcast_to(bp[:-1, None], nodes.shape)
        G_nodes = G_bp[:-1, None] + integrate_segments(pair.g_at, nodes, right, **self._quad)
        self._cG = np.ascontiguousarray(np.polynomial.chebyshev.chebfit(xi, (G_nodes / nodes).T, degree).T)

        expG = lambda t: np.exp(self.G(t))
        A_pieces = integrate_segments(expG, bp[:-1], bp[1:], **self._quad)
        self.A_bp = np.concatenate([[0.0], np.cumsum(A_pieces)])
        A_nodes = self.A_bp[:-1, None] + integrate_segments(expG, right, nodes, **self._quad)
        self._cA = np.polynomial.chebyshev.chebfit(xi, (A_nodes / nodes).T, degree).T
        self._cA_der = np.polynomial.chebyshev.chebder(self._cA, axis=1)

    def _breakpoints(self, panel, G_cap):
        g = lambda t: float(self.pair.g_at(t))
        bp = [0.0]
        cut = None
        g_b = g(0.0)
        G_est = 0.0
        while bp[-1] > self.s_min:
            b = bp[-1]
            gmax = max(g_b, g(max(b - panel, self.s_min)))
            if not np.isfinite(gmax):
                cut = b
                break
            # panels grow with |t| (relative resolution) unless g is large
            base = max(panel, 0.125 * abs(b))
            width = min(base, 0.5 / gmax) if gmax > 0 else base
            nxt = max(b - width, self.s_min)
            g_n = g(nxt)
            # trapezoid estimate of G; panels past twice the cap are never used
            G_est += 0.5 * (g_b + g_n) * (b - nxt)
            bp.append(nxt)
            g_b = g_n
            if G_est > 2 * G_cap + 1:
                break
            if len(bp) > 200_000:
                raise NumericError("g grows too fast to tabulate G on the working interval")
        return np.array(bp), cut

    # -- evaluation -------------------------------------------------------
    def _locate(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t > 0):
            raise DomainError("transform arguments must be <= 0")
        if np.any(t < self.floor):
            bad = float(np.min(t))
            raise OverflowCapError(
                f"t={bad:.6g} is below the working floor {self.floor:.6g}"
                + (f" (exp(G) overflow near t={self.overflow_at:.6g})" if self.overflow_at is not None else ""),
                t=bad,
            )
        flat = t.ravel()
        j = np.clip(np.searchsorted(-self.breakpoints, -flat, side="right") - 1, 0, self._mid.size - 1)
        xi = (flat - self._mid[j]) / self._half[j]
        return t.shape, flat, j, xi

    def _eval(self, coef, t):
        shape, flat, j, xi = self._locate(t)
        out = flat * _clenshaw(coef, j, xi)
        return float(out[0]) if shape == () else out.reshape(shape)

    def G(self, t):
        """G(t) = int_t^0 g."""
        return self._eval(self._cG, t)

    def A(self, s):
        """A_g(s) = -int_s^0 exp(G)."""
        return self._eval(self._cA, s)

    def dA(self, s):
        """A_g'(s) = exp(G(s))."""
        return np.exp(self.G(s))

    def dA_table(self, s):
        """A_g'(s) by differentiating the tabulated A_g, independent of the G table."""
        shape, flat, j, xi = self._locate(s)
        out = _clenshaw(self._cA, j, xi) + flat * _clenshaw(self._cA_der, j, xi) / self._half[j]
        return float(out[0]) if shape == () else out.reshape(shape)

    def d2A(self, s):
        """A_g''(s) = -g(s) exp(G(s))."""
        return -self.pair.g_at(s) * np.exp(self.G(s))

    def G_exact(self, t):
        """G by direct adaptive quadrature (no tabulation)."""
        t = np.asarray(t, dtype=float)
        if np.any(t > 0):
            raise DomainError("G is defined for t <= 0")
        out = integrate_segments(self.pair.g_at, t, 0.0, **self._quad)
        return float(out) if out.ndim == 0 else out

    @property
    def v_floor(self):
        """Smallest v whose preimage lies in the working interval."""
        return float(self.A_bp[-1])

    def A_inv(self, v):
        """Inverse of A_g by table bracketing plus safeguarded Newton."""
        v = np.asarray(v, dtype=float)
        shape = v.shape
        v = v.ravel()
        if np.any(v > 0):
            raise DomainError("A_g^{-1} is defined for v <= 0")
        if np.any(v < self.v_floor):
            raise OutOfRangeError(
                f"v={float(np.min(v)):.6g} is below the reachable range "
                f"[{self.v_floor:.6g}, 0] of the working interval"
            )
        A_bp = self.A_bp
        j = np.clip(np.searchsorted(-A_bp, -v, side="right") - 1, 0, A_bp.size - 2)
        hi = self.breakpoints[j].copy()
        lo = self.breakpoints[j + 1].copy()
        span = A_bp[j] - A_bp[j + 1]
        s = lo + (v - A_bp[j + 1]) / span * (hi - lo)
        s = np.where(v == 0, 0.0, s)
        active = v != 0
        for _ in range(self.max_iter):
            if not np.any(active):
                break
            sa = s[active]
            F = self.A(sa) - v[active]
            d = np.exp(self.G(sa))
            new = sa - F / d
            h_a = np.where(F > 0, sa, hi[active])
            l_a = np.where(F > 0, lo[active], sa)
            outside = ~((new > l_a) & (new < h_a))
            new = np.where(outside, 0.5 * (l_a + h_a), new)
            # a zero residual is final even when the bracket update collapsed it
            new = np.where(F == 0, sa, new)
            hi[active] = h_a
            lo[active] = l_a
            done = np.abs(new - sa) <= self.tol * np.abs(sa) + 1e-300
            s[active] = new
            idx = np.nonzero(active)[0]
            active[idx[done]] = False
        else:
            if np.any(active):
                raise NumericError(f"A_g^{{-1}} Newton did not converge for {int(active.sum())} values")
        return float(s[0]) if shape == () else s.reshape(shape)

    def h(self, x, v):
        """The transformed nonlinearity (zero for v > 0)."""
        v = np.asarray(v, dtype=float)
        vc = np.minimum(v, 0.0)
        s = self.A_inv(vc)
        G = self.G(s)
        pair = self.pair
        with np.errstate(all="ignore"):
            if pair.log_f is not None:
                out = np.exp(self.k * G + pair.log_f_at(x, s))
            else:
                out = np.exp(self.k * G) * pair.f_at(x, s)
        out = np.where(v > 0, 0.0, out)
        if not np.all(np.isfinite(out)):
            raise NumericError("transformed nonlinearity overflowed")
        return float(out) if out.ndim == 0 else out

    def ode_residual(self, s, relative=False):
        """``|A'^(k-1) A'' + g A'^k|`` from two independent routes.

        ``A'`` is the derivative of the tabulated ``A_g`` (quadrature of
        ``exp(G)``); ``A''`` is the closed form ``-g exp(G)`` with G from its
        own table.  The residual vanishes when the two tables agree.  With
        `relative` it is divided by ``|A'^(k-1) A''| + |g A'^k|`` (zero where
        g vanishes).
        """
        s = np.asarray(s, dtype=float)
        a1 = self.dA_table(s)
        a2 = self.d2A(s)
        g = self.pair.g_at(s)
        t1 = a1 ** (self.k - 1) * a2
        t2 = g * a1**self.k
        res = np.abs(t1 + t2)
        if relative:
            scale = np.abs(t1) + np.abs(t2)
            res = np.divide(res, scale, out=np.zeros_like(res), where=scale > 0)
        return res


@lru_cache(maxsize=32)
def get_transform(pair, s_min=-50.0):
    """Cached :class:`Transform` of `pair` (pairs hash by identity)."""
    return Transform(pair, s_min=s_min)


class TransformedNonlinearity:
    """Callable ``h(x, v)`` bound to a transform."""

    def __init__(self, transform):
        self.transform = transform
        self.pair = transform.pair

    def __call__(self, x, v):
        return self.transform.h(x, v)


def big_g(pair, t):
    return get_transform(pair).G_exact(t)


def a_g(pair, s):
    return get_transform(pair).A(s)


def a_g_inv(pair, v):
    return get_transform(pair).A_inv(v)


def transformed_h(pair):
    return TransformedNonlinearity(get_transform(pair))


def ode_residual(pair, s, relative=False):
    return get_transform(pair).ode_residual(s, relative)


def _graded_breakpoints(t):
    """Breakpoints ``0 < ... `` refining every gap of `t` geometrically toward both ends.

    Integrands such as ``exp(G(s))`` can vary on an O(1) scale inside a gap
    of length 1e11; grading by powers of two down to the float resolution
    keeps every boundary layer inside a short piece.
    """
    edges = np.concatenate([[0.0], t])
    pts = [edges]
    for lo, hi in zip(edges[:-1], edges[1:]):
        L = hi - lo
        floor = 4 * np.spacing(max(hi, np.finfo(float).tiny))
        J = int(np.clip(np.floor(np.log2(L / floor)), 1, 60))
        off = L * 2.0 ** -np.arange(1, J + 1)
        pts.append(lo + off)
        pts.append(hi - off)
    out = np.unique(np.concatenate(pts))
    return out[(out >= 0) & (out <= t[-1])]


def log_tail_integrals(pair, z, log_weight=None, epsrel=1e-12):
    """``G(z)`` and ``log int_z^0 exp(w(s)) ds`` for arrays of ``z < 0``.

    ``w(s) = log_weight(s, G(s))`` defaults to ``G(s)``, which makes the
    second output ``log |A_g(z)|``.  Everything is carried in log form with a
    per-piece shift, so the results stay finite long after ``exp(G)``
    overflows; G differences inside a piece are integrated directly from its
    right end rather than subtracted.

    The gaps between the sorted ``|z|`` are graded geometrically toward both
    ends; an integrand whose maximum sits strictly inside a gap and is
    narrower than the local piece can still be under-resolved.  When the
    log integrand changes by more than one unit across the piece next to
    ``z`` even at the float resolution of ``z``, the layer cannot be
    resolved at all and ``nan`` is returned for that ``z``.
    """
    z = np.asarray(z, dtype=float)
    if z.size == 0:
        return z.copy(), z.copy()
    if np.any(z >= 0) or not np.all(np.isfinite(z)):
        raise DomainError("tail integrals need finite z < 0")
    weight = (lambda s, G: G) if log_weight is None else log_weight
    t_out = -z.ravel()
    t = _graded_breakpoints(np.unique(t_out))
    left = -t[1:]
    right = -t[:-1]
    quad = dict(epsabs=0.0, epsrel=epsrel)
    G_bp = np.concatenate([[0.0], np.cumsum(integrate_segments(pair.g_at, left, right, **quad))])
    G_right = G_bp[:-1]
    key = t[:-1]

    def seg_of(s):
        return np.clip(np.searchsorted(key, -s, side="right") - 1, 0, key.size - 1)

    def log_integrand(s):
        i = seg_of(s)
        Gs = G_right[i] + integrate_segments(pair.g_at, s, right[i], **quad)
        with np.errstate(all="ignore"):
            return np.asarray(weight(s, Gs), dtype=float)

    # fixed-order rule per graded piece, combined in log-sum-exp form: a
    # piece far from the boundary layer is under-resolved only where its
    # weight is exponentially negligible against the layer itself
    x, w = gauss_legendre(16)
    half = 0.5 * (right - left)
    nodes = 0.5 * (left + right)[:, None] + half[:, None] * x
    raw = log_integrand(nodes)
    vals = raw + np.log(w)
    with np.errstate(all="ignore"):
        spread = np.where(np.all(np.isfinite(raw), axis=1), np.ptp(raw, axis=1), 0.0)
        shift = np.max(vals, axis=1)
        dead = ~np.isfinite(shift)
        shift = np.where(dead, 0.0, shift)
        pieces = shift + np.log(half) + np.log(np.sum(np.exp(vals - shift[:, None]), axis=1))
    pieces[dead] = -np.inf
    log_int = np.concatenate([[-np.inf], np.logaddexp.accumulate(pieces)])
    unresolved = np.concatenate([[False], spread > 1.0])
    log_int = np.where(unresolved, np.nan, log_int)
    idx = np.searchsorted(t, t_out)
    return G_bp[idx].reshape(z.shape), log_int[idx].reshape(z.shape)


def _direction(n, rng):
    d = rng.normal(size=n)
    return d / np.linalg.norm(d)


def map_profile(transform, v):
    """Radial functions of ``u = A_g^{-1}(v)`` for a profile `v`.

    `v` needs callables ``u``, ``du`` and ``d2u`` of r.
    """
    g = transform.pair.g_at

    def u(r):
        return transform.A_inv(v.u(r))

    def du(r):
        return v.du(r) / np.exp(transform.G(u(r)))

    def d2u(r):
        U = u(r)
        e = np.exp(transform.G(U))
        U1 = v.du(r) / e
        return (v.d2u(r) + g(U) * e * U1**2) / e

    return fields.RadialFunction(u, du, d2u)


def verify_equivalence(pair, v, radii=None, seed=0, transform=None):
    """Residual of the gradient-term equation for ``u = A_g^{-1}(v)``.

    At each radius a point ``x = r d`` along a random (seeded) direction is
    formed; S_k[u] and H_k come from the full Hessian of the embedded radial
    field through the minor sums.  The reported relative residual is
    ``|S_k[u] - g(u) H_k - f(x, u)| / (|S_k[u]| + |g(u) H_k| + |f|)``.  The
    same points also give the residual of ``S_k[v] = h(x, v)``.

    Returns
    -------
    dict
        ``radii``, ``residuals`` (original equation), ``transformed_residuals``
        and their maxima.
    """
    tr = transform if transform is not None else get_transform(pair)
    n, k = pair.n, pair.k
    radii = np.linspace(0.05, 0.95, 19) if radii is None else np.asarray(radii, dtype=float)
    rng = np.random.default_rng(seed)
    ufun = map_profile(tr, v)
    ufield = fields.radial_field(ufun, n)
    vfield = fields.radial_field(v, n)
    res, res_v = [], []
    for r in radii:
        x = r * _direction(n, rng)
        U = ufield(x)
        S = fields.sk_of_field(ufield, x, k)
        H = fields.hk_of_field(ufield, x, k)
        gH = float(pair.g_at(U)) * H
        f = float(pair.f_at(x, U))
        den = abs(S) + abs(gH) + abs(f)
        res.append(abs(S - gH - f) / den if den > 0 else 0.0)
        Sv = fields.sk_of_field(vfield, x, k)
        hv = float(tr.h(x, vfield(x)))
        den = abs(Sv) + abs(hv)
        res_v.append(abs(Sv - hv) / den if den > 0 else 0.0)
    return {
        "radii": radii.tolist(),
        "residuals": res,
        "transformed_residuals": res_v,
        "max_residual": float(max(res)),
        "max_transformed_residual": float(max(res_v)),
    }
