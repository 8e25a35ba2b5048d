"""Vectorized adaptive Gauss-Legendre quadrature over many segments at once.

Every segment is integrated with an ``order``-point rule and compared to the
sum of the same rule on its two halves; segments that disagree are bisected
until the estimates match to ``epsabs`` or ``epsrel`` relative either to the
piece itself or to its length share of the whole segment's integral.  The
share keeps integrable endpoint singularities such as ``t**0.5`` at 0 from
forcing bisection to the bottom.
"""
from functools import lru_cache

import numpy as np

from .errors import NumericError

__all__ = ["gauss_legendre", "integrate_segments", "cumulative_integral"]


@lru_cache(maxsize=None)
def gauss_legendre(order):
    """Nodes and weights of the `order`-point rule on [-1, 1] (read-only)."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _fixed(func, lo, hi, order):
    x, w = gauss_legendre(order)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    vals = np.asarray(func(mid[:, None] + half[:, None] * x), dtype=float)
    return half * (vals @ w)


def integrate_segments(func, a, b, epsabs=1e-12, epsrel=1e-10, order=16, max_depth=40):
    """Integrate `func` over each segment ``[a[i], b[i]]``.

    Parameters
    ----------
    func : callable
        Vectorized integrand; called with 2-d arrays of abscissae.
    a, b : array_like
        Segment endpoints (broadcast together). ``a > b`` gives the
        negated integral, as usual.
    epsabs, epsrel : float
        Absolute tolerance (shared across each segment in proportion to
        length) and relative tolerance.

    Returns
    -------
    ndarray
        One integral per segment, shaped like the broadcast of `a` and `b`.
    """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    shape = a.shape
    a = a.ravel()
    b = b.ravel()
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise NumericError("non-finite integration limits")
    result = np.zeros(a.size)
    length = np.abs(b - a)
    owner = np.nonzero(length > 0)[0]
    lo = a[owner]
    hi = b[owner]
    coarse = _fixed(func, lo, hi, order)
    whole = np.zeros(a.size)
    whole[owner] = np.abs(coarse)
    for depth in range(max_depth):
        if owner.size == 0:
            return result.reshape(shape)
        mid = 0.5 * (lo + hi)
        left = _fixed(func, lo, mid, order)
        right = _fixed(func, mid, hi, order)
        fine = left + right
        if not np.all(np.isfinite(fine)):
            bad = owner[~np.isfinite(fine)][0]
            raise NumericError(
                f"non-finite integrand on segment [{a[bad]:.6g}, {b[bad]:.6g}]"
            )
        frac = np.abs(hi - lo) / length[owner]
        if depth == 0:
            whole[owner] = np.maximum(whole[owner], np.abs(fine))
        tol = np.maximum(epsabs, epsrel * whole[owner]) * frac
        ok = np.abs(fine - coarse) <= np.maximum(tol, epsrel * np.abs(fine))
        np.add.at(result, owner[ok], fine[ok])
        keep = ~ok
        owner = np.concatenate([owner[keep], owner[keep]])
        lo, hi = (
            np.concatenate([lo[keep], mid[keep]]),
            np.concatenate([mid[keep], hi[keep]]),
        )
        coarse = np.concatenate([left[keep], right[keep]])
    i = owner[0]
    raise NumericError(
        f"adaptive quadrature did not converge after {max_depth} bisections "
        f"on segment [{a[i]:.6g}, {b[i]:.6g}] ({owner.size} open pieces)"
    )


def cumulative_integral(func, breakpoints, **kwargs):
    """Integrals of `func` from ``breakpoints[0]`` to every breakpoint."""
    bp = np.asarray(breakpoints, dtype=float)
    pieces = integrate_segments(func, bp[:-1], bp[1:], **kwargs)
    return np.concatenate([[0.0], np.cumsum(pieces)])
