"""Sign scans of the Pohozaev-type non-existence density.

For a nonlinearity ``psi(x, z)`` (here the transformed ``h``) and its
primitive ``Psi(x, z) = int_0^z psi(x, t) dt`` the density is

    D(x, z) = n Psi - (n - 2k)/(k + 1) z psi + x . grad_x Psi.

If ``D > 0`` for all ``z < 0`` there is no negative solution in a
star-shaped domain; ``D >= 0`` with zeros still excludes solutions when
``<x, nu> > 0`` on the boundary, as for the unit ball.

Signs are decided relative to the natural size of the three terms,
``scale = n |Psi| + |c z psi| + |x . grad_x Psi|``: a value counts as zero when
``|D| <= eps * scale``.
"""
import csv
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, NumericError
from .growth import Verdict
from .quadrature import integrate_segments
from .transform import get_transform

__all__ = ["NonexistenceDensity", "density", "density_scan", "nonexistence_scan", "default_z_grid"]

EPS_POS = 1e-12
FD_STEP = np.finfo(float).eps ** (1 / 3)


def default_z_grid(n_pts=60, z_min=-1e4, z_max=-1e-3):
    """Geometric grid from `z_max` down to `z_min` (both negative)."""
    if not (z_min < z_max < 0):
        raise DomainError(f"need z_min < z_max < 0, got {z_min}, {z_max}")
    return -np.geomspace(-z_max, -z_min, n_pts)


@dataclass(frozen=True)
class NonexistenceDensity:
    """Density data: ``h(x, z)`` in dimension n, order k.

    `x_dependent` switches on the finite-difference x-gradient of the
    primitive; otherwise that term is zero.
    """

    h: Callable
    n: int
    k: int
    x_dependent: bool = False
    epsrel: float = 1e-13

    def __post_init__(self):
        if not (1 <= self.k <= self.n):
            raise DomainError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")

    @property
    def coefficient(self):
        return (self.n - 2 * self.k) / (self.k + 1)

    @classmethod
    def from_pair(cls, pair, s_min=-50.0):
        tr = get_transform(pair, s_min)
        return cls(tr.h, pair.n, pair.k, x_dependent=not pair.x_independent)

    def primitive(self, x, z):
        """``Psi(x, z) = int_0^z h(x, t) dt`` along an array of ``z <= 0``.

        The integral is accumulated between consecutive sorted grid values,
        so a dense grid costs one short quadrature per point.
        """
        x = np.asarray(x, dtype=float)
        z = np.asarray(z, dtype=float)
        if np.any(z > 0):
            raise DomainError("the density is evaluated for z <= 0")
        zs = np.atleast_1d(z).ravel()
        order = np.argsort(-zs)  # from 0 downward
        pts = np.concatenate([[0.0], zs[order]])
        fn = lambda t: np.asarray(self.h(np.broadcast_to(x, t.shape + (self.n,)), t), dtype=float)
        pieces = integrate_segments(fn, pts[:-1], pts[1:], epsabs=0.0, epsrel=self.epsrel)
        if not np.all(np.isfinite(pieces)):
            raise NumericError("primitive quadrature produced non-finite values")
        out = np.empty_like(zs)
        out[order] = np.cumsum(pieces)
        return float(out[0]) if z.ndim == 0 else out.reshape(z.shape)

    def terms(self, x, z):
        """``(n Psi, c z psi, x . grad_x Psi)`` along an array of z."""
        x = np.asarray(x, dtype=float)
        z = np.asarray(z, dtype=float)
        Psi = self.primitive(x, z)
        psi = np.asarray(self.h(np.broadcast_to(x, z.shape + (self.n,)), z), dtype=float)
        xg = np.zeros_like(Psi)
        if self.x_dependent:
            for i in range(self.n):
                step = FD_STEP * max(1.0, abs(x[i]))
                e = np.zeros(self.n)
                e[i] = step
                d = (self.primitive(x + e, z) - self.primitive(x - e, z)) / (2 * step)
                xg = xg + x[i] * d
        return self.n * Psi, self.coefficient * z * psi, xg


def density(nd, x, z):
    """``n Psi - (n-2k)/(k+1) z psi + x . grad_x Psi`` at ``z < 0``."""
    z = np.asarray(z, dtype=float)
    if np.any(z >= 0):
        raise DomainError("the density is evaluated for z < 0")
    a, b, c = nd.terms(x, z)
    out = a - b + c
    return float(out) if np.ndim(out) == 0 else out


def density_scan(nd, z_grid=None, shells=16, eps=EPS_POS, seed=0):
    """Evaluate the density on radial shells times a z grid and classify.

    Returns
    -------
    Verdict
        Label ``StrictlyPositive``, ``NonnegativeWithZeros`` or ``Mixed``;
        margin is the smallest ``D / scale``.  ``details`` holds the minimum
        value with its location, and ``evidence`` the full table.
    """
    z = default_z_grid() if z_grid is None else np.asarray(z_grid, dtype=float)
    if np.any(z >= 0):
        raise DomainError("scan grid must be negative")
    radii = np.linspace(0.0, 1.0, shells)
    d = np.random.default_rng(seed).normal(size=nd.n)
    d /= np.linalg.norm(d)
    D = np.empty((shells, z.size))
    S = np.empty_like(D)
    for i, r in enumerate(radii):
        a, b, c = nd.terms(r * d, z)
        D[i] = a - b + c
        S[i] = np.abs(a) + np.abs(b) + np.abs(c)
    if not np.all(np.isfinite(D)):
        raise NumericError("density is not finite on the scan grid")
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(S > 0, D / S, 0.0)
    zero = np.abs(D) <= eps * S
    pos = D > eps * S
    if np.all(pos):
        label = "StrictlyPositive"
    elif np.all(pos | zero):
        label = "NonnegativeWithZeros"
    else:
        label = "Mixed"
    i, j = np.unravel_index(np.argmin(rel), rel.shape)
    details = {
        "min_density": float(D[i, j]),
        "min_relative": float(rel[i, j]),
        "argmin": {"r": float(radii[i]), "z": float(z[j])},
        "zeros": int(np.sum(zero)),
        "points": int(D.size),
        "eps": eps,
        "max_abs_relative": float(np.max(np.abs(rel))),
    }
    if np.all(S == 0):
        details["degenerate"] = "nonlinearity vanishes on the grid"
    evidence = {"r": radii, "z": z, "density": D, "scale": S, "direction": d}
    return Verdict("nonexistence", label, True, float(rel[i, j]), evidence, details)


def nonexistence_scan(pair, z_grid=None, shells=16, eps=EPS_POS, seed=0, csv_path=None):
    """Density scan for the transformed nonlinearity of `pair` (``n > 2k``).

    With `csv_path` the table is also written with columns
    ``r, z, density, scale``.
    """
    if pair.n <= 2 * pair.k:
        raise DomainError(f"the scan needs n > 2k, got n={pair.n}, k={pair.k}")
    z = default_z_grid() if z_grid is None else np.asarray(z_grid, dtype=float)
    # |A_g(s)| >= |s|: a working interval reaching min(z) always covers the
    # grid, but the default one usually does already and is much shorter
    s_min = -50.0
    if get_transform(pair, s_min).v_floor > np.min(z):
        s_min = float(np.min(z))
    nd = NonexistenceDensity.from_pair(pair, s_min=s_min)
    v = density_scan(nd, z, shells, eps, seed)
    v.details["pair"] = pair.describe()
    if csv_path is not None:
        write_density_csv(v, csv_path)
    return v


def write_density_csv(verdict, path):
    ev = verdict.evidence
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["r", "z", "density", "scale"])
        for i, r in enumerate(ev["r"]):
            for j, z in enumerate(ev["z"]):
                w.writerow([repr(float(r)), repr(float(z)), repr(float(ev["density"][i][j])),
                            repr(float(ev["scale"][i][j]))])
