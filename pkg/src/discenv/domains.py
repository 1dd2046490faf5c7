"""Domain pairs W inside X in C^n, with membership via signed margins.

A margin function is positive inside the domain, negative outside, and
behaves like the Euclidean distance to the boundary near the boundary.
Points are complex arrays of shape (..., n).
"""

from __future__ import annotations

import numpy as np

from .discs import AnalyticDisc, roots_of_unity
from .errors import ConfigurationError, PreconditionError


class DomainSpec:
    """A domain given by a vectorised signed margin function."""

    def __init__(self, name, n, margin_fn):
        self.name = name
        self.n = n
        self._margin_fn = margin_fn

    def margin(self, points):
        points = np.asarray(points, dtype=complex)
        if points.shape[-1] != self.n:
            raise ConfigurationError(
                f"{self.name}: expected points in C^{self.n}, "
                f"got last axis {points.shape[-1]}")
        return self._margin_fn(points)

    def contains(self, points):
        return self.margin(points) > 0

    def __repr__(self):
        return f"DomainSpec({self.name!r}, n={self.n})"


class Obstacle:
    """The function phi on W: a vectorised evaluator plus metadata."""

    def __init__(self, eval_fn, description="", rotation_invariant_last=False,
                 lower_bound=-np.inf, upper_bound=np.inf):
        self._eval_fn = eval_fn
        self.description = description
        self.rotation_invariant_last = rotation_invariant_last
        self.lower_bound = lower_bound
        self.upper_bound = upper_bound

    def __call__(self, points):
        points = np.asarray(points, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.asarray(self._eval_fn(points), dtype=float)

    def __repr__(self):
        return f"Obstacle({self.description!r})"


def ball(r, n):
    """The Euclidean ball of radius r in C^n."""
    def margin(p):
        return r - np.linalg.norm(p, axis=-1)
    return DomainSpec(f"ball(r={r}, n={n})", n, margin)


def shell_pair(n):
    """W = (ball of radius 4) minus (closed ball of radius 1), X = ball of radius 4."""
    def w_margin(p):
        nr = np.linalg.norm(p, axis=-1)
        return np.minimum(4.0 - nr, nr - 1.0)
    w = DomainSpec(f"shell(n={n})", n, w_margin)
    return w, ball(4.0, n)


def planar_annulus_pair():
    """W = annulus 1 < |z| < 2 in C, X = disc of radius 2."""
    def w_margin(p):
        a = np.abs(p[..., 0])
        return np.minimum(2.0 - a, a - 1.0)
    w = DomainSpec("planar_annulus", 1, w_margin)
    return w, ball(2.0, 1)


def shell_disc(x, m=256):
    """The radius-3 sphere disc through a centre x in the ball of radius 2.

    First component is a Moebius rescaling
        zeta -> rho * (rho*zeta + x1) / (rho + conj(x1)*zeta),
    rho = sqrt(9 - |x2|^2 - ... - |xn|^2); the remaining components are
    constant.  The boundary lies exactly on the sphere of radius 3 and
    the centre is exactly x.
    """
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    n = x.size
    if n < 2:
        raise PreconditionError("shell disc needs dimension >= 2")
    if np.linalg.norm(x) >= 2.0:
        raise PreconditionError("centre must lie in the ball of radius 2")
    rho = np.sqrt(9.0 - np.sum(np.abs(x[1:]) ** 2))
    zeta = roots_of_unity(m)
    samples = np.tile(x, (m, 1))
    samples[:, 0] = rho * (rho * zeta + x[0]) / (rho + np.conj(x[0]) * zeta)
    return AnalyticDisc(samples)


# ---------------------------------------------------------------------------
# The two-component counterexample pair in C^2.
# ---------------------------------------------------------------------------

def _curve_points(delta, t):
    """The joining curve t -> (1 + e^{2 pi i (2t-1)/3}, (1 - delta/2) t)."""
    z1 = 1.0 + np.exp(2j * np.pi * (2.0 * t - 1.0) / 3.0)
    z2 = (1.0 - delta / 2.0) * t + 0j
    return z1, z2


def _dist_to_curve(points, delta, t_grid):
    """Euclidean distance in C^2 from each point to the sampled curve."""
    c1, c2 = _curve_points(delta, t_grid)
    flat = points.reshape(-1, 2)
    out = np.empty(flat.shape[0])
    block = 512
    for lo in range(0, flat.shape[0], block):
        chunk = flat[lo:lo + block]
        d2 = (np.abs(chunk[:, 0:1] - c1[None, :]) ** 2
              + np.abs(chunk[:, 1:2] - c2[None, :]) ** 2)
        out[lo:lo + block] = np.sqrt(d2.min(axis=1))
    return out.reshape(points.shape[:-1])


def _semicircle_dist(z, upper):
    """Distance to the radius-1/2 semicircle (upper or lower half)."""
    on_half = np.imag(z) >= 0 if upper else np.imag(z) <= 0
    radial = np.abs(np.abs(z) - 0.5)
    ends = np.minimum(np.abs(z - 0.5), np.abs(z + 0.5))
    return np.where(on_half, radial, ends)


def counterexample_pair(delta=0.3, tau=0.05, rho_u=0.05, eps_moll=0.01,
                        curve_samples=4096):
    """The pair in C^2 on which the disc formula has a gap.

    W is the union of a flat slab W1 = D x {|z2| < delta}, an annular
    slab W2 = D x {1-delta < |z2| < 1}, and a tube W3 of radius tau
    around the curve joining them.  X = D^2 union W3.  The obstacle is
    -1 on thickened semicircle products V1 in W1 and V2 in W2 and 0
    elsewhere, mollified linearly over a band of width eps_moll.

    Returns (W, X, phi).
    """
    if not 0 < delta < 0.5:
        raise ConfigurationError("delta must lie in (0, 1/2)")
    if not 0 < tau < 0.2:
        raise ConfigurationError("tube radius out of range")
    t_grid = np.linspace(0.0, 1.0, curve_samples)

    def m1(p):
        return np.minimum(1.0 - np.abs(p[..., 0]), delta - np.abs(p[..., 1]))

    def m2(p):
        a2 = np.abs(p[..., 1])
        return np.minimum(1.0 - np.abs(p[..., 0]),
                          np.minimum(a2 - (1.0 - delta), 1.0 - a2))

    def m3(p, where=None):
        # tube margin is expensive; evaluate only where requested
        if where is None:
            return tau - _dist_to_curve(p, delta, t_grid)
        out = np.full(p.shape[:-1], -np.inf)
        if np.any(where):
            out[where] = tau - _dist_to_curve(p[where], delta, t_grid)
        return out

    def w_margin(p):
        base = np.maximum(m1(p), m2(p))
        need = base < 0.05
        return np.maximum(base, m3(p, need))

    def x_margin(p):
        base = np.minimum(1.0 - np.abs(p[..., 0]), 1.0 - np.abs(p[..., 1]))
        need = base < 0.05
        return np.maximum(base, m3(p, need))

    w = DomainSpec(f"counterexample_W(delta={delta}, tau={tau})", 2, w_margin)
    x = DomainSpec(f"counterexample_X(delta={delta}, tau={tau})", 2, x_margin)

    def ramp(margin):
        return np.clip(1.0 + margin / eps_moll, 0.0, 1.0)

    def phi_eval(p):
        v1 = np.minimum(rho_u - _semicircle_dist(p[..., 0], upper=True),
                        delta - np.abs(p[..., 1]))
        a2 = np.abs(p[..., 1])
        v2 = np.minimum(rho_u - _semicircle_dist(p[..., 0], upper=False),
                        np.minimum(a2 - (1.0 - delta), 1.0 - a2))
        return -np.maximum(ramp(v1), ramp(v2))

    phi = Obstacle(phi_eval, description="counterexample step obstacle",
                   lower_bound=-1.0, upper_bound=0.0)
    return w, x, phi


def counterexample_projection_interval(delta=0.3, tau=0.05, samples=20001):
    """Probe the real-axis interval (a, b) cut out by the tube projection.

    Scans Re z1 over [1, 2.5] and reports the range where some tube point
    projects within the real axis.  Used to document the probed values of
    a and b rather than assuming them.
    """
    t = np.linspace(0.0, 1.0, samples)
    z1, _ = _curve_points(delta, t)
    # a point x on the real axis is in the projection iff some curve point
    # has |z1 - x| <= tau in the z1-plane (the tube is a C^2 ball, so this
    # is a slight overestimate; adequate for documentation probes)
    reachable = np.abs(np.imag(z1)) <= tau
    if not np.any(reachable):
        return None
    lo = np.min(np.real(z1[reachable]) - np.sqrt(
        np.maximum(tau ** 2 - np.imag(z1[reachable]) ** 2, 0.0)))
    hi = np.max(np.real(z1[reachable]) + np.sqrt(
        np.maximum(tau ** 2 - np.imag(z1[reachable]) ** 2, 0.0)))
    return float(lo), float(hi)
