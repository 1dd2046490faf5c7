"""Upper approximation of disc-functional envelopes by penalised search.

The boundary-in-W and interior-in-X constraints are enforced by squared
hinge penalties on the signed margins (with a small feasibility slack so
reported optima sit strictly inside), while the centre constraint is
structural in every disc family.  Each (family, start) pair is minimised
independently by Nelder-Mead from seeded initial parameters; results
merge deterministically by (value, family index, start index).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import ConfigurationError, EvaluationError, PreconditionError
from .functionals import QuadratureGrid, partial_boundary_stats, \
    poisson_functional

#: Interior containment is probed on this polar grid (design default).
INTERIOR_RADII = (0.25, 0.5, 0.75, 0.95)
INTERIOR_ANGLES = 32

BARRIER = 1e6


def interior_probe_points(radii=INTERIOR_RADII, angles=INTERIOR_ANGLES):
    rr = np.asarray(radii)
    zeta = np.exp(2j * np.pi * np.arange(angles) / angles)
    return (rr[:, None] * zeta[None, :]).ravel()


@dataclass
class EnvelopeRequest:
    pair: tuple                # (W, X) DomainSpecs
    phi: object                # Obstacle
    x: np.ndarray              # centre point in X
    families: list
    penalty_weight: float = 1e3
    starts: int = 8
    budget: int = 400
    seed: int = 0
    grid: QuadratureGrid = None
    feas_margin: float = 1e-5  # slack inside the penalty hinge
    eps_feas: float = 1e-6     # certification threshold on violations

    def __post_init__(self):
        self.x = np.atleast_1d(np.asarray(self.x, dtype=complex))
        if self.grid is None:
            self.grid = QuadratureGrid(512)
        w, x_spec = self.pair
        if not np.all(x_spec.margin(self.x[None, :]) > 0):
            raise PreconditionError("centre lies outside X")


@dataclass
class EnvelopeResult:
    value: float
    best_params: np.ndarray
    family: str
    start_index: int
    max_violation: float
    feasible: bool
    trace: list = field(default_factory=list)
    disc: object = None


def _violation(req, disc):
    """Max constraint violation: boundary outside W or interior outside X.

    Returns (violation, strict) where strict certifies that every boundary
    node is strictly inside W and every interior probe strictly inside X.
    """
    w, x_spec = req.pair
    bm = w.margin(disc.samples)
    probes = disc.evaluate(interior_probe_points())
    im = x_spec.margin(probes)
    violation = float(max(np.max(np.maximum(0.0, -bm)),
                          np.max(np.maximum(0.0, -im))))
    strict = bool(np.min(bm) > 0 and np.min(im) > 0)
    return violation, strict


def _penalty(req, disc):
    w, x_spec = req.pair
    mu = req.feas_margin
    bm = w.margin(disc.samples)
    probes = disc.evaluate(interior_probe_points())
    im = x_spec.margin(probes)
    return req.penalty_weight * (
        float(np.sum(np.maximum(0.0, mu - bm) ** 2))
        + float(np.sum(np.maximum(0.0, mu - im) ** 2)))


class _Tracker:
    """Best-so-far bookkeeping across objective evaluations of one start."""

    def __init__(self):
        self.best_obj = np.inf
        self.best_feasible_value = np.inf
        self.best_feasible_params = None
        self.least_violation = np.inf
        self.least_violation_params = None
        self.least_violation_value = np.inf
        self.trace = []

    def record(self, obj, value, violation, strict, params):
        if strict and value < self.best_feasible_value:
            self.best_feasible_value = value
            self.best_feasible_params = np.array(params, dtype=float)
        if violation < self.least_violation or (
                violation == self.least_violation
                and value < self.least_violation_value):
            self.least_violation = violation
            self.least_violation_value = value
            self.least_violation_params = np.array(params, dtype=float)
        self.best_obj = min(self.best_obj, obj)
        self.trace.append(self.best_obj)


def _run_start(req, family, objective_fn, rng, start_index):
    tracker = _Tracker()

    def wrapped(params):
        bad = family.infeasibility(params)
        if bad > 0:
            return BARRIER * (1.0 + bad)
        disc = family.build(params, req.grid.M)
        if disc is None:
            return BARRIER
        try:
            obj, value, violation, strict = objective_fn(disc)
        except EvaluationError:
            # obstacle undefined along this disc (always infeasible territory)
            return BARRIER
        if not np.isfinite(obj):
            return BARRIER
        tracker.record(obj, value, violation, strict, params)
        return obj

    p0 = family.initial(rng, start_index)
    if family.n_params == 0:
        wrapped(p0)
    else:
        minimize(wrapped, p0, method="Nelder-Mead",
                 options={"maxfev": req.budget, "xatol": 1e-9,
                          "fatol": 1e-12, "adaptive": True})
    return tracker


def _search(req, objective_fn):
    best = None       # (value, f_idx, s_idx, params, tracker)
    fallback = None   # least violating overall
    for f_idx, family in enumerate(req.families):
        n_starts = req.starts if family.n_params > 0 else 1
        for s_idx in range(n_starts):
            rng = np.random.default_rng([req.seed, f_idx, s_idx])
            tr = _run_start(req, family, objective_fn, rng, s_idx)
            if tr.best_feasible_params is not None:
                key = (tr.best_feasible_value, f_idx, s_idx)
                if best is None or key < (best[0], best[1], best[2]):
                    best = (tr.best_feasible_value, f_idx, s_idx,
                            tr.best_feasible_params, tr)
            if tr.least_violation_params is not None:
                key = (tr.least_violation, tr.least_violation_value,
                       f_idx, s_idx)
                if fallback is None or key < fallback[0]:
                    fallback = (key, f_idx, s_idx,
                                tr.least_violation_params, tr)
    return best, fallback


def minimize_envelope(req):
    """Best feasible boundary average of the obstacle over the disc families.

    The reported value is the plain quadrature average along the winning
    disc (penalties removed); it is an upper bound for the true envelope,
    which in turn dominates the largest plurisubharmonic subextension.
    """

    def objective_fn(disc):
        value = poisson_functional(disc, req.phi)
        violation, strict = _violation(req, disc)
        return value + _penalty(req, disc), value, violation, strict

    best, fallback = _search(req, objective_fn)
    if best is not None:
        value, f_idx, s_idx, params, tr = best
        disc = req.families[f_idx].build(params, req.grid.M)
        return EnvelopeResult(
            value=float(poisson_functional(disc, req.phi)),
            best_params=params, family=req.families[f_idx].name,
            start_index=s_idx, max_violation=_violation(req, disc)[0],
            feasible=True, trace=tr.trace, disc=disc)
    if fallback is None:
        raise ConfigurationError("no family produced any disc")
    key, f_idx, s_idx, params, tr = fallback
    disc = req.families[f_idx].build(params, req.grid.M)
    return EnvelopeResult(
        value=float(poisson_functional(disc, req.phi)),
        best_params=params, family=req.families[f_idx].name,
        start_index=s_idx, max_violation=_violation(req, disc)[0],
        feasible=False, trace=tr.trace, disc=disc)


def partial_envelope(req, eps):
    """Upper bound on the partial-boundary infimum at tolerance eps.

    Minimises the integral of the obstacle over the in-W part of the
    boundary subject to that part having measure above 1 - eps, with the
    disc itself confined to X.  Full-boundary discs always qualify, so
    the bound is nonincreasing as eps grows (up to solver noise).
    """
    if not 0.0 < eps < 1.0:
        raise ConfigurationError("eps must lie in (0, 1)")
    if eps <= 2.0 / req.grid.M:
        raise ConfigurationError(
            f"eps={eps} unresolvable at M={req.grid.M}; need eps > 2/M")
    w, x_spec = req.pair
    mu = req.feas_margin
    need = 1.0 - eps + 0.5 / req.grid.M

    def objective_fn(disc):
        mass, integral = partial_boundary_stats(disc, req.phi, w)
        bm = x_spec.margin(disc.samples)
        probes = disc.evaluate(interior_probe_points())
        im = x_spec.margin(probes)
        pen = req.penalty_weight * (
            max(0.0, need - mass) ** 2
            + float(np.sum(np.maximum(0.0, mu - bm) ** 2))
            + float(np.sum(np.maximum(0.0, mu - im) ** 2)))
        violation = float(max(
            np.max(np.maximum(0.0, -bm)),
            np.max(np.maximum(0.0, -im)),
            0.0 if mass > 1.0 - eps else (1.0 - eps) - mass + 1e-12))
        strict = bool(np.min(bm) > 0 and np.min(im) > 0
                      and mass > 1.0 - eps)
        return integral + pen, integral, violation, strict

    best, fallback = _search(req, objective_fn)
    if best is not None:
        return float(best[0])
    if fallback is None:
        raise ConfigurationError("no family produced any disc")
    return float(fallback[0][1])


def sample_feasible_values(req, n_samples, m=None):
    """Draw random parameter vectors across the request's families, keep
    the feasible discs, and return their boundary averages.

    Used for sampled gap demonstrations; this is evidence about the
    searched family only, not a bound over all discs.
    """
    m = m or req.grid.M
    values = []
    for f_idx, family in enumerate(req.families):
        rng = np.random.default_rng([req.seed, 7919, f_idx])
        for s_idx in range(n_samples):
            params = family.initial(rng, start_index=s_idx + 1)
            if family.infeasibility(params) > 0:
                continue
            disc = family.build(params, m)
            if disc is None:
                continue
            if _violation(req, disc)[1]:
                values.append(poisson_functional(disc, req.phi))
            if family.n_params == 0:
                break
    return np.asarray(values)
