"""Quadrature of boundary averages of an obstacle along a disc.

The average over the unit circle is taken against normalised arc length,
realised as the uniform trapezoidal rule on the sample grid; for
band-limited discs and smooth obstacles this rule is spectrally accurate.
"""

from __future__ import annotations

import numpy as np

from .discs import roots_of_unity
from .errors import ConfigurationError, EvaluationError


class QuadratureGrid:
    """M uniform nodes on the unit circle with weights 1/M."""

    def __init__(self, m):
        if m < 8 or (m & (m - 1)) != 0:
            raise ConfigurationError(
                f"quadrature size must be a power of two >= 8, got {m}")
        self.M = m
        self.nodes = roots_of_unity(m)
        self.weights = np.full(m, 1.0 / m)


def poisson_functional(disc, phi, grid=None):
    """The boundary average of phi along the disc: mean of phi(f(node)).

    If ``grid`` is omitted the disc's own sample grid is used; otherwise
    the disc must be sampled on a grid of the same size.
    """
    if grid is not None and grid.M != disc.M:
        raise ConfigurationError(
            f"grid size {grid.M} does not match disc sample count {disc.M}")
    values = phi(disc.samples)
    if not np.all(np.isfinite(values)):
        bad = int(np.argmax(~np.isfinite(values)))
        raise EvaluationError(
            f"obstacle evaluation not finite at boundary node {bad}")
    return float(np.mean(values))


def partial_boundary_stats(disc, phi, w, grid=None):
    """Mass and integral of phi over the part of the boundary inside W.

    Returns (mass, integral) where mass is the fraction of boundary nodes
    with positive W-margin and integral sums phi only over those nodes
    with weight 1/M.  A boundary entirely outside W yields (0.0, 0.0).
    """
    if grid is not None and grid.M != disc.M:
        raise ConfigurationError(
            f"grid size {grid.M} does not match disc sample count {disc.M}")
    inside = w.margin(disc.samples) > 0
    mass = float(np.count_nonzero(inside)) / disc.M
    if mass == 0.0:
        return 0.0, 0.0
    values = phi(disc.samples[inside])
    if not np.all(np.isfinite(values)):
        raise EvaluationError("obstacle evaluation not finite on boundary arc")
    integral = float(np.sum(values)) / disc.M
    return mass, integral
