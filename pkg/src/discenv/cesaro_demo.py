"""Fejer-smoothing convergence monitor on a seeded smooth disc loop."""

from __future__ import annotations

import numpy as np

from .discs import cesaro_mean, random_smooth_loop


def cesaro_convergence(m=64, m_w=2048, j_values=(8, 16, 32, 64, 128, 256),
                       seed=0, amplitude=0.02):
    """Sup distance between the smoothed loop and the original for each j.

    Returns a list of (j, sup_error) pairs; for a smooth loop the errors
    decrease as j grows.
    """
    loop, h = random_smooth_loop(m=m, m_w=m_w, seed=seed, amplitude=amplitude)
    out = []
    for j in j_values:
        smoothed = cesaro_mean(loop, h, j)
        err = float(np.max(np.abs(smoothed.samples - loop.samples)))
        out.append((int(j), err))
    return out
