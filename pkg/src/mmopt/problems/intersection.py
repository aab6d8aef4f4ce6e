"""Projection onto an intersection of closed convex sets.

Minimizes f(x) = sqrt(||x - y||^2 + delta) under the smoothed multi-set
distance penalty.  The proximal map of f anchored at the average
projection stays on the segment between y and the anchor, so each update
reduces to a one-dimensional root-find for the mixing coefficient alpha.
"""

import math

import numpy as np

from ..penalty import TuningSchedule
from ..proxdist import ProxObjective, pd_run

__all__ = ["alpha_search", "SqrtDistanceToPoint", "solve_intersection_projection"]


def alpha_search(d, delta, kw, tol=1e-12):
    """Root of h'(a) = a d^2 / sqrt(a^2 d^2 + delta) - kw (1 - a) d^2 in (0,1).

    h is the surrogate restricted to the segment x = (1-a) y + a pbar with
    d = ||y - pbar||.  h'(0) < 0 < h'(1) brackets a unique root; safeguarded
    Newton falls back to bisection whenever a step leaves the bracket.
    """
    if d <= 0:
        raise ValueError("anchor gap d must be positive")
    if delta <= 0 or kw <= 0:
        raise ValueError("delta and kw must be positive")
    d2 = d * d

    def hp(a):
        return a * d2 / math.sqrt(a * a * d2 + delta) - kw * (1.0 - a) * d2

    def hpp(a):
        root = math.sqrt(a * a * d2 + delta)
        return d2 * delta / root**3 + kw * d2

    lo, hi = 0.0, 1.0
    a = kw / (1.0 / math.sqrt(delta) + kw)  # stationary coefficient at a ~ 0
    for _ in range(200):
        val = hp(a)
        if abs(val) <= tol:
            return a
        if val > 0:
            hi = a
        else:
            lo = a
        step = val / hpp(a)
        a_new = a - step
        if not lo < a_new < hi:
            a_new = 0.5 * (lo + hi)
        if hi - lo <= 1e-16:
            return a_new
        a = a_new
    return a


class SqrtDistanceToPoint(ProxObjective):
    """f(x) = sqrt(||x - y||^2 + delta), a 1-Lipschitz pull toward y."""

    def __init__(self, y, delta=1.0):
        if delta <= 0:
            raise ValueError("delta must be positive")
        self.y = np.asarray(y, dtype=float)
        self.delta = float(delta)

    def value(self, x):
        return math.sqrt(float(np.sum((np.asarray(x) - self.y) ** 2)) + self.delta)

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        return (x - self.y) / self.value(x)

    def prox(self, p, t):
        p = np.asarray(p, dtype=float)
        d = float(np.linalg.norm(self.y - p))
        if d == 0.0:
            return self.y.copy()
        a = alpha_search(d, self.delta, 1.0 / t)
        return (1.0 - a) * self.y + a * p


def solve_intersection_projection(y, sets, delta=1.0, sched=None, max_iter=1000,
                                  tol_step=1e-8, tol_feas=1e-8):
    """Approximate the projection of y onto the intersection of the sets.

    Runs the proximal distance iteration started at y itself.  The default
    schedule holds rho at 2 and decays eps by a factor 4 per iteration,
    which trades accuracy of the early iterates for fast feasibility.
    """
    if sched is None:
        sched = TuningSchedule(rho0=2.0, alpha=1.2, rho_max=2.0,
                               eps0=1.0, beta=4.0, eps_min=1e-15)
    f = SqrtDistanceToPoint(y, delta)
    return pd_run(y, f, list(sets), sched, max_iter=max_iter,
                  tol_step=tol_step, tol_feas=tol_feas)
