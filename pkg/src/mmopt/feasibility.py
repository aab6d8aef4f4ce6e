"""Set-feasibility algorithms built from projections.

Averaged and alternating projections both arise from majorizing squared
set distances by squared distances to the current projections, so each
sweep decreases its weighted sum of squared distances.  Dykstra's
algorithm augments cyclic projections with per-set correction increments
and converges to the exact projection onto an intersection of convex sets.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "averaged_projections_step",
    "alternating_projections_step",
    "DykstraTrace",
    "dykstra_project",
]


def averaged_projections_step(x_n, sets, weights=None):
    """Weighted average of the projections of x_n onto each set.

    Weights must be nonnegative and sum to one; omitted weights default to
    uniform.  The update never increases sum_j alpha_j dist(x, S_j)^2.
    """
    x_n = np.asarray(x_n, dtype=float)
    m = len(sets)
    if weights is None:
        weights = np.full(m, 1.0 / m)
    else:
        weights = np.asarray(weights, dtype=float)
        if weights.size != m or np.any(weights < 0):
            raise ValueError("weights must be nonnegative, one per set")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to one")
    out = np.zeros_like(x_n)
    for a, S in zip(weights, sets):
        out += a * S.project(x_n)
    return out


def alternating_projections_step(x_n, primary, others):
    """Project the mean of the secondary projections back onto the primary set.

    With a single secondary set this is the classical alternating update
    P_1(P_2(x)); with several it projects the average of their projections.
    """
    x_n = np.asarray(x_n, dtype=float)
    if not others:
        raise ValueError("at least one secondary set is required")
    mean = sum(S.project(x_n) for S in others) / len(others)
    return primary.project(mean)


@dataclass
class DykstraTrace:
    """Iterates of a Dykstra run, one entry per individual set-projection.

    ``points[0]`` is the starting point; each subsequent entry is the
    iterate right after one set's projection, cycling through the sets in
    the order given.
    """

    points: list = field(default_factory=list)
    converged: bool = False
    cycles: int = 0


def dykstra_project(y, sets, max_iter=1000, tol=1e-12):
    """Project y onto the intersection of convex sets by Dykstra's algorithm.

    Cycles through the sets, projecting the current point plus that set's
    correction increment and then updating the increment; unlike plain
    alternating projections this converges to the exact projection of y.
    ``max_iter`` counts full cycles; convergence is declared when the
    iterate moves less than ``tol`` over a cycle.  On budget exhaustion the
    best iterate is returned with ``trace.converged`` False.
    """
    x = np.asarray(y, dtype=float).copy()
    increments = [np.zeros_like(x) for _ in sets]
    trace = DykstraTrace(points=[x.copy()])
    for cycle in range(max_iter):
        x_prev = x.copy()
        for j, S in enumerate(sets):
            shifted = x + increments[j]
            x = S.project(shifted)
            increments[j] = shifted - x
            trace.points.append(x.copy())
        trace.cycles = cycle + 1
        if np.linalg.norm(x - x_prev) <= tol:
            trace.converged = True
            break
    return x, trace
