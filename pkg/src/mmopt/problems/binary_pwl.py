"""Binary piecewise-linear minimization.

Minimizes f(x) = sum_{i<j} w_ij |x_i - x_j| + b . x over the vertices
{0,1}^d.  Each pairwise term is majorized through its midpoint,
|x_i - x_j| <= |x_i - m_ij| + |x_j - m_ij| with m_ij = (x_i^n + x_j^n)/2,
which separates the coordinates; every coordinate then solves an exact
one-dimensional proximal problem, so the whole sweep is a simultaneous
(parallelizable) update.
"""

import numpy as np

from ..penalty import TuningSchedule, lipschitz_bp
from ..proxdist import ProxObjective, pd_run
from ..sets import BinaryVertices, project_binary

__all__ = ["onedim_pwl_prox", "PairwiseAbsObjective", "solve_binary_pwl"]


def onedim_pwl_prox(breakpoints, weights, beta, w, p):
    """Exact minimizer of sum_i c_i |x - a_i| + beta x + (w/2)(x - p)^2.

    The derivative is piecewise linear and strictly increasing (w > 0), so
    a single sorted scan locates the interval or kink containing its zero;
    no iteration is involved.
    """
    if w <= 0:
        raise ValueError("quadratic weight must be positive")
    a = np.asarray(breakpoints, dtype=float).ravel()
    c = np.asarray(weights, dtype=float).ravel()
    if a.size != c.size:
        raise ValueError("one weight per breakpoint is required")
    if np.any(c < 0):
        raise ValueError("breakpoint weights must be nonnegative")
    live = c > 0
    a, c = a[live], c[live]
    if a.size == 0:
        return p - beta / w
    order = np.argsort(a, kind="stable")
    a, c = a[order], c[order]
    total = float(np.sum(c))
    # prefix[m] = sum of weights at breakpoints strictly left of interval m
    prefix = np.concatenate([[0.0], np.cumsum(c)])
    # zero of the derivative on each open interval between breakpoints
    candidates = p - (beta + 2.0 * prefix - total) / w
    uppers = np.concatenate([a, [np.inf]])
    for m in range(a.size + 1):
        if candidates[m] >= uppers[m]:
            continue  # zero lies further right
        lower = -np.inf if m == 0 else a[m - 1]
        # below the interval: the zero sits at the kink a[m-1]
        return float(candidates[m]) if candidates[m] > lower else float(lower)
    return float(candidates[-1])


class PairwiseAbsObjective(ProxObjective):
    """Pairwise absolute differences plus a linear term, with midpoint prox.

    ``value`` evaluates the true objective; ``prox`` acts on the separable
    midpoint majorant anchored by the most recent :meth:`rebase`.
    """

    def __init__(self, W, b):
        W = np.asarray(W, dtype=float)
        b = np.asarray(b, dtype=float)
        if not np.array_equal(W, W.T):
            raise ValueError("weight matrix must be symmetric")
        if np.any(np.diag(W) != 0.0):
            raise ValueError("weight matrix must have a zero diagonal")
        if np.any(W < 0.0):
            raise ValueError("weights must be nonnegative")
        self.W = W
        self.b = b
        self.d = b.size
        self._midpoints = None

    def value(self, x):
        x = np.asarray(x, dtype=float)
        iu, ju = np.triu_indices(self.d, k=1)
        return float(np.sum(self.W[iu, ju] * np.abs(x[iu] - x[ju])) + self.b @ x)

    def rebase(self, x_n):
        x_n = np.asarray(x_n, dtype=float)
        self._midpoints = 0.5 * (x_n[:, None] + x_n[None, :])

    def prox(self, p, t):
        if self._midpoints is None:
            raise RuntimeError("prox requires a rebase at the current iterate")
        p = np.asarray(p, dtype=float)
        w = 1.0 / t
        out = np.empty(self.d)
        for i in range(self.d):
            mask = np.arange(self.d) != i
            out[i] = onedim_pwl_prox(self._midpoints[i, mask], self.W[i, mask],
                                     self.b[i], w, p[i])
        return out


def solve_binary_pwl(W, b, sched=None, max_iter=200, tol_step=1e-8, tol_feas=1e-8,
                     x0=None):
    """Minimize the pairwise objective over {0,1}^d and round the result.

    The default schedule grows rho geometrically at rate 1.2 up to the
    objective's Lipschitz constant while eps decays at the same rate.  The
    iteration is capped at 200 sweeps because iterates tend to hover near
    the limit; the returned vector is the final iterate rounded onto the
    vertex set.  Returns (binary vector, trace).
    """
    f = PairwiseAbsObjective(W, b)
    if sched is None:
        sched = TuningSchedule(rho0=1.0, alpha=1.2, rho_max=lipschitz_bp(W, b),
                               eps0=1.0, beta=1.2, eps_min=1e-15)
    if x0 is None:
        x0 = np.full(f.d, 0.5)
    x, trace = pd_run(x0, f, [BinaryVertices()], sched, max_iter=max_iter,
                      tol_step=tol_step, tol_feas=tol_feas)
    return project_binary(x), trace
