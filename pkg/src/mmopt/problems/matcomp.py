"""Low-rank matrix completion.

Fits a rank-k matrix to the observed entries of Y by minimizing the
observed-entry loss 0.5 sum_observed (y - x)^2 under a rank-set distance
penalty.  Missing entries are handled by symmetry restoration: the current
iterate fills them in, giving the completed matrix Z_n = observed Y plus
unobserved X_n, and the update is the exact minimizer of

    0.5 ||Z_n - X||_F^2 + (w_n / 2) ||X - P_rank(X_n)||_F^2,

namely the convex combination (Z_n + w_n P_rank(X_n)) / (1 + w_n).
"""

from dataclasses import dataclass

import numpy as np

from ..penalty import TuningSchedule, lipschitz_mc
from ..proxdist import ProxObjective, pd_run
from ..sets import RankSet, project_rank

__all__ = ["CompletionProblem", "CompletionObjective", "mc_step", "solve_matcomp"]


@dataclass
class CompletionProblem:
    """Observed entries of a p x q matrix and the target rank.

    ``Y`` holds the observed values (entries outside ``mask`` are ignored)
    and ``mask`` flags the observed positions.
    """

    Y: np.ndarray
    mask: np.ndarray
    k: int

    def __post_init__(self):
        self.Y = np.asarray(self.Y, dtype=float)
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.Y.shape != self.mask.shape:
            raise ValueError("values and mask must share a shape")
        if self.k < 1:
            raise ValueError("target rank must be at least 1")
        if not self.mask.any():
            raise ValueError("at least one observed entry is required")

    @classmethod
    def from_entries(cls, shape, indices, values, k):
        """Build from a list of (i, j) index pairs and matching values."""
        indices = [tuple(ij) for ij in indices]
        if len(set(indices)) != len(indices):
            raise ValueError("observed indices must be unique")
        Y = np.zeros(shape)
        mask = np.zeros(shape, dtype=bool)
        for (i, j), v in zip(indices, values):
            if not (0 <= i < shape[0] and 0 <= j < shape[1]):
                raise ValueError(f"index {(i, j)} out of range for shape {shape}")
            Y[i, j] = v
            mask[i, j] = True
        return cls(Y, mask, k)

    def observed_values(self):
        return self.Y[self.mask]

    def observed_loss(self, X):
        gap = (self.Y - X)[self.mask]
        return 0.5 * float(gap @ gap)


class CompletionObjective(ProxObjective):
    """Observed-entry loss whose prox acts on the completed surrogate Z_n."""

    def __init__(self, prob):
        self.prob = prob
        self._Z = None

    def value(self, X):
        return self.prob.observed_loss(np.asarray(X, dtype=float))

    def rebase(self, X_n):
        self._Z = np.where(self.prob.mask, self.prob.Y, np.asarray(X_n, dtype=float))

    def prox(self, p, t):
        if self._Z is None:
            raise RuntimeError("prox requires a rebase at the current iterate")
        w = 1.0 / t
        return (self._Z + w * np.asarray(p, dtype=float)) / (1.0 + w)


def mc_step(X_n, prob, w_n):
    """One completion update at weight w_n.

    Builds Z_n = observed Y + unobserved X_n and blends it with the rank
    projection of X_n: (Z_n + w_n P(X_n)) / (1 + w_n), the stationary point
    of the quadratic surrogate.
    """
    if w_n <= 0:
        raise ValueError("weight must be positive")
    X_n = np.asarray(X_n, dtype=float)
    Z = np.where(prob.mask, prob.Y, X_n)
    return (Z + w_n * project_rank(X_n, prob.k)) / (1.0 + w_n)


def solve_matcomp(prob, sched=None, max_iter=1000, tol_step=1e-8, tol_feas=1e-8,
                  X0=None):
    """Complete the matrix by the proximal distance iteration.

    Starts from the observed entries (zeros elsewhere) unless ``X0`` is
    given.  The trace's f column is the observed-entry loss at each
    iterate.  Returns the final completed matrix and the trace.
    """
    if sched is None:
        sched = TuningSchedule(rho0=1.0, alpha=1.2,
                               rho_max=lipschitz_mc(prob.observed_values()),
                               eps0=1.0, beta=1.2, eps_min=1e-15)
    if X0 is None:
        X0 = np.where(prob.mask, prob.Y, 0.0)
    f = CompletionObjective(prob)
    return pd_run(X0, f, [RankSet(prob.k)], sched, max_iter=max_iter,
                  tol_step=tol_step, tol_feas=tol_feas)
