"""Nonnegative quadratic programming and best-subset least squares.

Both problems share the quadratic objective 0.5 x'Ax + b'x whose proximal
map is a shifted linear solve (A + w I)^-1 (w y - b).  Caching one
eigendecomposition of A turns every solve into two matrix-vector products
with a diagonal rescaling in between, so the weight w can change freely
between iterations at no factorization cost.  The subset-constrained
regression is the same iteration with A = X'X, b = -X'y, and the sparsity
projection in place of the orthant projection.
"""

import numpy as np

from ..penalty import TuningSchedule, lipschitz_nqp
from ..proxdist import ProxObjective, pd_run
from ..sets import NonnegativeOrthant, SparsitySet, project_nonneg, project_sparsity

__all__ = ["SpectralCache", "QuadraticObjective", "LeastSquaresObjective",
           "solve_nqp", "solve_l0"]


class SpectralCache:
    """Eigendecomposition A = U diag(evals) U' reused across shifted solves."""

    def __init__(self, evals, U):
        self.evals = np.asarray(evals, dtype=float)
        self.U = np.asarray(U, dtype=float)

    @classmethod
    def from_symmetric(cls, A):
        evals, U = np.linalg.eigh(np.asarray(A, dtype=float))
        return cls(evals, U)

    @classmethod
    def from_design(cls, X):
        """Cache for X'X built from the singular value decomposition of X.

        Squaring the singular values instead of forming X'X keeps the small
        eigenvalues accurate.  Trailing eigenvalues are exactly zero when X
        has more columns than rows.
        """
        X = np.asarray(X, dtype=float)
        _, s, Vt = np.linalg.svd(X, full_matrices=True)
        evals = np.zeros(X.shape[1])
        evals[:s.size] = s**2
        order = np.argsort(evals)
        return cls(evals[order], Vt.T[:, order])

    def solve_shifted(self, rhs, w):
        """Solve (A + w I) x = rhs through the cached decomposition."""
        return self.U @ ((self.U.T @ rhs) / (self.evals + w))

    def reconstruct(self):
        return (self.U * self.evals) @ self.U.T


class QuadraticObjective(ProxObjective):
    """f(x) = 0.5 x'Ax + b'x with spectral-cache proximal map."""

    def __init__(self, A, b, cache=None):
        self.A = np.asarray(A, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.cache = cache if cache is not None else SpectralCache.from_symmetric(self.A)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * float(x @ self.A @ x) + float(self.b @ x)

    def gradient(self, x):
        return self.A @ x + self.b

    def prox(self, y, t):
        w = 1.0 / t
        return self.cache.solve_shifted(w * np.asarray(y, dtype=float) - self.b, w)


class LeastSquaresObjective(ProxObjective):
    """f(beta) = 0.5 ||y - X beta||^2; prox solves (X'X + w I) beta = w p + X'y."""

    def __init__(self, X, y):
        self.X = np.asarray(X, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.Xty = self.X.T @ self.y
        self.cache = SpectralCache.from_design(self.X)

    def value(self, beta):
        r = self.y - self.X @ np.asarray(beta, dtype=float)
        return 0.5 * float(r @ r)

    def gradient(self, beta):
        return self.X.T @ (self.X @ beta - self.y)

    def prox(self, p, t):
        w = 1.0 / t
        return self.cache.solve_shifted(w * np.asarray(p, dtype=float) + self.Xty, w)


def _default_quadratic_schedule(rho_cap):
    # gentle geometric ramp; the cap is a deflated Lipschitz estimate
    return TuningSchedule(rho0=1.0, alpha=1.005, rho_max=rho_cap,
                          eps0=1.0, beta=1.005, eps_min=1e-15)


def solve_nqp(A, b, sched=None, precondition=False, max_iter=1000,
              tol_step=1e-8, tol_feas=1e-8, x0=None):
    """Minimize 0.5 x'Ax + b'x subject to x >= 0.

    ``precondition`` rescales A to its correlation matrix, solves in the
    transformed variables (the orthant maps to itself under the positive
    diagonal change of variables), and maps the solution back.  The default
    schedule caps rho at one tenth of the correlation-based Lipschitz
    estimate.  Returns the orthant-projected final iterate and the trace;
    objective values in the trace equal the original objective regardless
    of preconditioning.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    lam = np.linalg.eigvalsh(A)
    if lam[0] <= 0:
        raise ValueError("matrix must be positive definite")
    if sched is None:
        sched = _default_quadratic_schedule(0.1 * lipschitz_nqp(A, b, precondition=True))
    if precondition:
        d = np.sqrt(np.diag(A))
        A_use = A / np.outer(d, d)
        b_use = b / d
    else:
        d = None
        A_use, b_use = A, b
    f = QuadraticObjective(A_use, b_use)
    start = np.zeros(b.size) if x0 is None else np.asarray(x0, dtype=float) * (
        d if d is not None else 1.0)
    x, trace = pd_run(start, f, [NonnegativeOrthant()], sched, max_iter=max_iter,
                      tol_step=tol_step, tol_feas=tol_feas)
    x = project_nonneg(x)
    if d is not None:
        x = x / d
    return x, trace


def solve_l0(X, y, k, sched=None, max_iter=1000, tol_step=1e-8, tol_feas=1e-8,
             x0=None):
    """Least squares with at most k nonzero coefficients.

    Same iteration as :func:`solve_nqp` with the hard-thresholding
    projection replacing the orthant; the spectral cache comes from the
    singular value decomposition of the design matrix.  The final iterate
    is projected onto the sparsity set, so the returned vector always has
    at most k nonzeros.  No support polishing is applied.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if k < 1:
        raise ValueError("sparsity level must be at least 1")
    f = LeastSquaresObjective(X, y)
    if sched is None:
        A = f.cache.reconstruct()
        lam = np.linalg.eigvalsh(A)
        if lam[0] > 1e-12 * max(lam[-1], 1.0):
            cap = 0.1 * lipschitz_nqp(A, -f.Xty)
        else:
            # singular design: condition-based bound unavailable
            cap = 3.0 * float(np.linalg.norm(f.Xty))
        sched = _default_quadratic_schedule(cap)
    start = np.zeros(X.shape[1]) if x0 is None else np.asarray(x0, dtype=float)
    beta, trace = pd_run(start, f, [SparsitySet(k)], sched, max_iter=max_iter,
                         tol_step=tol_step, tol_feas=tol_feas)
    return project_sparsity(beta, k), trace
