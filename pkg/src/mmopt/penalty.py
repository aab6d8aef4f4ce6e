"""Smoothed distance penalties, tuning schedules, and Lipschitz estimates.

The distance-penalty solvers share three ingredients collected here: the
differentiable surrogate sqrt(dist^2 + eps) for the distance to a closed
set, the geometric schedules that ramp the penalty weight rho up and the
smoothing eps down, and per-problem Lipschitz constants that cap rho.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TuningSchedule",
    "PenaltyState",
    "schedule_at",
    "smoothed_distance",
    "proximal_weight",
    "lipschitz_bp",
    "lipschitz_nqp",
    "lipschitz_mc",
    "lipschitz_precision",
    "precision_root_intervals",
]


@dataclass(frozen=True)
class TuningSchedule:
    """Geometric ascent of rho and descent of eps with cap and floor.

    rho_n = min(alpha^n * rho0, rho_max) and eps_n = max(beta^-n * eps0,
    eps_min).  alpha = beta = 1 freezes both sequences, which is the regime
    where the MM descent guarantee applies exactly.
    """

    rho0: float = 1.0
    alpha: float = 1.2
    rho_max: float = float("inf")
    eps0: float = 1.0
    beta: float = 1.2
    eps_min: float = 1e-15

    def __post_init__(self):
        if self.rho0 <= 0 or self.eps0 <= 0:
            raise ValueError("rho0 and eps0 must be positive")
        if self.alpha < 1.0 or self.beta < 1.0:
            raise ValueError("alpha and beta must be at least 1")
        if self.rho_max <= 0:
            raise ValueError("rho_max must be positive")
        if self.eps_min <= 0:
            raise ValueError("eps_min must be positive")

    def at(self, n):
        """Return (rho_n, eps_n) for iteration index n >= 0."""
        if n < 0:
            raise ValueError("iteration index must be nonnegative")
        rho = min(self.rho0 * self.alpha**n, self.rho_max)
        eps = max(self.eps0 * self.beta**-n, self.eps_min)
        return rho, eps

    @classmethod
    def frozen(cls, rho, eps):
        """Constant schedule, used by descent monitors."""
        return cls(rho0=rho, alpha=1.0, rho_max=rho, eps0=eps, beta=1.0, eps_min=eps)


@dataclass
class PenaltyState:
    """Current penalty weight, smoothing, and derived proximal weight."""

    rho: float
    eps: float
    w: float

    def __post_init__(self):
        if self.rho > 0 and not self.w > 0:
            raise ValueError("proximal weight must be positive when rho > 0")


def schedule_at(sched, n):
    """Evaluate a :class:`TuningSchedule` at iteration n."""
    return sched.at(n)


def smoothed_distance(x, S, eps):
    """sqrt(dist(x, S)^2 + eps), the differentiable distance surrogate."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return math.sqrt(S.distance(x) ** 2 + eps)


def proximal_weight(x, sets, rho, eps):
    """Penalty-to-prox weight rho / sqrt(sum_j dist(x, S_j)^2 + eps)."""
    if rho <= 0 or eps <= 0:
        raise ValueError("rho and eps must be positive")
    if not sets:
        raise ValueError("at least one constraint set is required")
    sq = sum(S.distance(x) ** 2 for S in sets)
    return rho / math.sqrt(sq + eps)


# ---------------------------------------------------------------------------
# Lipschitz estimates
# ---------------------------------------------------------------------------

def lipschitz_bp(W, b):
    """Lipschitz constant of sum_{i<j} w_ij |x_i - x_j| + b.x.

    Returns sum_i sqrt(sum_{j != i} w_ij^2) + ||b||.  W must be symmetric
    with zero diagonal and nonnegative weights.
    """
    W = np.asarray(W, dtype=float)
    b = np.asarray(b, dtype=float)
    if not np.array_equal(W, W.T):
        raise ValueError("weight matrix must be symmetric")
    if np.any(np.diag(W) != 0.0):
        raise ValueError("weight matrix must have a zero diagonal")
    if np.any(W < 0.0):
        raise ValueError("weights must be nonnegative")
    return float(np.sum(np.sqrt(np.sum(W**2, axis=1)))) + float(np.linalg.norm(b))


def lipschitz_nqp(A, b, precondition=False):
    """Approximate Lipschitz constant (2 cond(A) + 1) ||b|| for 0.5 x'Ax + b'x.

    With ``precondition`` the bound is evaluated for the correlation-rescaled
    system D^-1 A D^-1 with right side D^-1 b, where D holds the square roots
    of the diagonal of A.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if precondition:
        d = np.sqrt(np.diag(A))
        A = A / np.outer(d, d)
        b = b / d
    lam = np.linalg.eigvalsh(A)
    if lam[0] <= 0:
        raise ValueError("matrix must be positive definite")
    return float((2.0 * lam[-1] / lam[0] + 1.0) * np.linalg.norm(b))


def lipschitz_mc(observed_values):
    """Gradient bound 3 * sqrt(sum of squared observed entries)."""
    y = np.asarray(observed_values, dtype=float).ravel()
    if y.size == 0:
        raise ValueError("at least one observed entry is required")
    return 3.0 * float(np.linalg.norm(y))


def _threshold_roots(omega, rhs, tol=1e-12):
    """Both roots of -log(lam) + lam*omega = rhs on (0, inf).

    The left side is strictly convex with minimum log(omega) + 1 at
    lam = 1/omega, so for rhs above the minimum there are exactly two
    roots bracketing 1/omega; a degenerate double root appears at
    rhs == minimum.  Bisection with a Newton polish on each side.
    """
    lam_mid = 1.0 / omega
    fmin = math.log(omega) + 1.0
    if rhs < fmin - 1e-12:
        raise ValueError("no real roots: right side below the convex minimum")

    def g(lam):
        return -math.log(lam) + lam * omega - rhs

    def solve(lo, hi):
        glo, ghi = g(lo), g(hi)
        if glo * ghi > 0:
            # double root at the minimizer
            return lam_mid
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            gm = g(mid)
            if abs(gm) <= tol or hi - lo <= 1e-16 * max(1.0, mid):
                break
            if glo * gm <= 0:
                hi = mid
            else:
                lo, glo = mid, gm
        lam = 0.5 * (lo + hi)
        for _ in range(4):
            deriv = -1.0 / lam + omega
            if deriv == 0.0:
                break
            step = g(lam) / deriv
            nxt = lam - step
            if not lo <= nxt <= hi:
                break
            lam = nxt
        return lam

    # left bracket: below lam_mid the function blows up as lam -> 0+
    lo = lam_mid
    while g(lo) < 0:
        lo *= 0.5
        if lo < 1e-300:
            break
    lam_min = solve(lo, lam_mid)
    # right bracket: the linear term dominates for large lam
    hi = lam_mid
    while g(hi) < 0:
        hi *= 2.0
        if hi > 1e300:
            break
    lam_max = solve(lam_mid, hi)
    return lam_min, lam_max


def precision_root_intervals(S):
    """Per-eigenvalue interval endpoints confining the optimum's spectrum.

    For a positive definite sample covariance with eigenvalues omega_1 >=
    ... >= omega_p, the i-th optimal eigenvalue must lie in
    [lam_min_i, lam_max_i] where the endpoints solve
    -log(lam) + lam * omega_{p-i+1} = sum(omega) - sum_{j != i}(log
    omega_{p-j+1} + 1).  Returns (lam_min, lam_max) arrays.
    """
    S = np.asarray(S, dtype=float)
    omega = np.linalg.eigvalsh(S)[::-1]
    if omega[-1] <= 0:
        raise ValueError("sample covariance must be positive definite")
    p = omega.size
    rev = omega[::-1]  # rev[i] = omega_{p-i} in zero-based indexing
    log_rev = np.log(rev)
    total = float(np.sum(omega))
    sum_logs = float(np.sum(log_rev + 1.0))
    lam_min = np.empty(p)
    lam_max = np.empty(p)
    for i in range(p):
        rhs = total - (sum_logs - (log_rev[i] + 1.0))
        lam_min[i], lam_max[i] = _threshold_roots(rev[i], rhs)
    return lam_min, lam_max


def lipschitz_precision(S):
    """Local Lipschitz bound sqrt(sum lam_min_i^-2) + ||S||_F.

    Valid near the minimizer of -log det(Theta) + tr(S Theta), whose
    eigenvalues are confined by :func:`precision_root_intervals`.
    """
    S = np.asarray(S, dtype=float)
    lam_min, _ = precision_root_intervals(S)
    return float(np.sqrt(np.sum(lam_min**-2.0)) + np.linalg.norm(S))
