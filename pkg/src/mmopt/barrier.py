"""Adaptive barrier interior-point solver.

Minimizes a smooth objective subject to affine equalities A x = b and
smooth concave inequalities v_j(x) >= 0.  Each outer iteration minimizes a
quadratic model of the barrier surrogate

    g(x | x_n) = f(x) - rho * sum_j v_j(x_n) log v_j(x)
                 + rho * sum_j dv_j(x_n)(x - x_n)

over the equality constraints, taking a single Newton step.  The scaled
log-barrier weights fade as constraints approach activity, so the iterates
can converge to boundary points without following a central path.  An
optional self-concordance safeguard damps the step so every iterate stays
strictly interior and the objective never increases.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .proxdist import SolveTrace, TraceRecord

__all__ = [
    "Quadratic",
    "Linear",
    "AffineConstraint",
    "BarrierProblem",
    "InteriorViolationError",
    "lp_problem",
    "surrogate_derivatives",
    "newton_direction",
    "lp_newton_direction",
    "concordance_constant",
    "damped_step_length",
    "barrier_solve",
]


class Quadratic:
    """f(x) = 0.5 x' P x + q . x with exact derivatives."""

    def __init__(self, P, q):
        self.P = np.asarray(P, dtype=float)
        self.q = np.asarray(q, dtype=float)

    def value(self, x):
        return 0.5 * float(x @ self.P @ x) + float(self.q @ x)

    def gradient(self, x):
        return self.P @ x + self.q

    def hessian(self, x):
        return self.P


class Linear(Quadratic):
    """f(x) = c . x."""

    def __init__(self, c):
        c = np.asarray(c, dtype=float)
        super().__init__(np.zeros((c.size, c.size)), c)


class AffineConstraint:
    """Concave constraint v(x) = coef . x + const >= 0."""

    def __init__(self, coef, const=0.0):
        self.coef = np.asarray(coef, dtype=float)
        self.const = float(const)

    def value(self, x):
        return float(self.coef @ x) + self.const

    def gradient(self, x):
        return self.coef

    def hessian(self, x):
        return np.zeros((self.coef.size, self.coef.size))


@dataclass
class BarrierProblem:
    """Smooth objective, affine equalities, and concave inequalities.

    ``f`` and each constraint expose value/gradient/hessian.  A convex
    inequality h(x) <= 0 enters as the concave v(x) = -h(x) >= 0.  ``A``
    may have zero rows for problems without equality constraints.
    """

    f: object
    A: np.ndarray
    b: np.ndarray
    constraints: list = field(default_factory=list)
    rho: float = 1.0

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.b = np.asarray(self.b, dtype=float).ravel()
        if self.rho < 0:
            raise ValueError("barrier weight rho must be nonnegative")

    def constraint_values(self, x):
        return np.array([v.value(x) for v in self.constraints])

    def check_start(self, x0, tol=1e-10):
        x0 = np.asarray(x0, dtype=float)
        if self.A.size and np.linalg.norm(self.A @ x0 - self.b) > tol:
            raise ValueError("starting point violates the equality constraints")
        if self.constraints and np.min(self.constraint_values(x0)) <= 0:
            raise ValueError("starting point is not strictly interior")
        return x0


class InteriorViolationError(RuntimeError):
    """An unsafeguarded iterate left the interior; carries the trace."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


def lp_problem(A, b, c, rho=1.0):
    """Standard-form linear program: minimize c.x over A x = b, x >= 0."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    c = np.asarray(c, dtype=float)
    d = c.size
    constraints = [AffineConstraint(np.eye(d)[j]) for j in range(d)]
    return BarrierProblem(f=Linear(c), A=A, b=b, constraints=constraints, rho=rho)


def surrogate_derivatives(prob, x_n):
    """Gradient and Hessian of the barrier surrogate at its anchor point.

    The surrogate is tangent to f, so the gradient is just grad f(x_n); the
    Hessian picks up -rho * sum_j hess v_j plus the rank-one barrier terms
    rho / v_j(x_n) * grad v_j grad v_j'.  Objectives carrying a
    ``majorant(x_n)`` hook are replaced by that quadratic model first.
    """
    x_n = np.asarray(x_n, dtype=float)
    f = prob.f.majorant(x_n) if hasattr(prob.f, "majorant") else prob.f
    grad = np.asarray(f.gradient(x_n), dtype=float).copy()
    hess = np.asarray(f.hessian(x_n), dtype=float).copy()
    rho = prob.rho
    for v in prob.constraints:
        vx = v.value(x_n)
        if vx <= 0:
            raise ValueError(f"iterate left the interior: constraint value {vx!r}")
        gv = np.asarray(v.gradient(x_n), dtype=float)
        hess -= rho * np.asarray(v.hessian(x_n), dtype=float)
        hess += (rho / vx) * np.outer(gv, gv)
    return grad, hess


def newton_direction(prob, x_n, grad, hess):
    """Equality-constrained Newton direction via the KKT system.

    Solves [H A'; A 0][u; lam] = [-g; b - A x_n], so x_n + u restores
    equality feasibility exactly while minimizing the quadratic model.
    """
    x_n = np.asarray(x_n, dtype=float)
    d = x_n.size
    A = prob.A
    m = A.shape[0] if A.size else 0
    if m == 0:
        try:
            return np.linalg.solve(hess, -grad)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError(f"singular Newton system: {exc}") from exc
    K = np.zeros((d + m, d + m))
    K[:d, :d] = hess
    K[:d, d:] = A.T
    K[d:, :d] = A
    rhs = np.concatenate([-grad, prob.b - A @ x_n])
    try:
        sol = np.linalg.solve(K, rhs)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"singular KKT system: {exc}") from exc
    return sol[:d]


def lp_newton_direction(A, b, c, x_n, rho=1.0):
    """Closed-form Newton direction for the linear program specialization.

    With barrier Hessian D = diag(rho / x_i) the constrained minimizer is
    x_n - D^-1 c + D^-1 A' (A D^-1 A')^-1 (b - A x_n + A D^-1 c); the
    returned direction is that point minus x_n.  Serves as an independent
    cross-check of :func:`newton_direction`.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    c = np.asarray(c, dtype=float)
    x_n = np.asarray(x_n, dtype=float)
    Dinv = x_n / rho
    ADA = (A * Dinv) @ A.T
    mult = np.linalg.solve(ADA, b - A @ x_n + A @ (Dinv * c))
    return -Dinv * c + Dinv * (A.T @ mult)


def concordance_constant(prob, x_n):
    """Self-concordance constant 1 / sqrt(rho * min_j v_j(x_n)).

    Exact for quadratic objectives with affine constraints; otherwise it
    applies to the quadratic majorant used in the update.
    """
    if not prob.constraints:
        return 0.0
    vmin = float(np.min(prob.constraint_values(np.asarray(x_n, dtype=float))))
    if vmin <= 0:
        raise ValueError("iterate left the interior")
    return 1.0 / math.sqrt(prob.rho * vmin)


def damped_step_length(hp0, hpp0, c):
    """Step length minimizing the self-concordant upper model along u_n.

    Given h'(0) <= 0 and h''(0) > 0, returns
    t = -h'(0) / (h''(0) - c h'(0) sqrt(h''(0))), which keeps
    c * t * sqrt(h''(0)) < 1 so the barrier's log argument stays positive.
    With c = 0 this is the exact Newton step -h'(0)/h''(0).
    """
    if hpp0 <= 0:
        raise ValueError("directional curvature must be positive")
    if hp0 > 0:
        raise ValueError("direction must be a descent direction (h'(0) <= 0)")
    return -hp0 / (hpp0 - c * hp0 * math.sqrt(hpp0))


def barrier_solve(prob, x0, max_iter=100, tol_step=0.0, safeguard=True):
    """Run the adaptive barrier iteration from a strictly feasible start.

    Each iteration assembles the surrogate derivatives, solves for the
    Newton direction, and advances with step length 1 (``safeguard=False``)
    or the damped length from :func:`damped_step_length`.  The trace
    records f(x_n), the equality residual, the step norm ||x_n - x_{n-1}||
    and the step length t_n.  With ``tol_step`` zero (the default) the full
    iteration budget runs; otherwise the loop stops once the step norm
    drops below it.

    Without the safeguard an iterate may leave the interior; the run then
    aborts with :class:`InteriorViolationError` carrying the partial trace.
    """
    x = prob.check_start(x0)
    trace = SolveTrace()
    start = time.perf_counter()
    for n in range(max_iter):
        try:
            grad, hess = surrogate_derivatives(prob, x)
        except ValueError as exc:
            if safeguard:
                raise
            trace.message = str(exc)
            raise InteriorViolationError(str(exc), trace) from exc
        u = newton_direction(prob, x, grad, hess)
        if safeguard:
            hp0 = float(grad @ u)
            hpp0 = float(u @ hess @ u)
            c = concordance_constant(prob, x)
            t = damped_step_length(min(hp0, 0.0), hpp0, c) if hpp0 > 0 else 1.0
        else:
            t = 1.0
        x = x + t * u
        step_norm = float(np.linalg.norm(t * u))
        eq_resid = float(np.linalg.norm(prob.A @ x - prob.b)) if prob.A.size else 0.0
        fval = float(prob.f.value(x))
        trace.append(TraceRecord(
            n=n + 1,
            f=fval,
            penalized=fval,
            dist=eq_resid,
            rho=prob.rho,
            eps=float("nan"),
            step_norm=step_norm,
            seconds=time.perf_counter() - start,
            step_size=t,
        ))
        if not safeguard and prob.constraints:
            if float(np.min(prob.constraint_values(x))) <= 0:
                msg = f"iterate left the interior at iteration {n + 1}"
                trace.message = msg
                raise InteriorViolationError(msg, trace)
        if tol_step > 0 and step_norm <= tol_step:
            trace.converged = True
            break
    trace.message = trace.message or (
        "converged" if trace.converged else "iteration budget exhausted")
    return x, trace
