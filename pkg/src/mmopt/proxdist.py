"""Generic proximal distance driver.

One iteration projects the current point onto the constraint set(s), forms
the penalty weight w_n = rho / sqrt(sum_j dist^2 + eps), and applies the
objective's proximal map anchored at the (averaged) projection with step
1/w_n (1/(m*w_n) for m sets).  The driver only needs an objective exposing
``value`` and ``prox``; objectives whose proximal map is taken against a
re-anchored majorant additionally expose ``rebase``.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .penalty import TuningSchedule, proximal_weight

__all__ = [
    "ProxObjective",
    "TraceRecord",
    "SolveTrace",
    "DivergenceError",
    "pd_step",
    "pd_run",
    "TRACE_COLUMNS",
]

TRACE_COLUMNS = ("iter", "f", "penalized_f", "dist", "rho", "eps", "step_norm", "seconds")


class ProxObjective:
    """An objective with an exact proximal map.

    ``value(x)`` evaluates the objective; ``prox(y, t)`` returns the
    minimizer of f(x) + (1/(2t)) ||x - y||^2.  ``gradient`` is optional.
    Objectives that majorize themselves around the current iterate before
    the proximal step implement ``rebase(x_n)``; the driver calls it once
    per iteration before projecting.
    """

    def value(self, x):
        raise NotImplementedError

    def prox(self, y, t):
        raise NotImplementedError


@dataclass
class TraceRecord:
    """One iteration of a solve: objective, penalty, feasibility, step."""

    n: int
    f: float
    penalized: float
    dist: float
    rho: float
    eps: float
    step_norm: float
    seconds: float
    step_size: float = float("nan")  # Newton damping, barrier runs only

    def row(self):
        return (self.n, self.f, self.penalized, self.dist, self.rho, self.eps,
                self.step_norm, self.seconds)


@dataclass
class SolveTrace:
    """Per-iteration history of a solver run."""

    records: list = field(default_factory=list)
    converged: bool = False
    message: str = ""

    def append(self, record):
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def column(self, name):
        """Extract one trace column as an array (names as in the CSV header)."""
        attr = {"iter": "n", "penalized_f": "penalized"}.get(name, name)
        return np.array([getattr(r, attr) for r in self.records])

    def to_csv(self, path_or_buf):
        """Write the trace with the fixed column layout."""
        lines = [",".join(TRACE_COLUMNS)]
        for r in self.records:
            n, f, pen, dist, rho, eps, step, secs = r.row()
            lines.append(f"{n},{f!r},{pen!r},{dist!r},{rho!r},{eps!r},{step!r},{secs!r}")
        text = "\n".join(lines) + "\n"
        if hasattr(path_or_buf, "write"):
            path_or_buf.write(text)
        else:
            with open(path_or_buf, "w") as fh:
                fh.write(text)
        return text


class DivergenceError(RuntimeError):
    """A solver produced a non-finite iterate; carries the partial trace."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


def _norm(a):
    return float(np.linalg.norm(np.ravel(a)))


def _composite_distance_sq(x, sets):
    return sum(S.distance(x) ** 2 for S in sets)


def penalized_value(f, x, sets, rho, eps):
    """f(x) + rho * sqrt(sum_j dist(x, S_j)^2 + eps)."""
    return f.value(x) + rho * math.sqrt(_composite_distance_sq(x, sets) + eps)


def pd_step(x_n, f, sets, rho, eps, check=False):
    """One proximal distance update from x_n.

    With a single set the update is prox(P_S(x_n), 1/w_n); with m sets the
    anchor is the average projection and the step is 1/(m w_n), which
    minimizes f(x) + (m w_n / 2)||x - pbar||^2.  ``check`` asserts the
    penalized objective did not increase at this fixed (rho, eps).
    """
    x_n = np.asarray(x_n, dtype=float)
    if hasattr(f, "rebase"):
        f.rebase(x_n)
    w = proximal_weight(x_n, sets, rho, eps)
    m = len(sets)
    if m == 1:
        anchor = sets[0].project(x_n)
        x_next = f.prox(anchor, 1.0 / w)
    else:
        anchor = sum(S.project(x_n) for S in sets) / m
        x_next = f.prox(anchor, 1.0 / (m * w))
    if check:
        before = penalized_value(f, x_n, sets, rho, eps)
        after = penalized_value(f, x_next, sets, rho, eps)
        assert after <= before + 1e-10, (
            f"penalized objective increased: {before!r} -> {after!r}")
    return x_next


def pd_run(x0, f, sets, sched=None, max_iter=1000, tol_step=1e-8, tol_feas=1e-8,
           check_descent=False, callback=None):
    """Run the proximal distance iteration with scheduled (rho_n, eps_n).

    The step producing iterate n+1 uses the schedule at index n, so the
    very first update sees (rho0, eps0).  Stops once the step norm falls
    below ``tol_step`` and the composite constraint distance below
    ``tol_feas``, or at ``max_iter``.  Returns the final point and a
    :class:`SolveTrace`; a non-finite iterate raises
    :class:`DivergenceError` carrying the partial trace.

    ``check_descent`` asserts the penalized-objective descent property and
    is only meaningful when the schedule is frozen (alpha = beta = 1).
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if sched is None:
        sched = TuningSchedule()
    x = np.asarray(x0, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("starting point must be finite")
    trace = SolveTrace()
    start = time.perf_counter()
    for n in range(max_iter):
        rho, eps = sched.at(n)
        x_next = pd_step(x, f, sets, rho, eps, check=check_descent)
        step_norm = _norm(x_next - x)
        dist = math.sqrt(_composite_distance_sq(x_next, sets))
        record = TraceRecord(
            n=n + 1,
            f=float(f.value(x_next)),
            penalized=penalized_value(f, x_next, sets, rho, eps),
            dist=dist,
            rho=rho,
            eps=eps,
            step_norm=step_norm,
            seconds=time.perf_counter() - start,
        )
        trace.append(record)
        if not np.all(np.isfinite(x_next)):
            raise DivergenceError(
                f"non-finite iterate at iteration {n + 1}", trace)
        x = x_next
        if callback is not None:
            callback(x, record)
        if step_norm <= tol_step and dist <= tol_feas:
            trace.converged = True
            break
    trace.message = "converged" if trace.converged else "max_iter reached"
    return x, trace
