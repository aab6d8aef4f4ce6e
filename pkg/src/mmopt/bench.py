"""Instance generators, experiment runner, and table emission.

Every random quantity flows from a PCG64 generator seeded by the pair
(master seed, experiment index), so repeated runs and concurrently
executed experiments produce bit-identical data.  Summary rows carry the
problem tag, dimensions, seed, final loss, iteration count and wall time;
wall time is reported but is never compared anywhere.
"""

import io
import time
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .barrier import barrier_solve, lp_problem
from .penalty import TuningSchedule
from .problems import (CompletionProblem, PrecisionProblem, solve_binary_pwl,
                       solve_intersection_projection, solve_l0, solve_matcomp,
                       solve_nqp, solve_precision)
from .sets import Ball, Halfspace

__all__ = [
    "ExperimentConfig",
    "rng_for",
    "generate_instance",
    "lp_toy_instance",
    "run_experiment",
    "emit_table",
    "parse_table",
    "read_matrix_blocks",
    "write_matrix_blocks",
    "parse_config",
]

# the planar demo: unit ball first, then the halfspace x1 >= 0
PLANAR_DEMO_START = np.array([-1.0, 2.0])


def planar_demo_sets():
    return [Ball(np.zeros(2), 1.0), Halfspace(np.array([1.0, 0.0]), 0.0)]


def rng_for(seed, index=0):
    """Independent generator stream for (master seed, experiment index)."""
    return np.random.default_rng([int(seed), int(index)])


def lp_toy_instance():
    """The 6-variable linear program with optimum -1.5 at (1/2,1/2,1/2,0,0,0)."""
    A = np.array([
        [2.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        [0.0, 2.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 2.0, 0.0, 0.0, 1.0],
    ])
    b = np.ones(3)
    c = np.array([-1.0, -1.0, -1.0, 0.0, 0.0, 0.0])
    x0 = np.full(6, 1.0 / 3.0)
    return {"A": A, "b": b, "c": c, "x0": x0}


def generate_instance(kind, dims, seed):
    """Deterministic synthetic instance for a problem kind.

    ``dims`` is a mapping of the dimensions the kind requires (see below);
    ``seed`` may be an int or a (master, index) pair.  Regenerating with
    the same arguments yields bitwise-identical arrays.

    kinds and their dims:
      nqp:          d                (A = M'M + I with M standard normal)
      bp:           d                (|normal| upper-triangle weights, b scaled by d)
      l0:           m, n             (normal design, beta_i = 1/i for i <= 10, unit noise)
      matcomp:      p, q, rank, frac (low-rank product, Bernoulli(frac) mask)
      precision:    p                (inverse covariance L L' + 0.01 M M', banded L)
      intersection: d                (random ball/halfspace pair with interior overlap)
      lp_toy:       -                (fixed data, no randomness)
    """
    if kind == "lp_toy":
        return lp_toy_instance()
    rng = np.random.default_rng(seed if not np.isscalar(seed) else [int(seed)])
    if kind == "nqp":
        d = int(dims["d"])
        M = rng.standard_normal((d, d))
        return {"A": M.T @ M + np.eye(d), "b": rng.standard_normal(d)}
    if kind == "bp":
        d = int(dims["d"])
        W = np.zeros((d, d))
        iu, ju = np.triu_indices(d, k=1)
        W[iu, ju] = np.abs(rng.standard_normal(iu.size))
        W += W.T
        # small linear terms yield degenerate all-0/all-1 cuts, hence the d scaling
        b = rng.standard_normal(d) * d
        return {"W": W, "b": b}
    if kind == "l0":
        m, n = int(dims["m"]), int(dims["n"])
        X = rng.standard_normal((m, n))
        beta = np.zeros(n)
        top = min(10, n)
        beta[:top] = 1.0 / np.arange(1, top + 1)
        y = X @ beta + rng.standard_normal(m)
        return {"X": X, "y": y, "beta_true": beta}
    if kind == "matcomp":
        p, q = int(dims["p"]), int(dims["q"])
        rank, frac = int(dims["rank"]), float(dims["frac"])
        L = rng.standard_normal((p, rank))
        R = rng.standard_normal((q, rank))
        Y = L @ R.T
        mask = rng.random((p, q)) < frac
        if not mask.any():
            mask[0, 0] = True
        return {"Y": Y, "mask": mask}
    if kind == "precision":
        p = int(dims["p"])
        L = np.zeros((p, p))
        for band in range(4):  # diagonal plus three subdiagonals
            idx = np.arange(p - band)
            L[idx + band, idx] = rng.standard_normal(p - band)
        M = rng.standard_normal((p, p))
        Sinv = L @ L.T + 0.01 * (M @ M.T)
        S = np.linalg.inv(Sinv)
        S = 0.5 * (S + S.T)
        band_part = L @ L.T
        iu, ju = np.triu_indices(p, k=1)
        k_true = int(np.count_nonzero(np.abs(band_part[iu, ju]) > 1e-12))
        return {"S": S, "Sinv": Sinv, "k_true": k_true}
    if kind == "intersection":
        d = int(dims["d"])
        center = rng.standard_normal(d)
        radius = 1.0 + rng.random()
        normal = rng.standard_normal(d)
        normal /= np.linalg.norm(normal)
        # boundary passes strictly inside the ball so the intersection has interior
        offset = float(normal @ center) - 0.8 * radius * rng.random()
        y = center + 2.0 * radius * rng.standard_normal(d)
        return {"y": y, "sets": [Ball(center, radius), Halfspace(normal, offset)],
                "center": center, "radius": radius, "normal": normal,
                "offset": offset}
    raise ValueError(f"unknown instance kind: {kind!r}")


# ---------------------------------------------------------------------------
# experiment configuration and runner
# ---------------------------------------------------------------------------

_DIM_KEYS = ("d", "m", "n", "p", "q", "rank", "frac", "k")


@dataclass
class ExperimentConfig:
    """Everything needed to rerun one experiment deterministically."""

    problem: str
    dims: dict = field(default_factory=dict)
    seed: int = 0
    repeats: int = 1
    rho0: float = None
    alpha: float = None
    rho_max: float = None
    eps0: float = None
    beta: float = None
    eps_min: float = None
    max_iter: int = None
    tol_step: float = 1e-8
    tol_feas: float = 1e-8
    out: str = None
    trace: bool = False
    safeguard: bool = True
    rho: float = 1.0  # barrier weight, lp problems only

    def __post_init__(self):
        for key, value in self.dims.items():
            if key not in _DIM_KEYS:
                raise ValueError(f"unknown dimension key: {key!r}")
            if key != "frac" and int(value) < 1:
                raise ValueError(f"dimension {key} must be at least 1")
        if self.seed is None or int(self.seed) != self.seed:
            raise ValueError("seed must be a fixed integer")
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")

    def schedule(self, default=None):
        """Schedule from any explicitly set knobs over the problem default."""
        overrides = {k: getattr(self, k) for k in
                     ("rho0", "alpha", "rho_max", "eps0", "beta", "eps_min")
                     if getattr(self, k) is not None}
        if not overrides:
            return default
        base = default if default is not None else TuningSchedule()
        merged = {f.name: getattr(base, f.name) for f in fields(TuningSchedule)}
        merged.update(overrides)
        return TuningSchedule(**merged)


def _solver_kwargs(cfg, default_max_iter):
    kw = {"max_iter": cfg.max_iter if cfg.max_iter is not None else default_max_iter,
          "tol_step": cfg.tol_step, "tol_feas": cfg.tol_feas}
    sched = cfg.schedule()
    if sched is not None:
        kw["sched"] = sched
    return kw


def _dispatch(cfg, seed):
    """Run the configured solver once; returns (final_loss, trace, extra)."""
    problem = cfg.problem
    if problem == "lp":
        inst = lp_toy_instance()
        prob = lp_problem(inst["A"], inst["b"], inst["c"], rho=cfg.rho)
        x, trace = barrier_solve(prob, inst["x0"],
                                 max_iter=cfg.max_iter if cfg.max_iter else 40,
                                 safeguard=cfg.safeguard)
        return float(inst["c"] @ x), trace, {"x": x}
    if problem == "nqp":
        inst = generate_instance("nqp", cfg.dims, seed)
        x, trace = solve_nqp(inst["A"], inst["b"], **_solver_kwargs(cfg, 1000))
        return 0.5 * float(x @ inst["A"] @ x) + float(inst["b"] @ x), trace, {"x": x}
    if problem == "bp":
        inst = generate_instance("bp", cfg.dims, seed)
        x, trace = solve_binary_pwl(inst["W"], inst["b"], **_solver_kwargs(cfg, 200))
        iu, ju = np.triu_indices(x.size, k=1)
        loss = float(np.sum(inst["W"][iu, ju] * np.abs(x[iu] - x[ju])) + inst["b"] @ x)
        return loss, trace, {"x": x}
    if problem == "l0":
        inst = generate_instance("l0", cfg.dims, seed)
        k = int(cfg.dims.get("k", 10))
        beta, trace = solve_l0(inst["X"], inst["y"], k, **_solver_kwargs(cfg, 1000))
        resid = inst["y"] - inst["X"] @ beta
        return 0.5 * float(resid @ resid), trace, {"x": beta}
    if problem == "matcomp":
        inst = generate_instance("matcomp", cfg.dims, seed)
        prob = CompletionProblem(inst["Y"], inst["mask"], int(cfg.dims.get("k", 1)))
        X, trace = solve_matcomp(prob, **_solver_kwargs(cfg, 1000))
        return prob.observed_loss(X), trace, {"x": X}
    if problem == "precision":
        inst = generate_instance("precision", cfg.dims, seed)
        k = int(cfg.dims.get("k", inst["k_true"]))
        prob = PrecisionProblem(inst["S"], k)
        Theta, trace = solve_precision(prob, **_solver_kwargs(cfg, 1000))
        return prob.loss(Theta), trace, {"x": Theta}
    if problem == "intersection":
        if cfg.dims:
            inst = generate_instance("intersection", cfg.dims, seed)
            y, sets = inst["y"], inst["sets"]
        else:
            y, sets = PLANAR_DEMO_START, planar_demo_sets()
        x, trace = solve_intersection_projection(y, sets, **_solver_kwargs(cfg, 1000))
        return float(np.linalg.norm(x - y)), trace, {"x": x}
    raise ValueError(f"unknown problem: {cfg.problem!r}")


def _dims_label(dims):
    return "x".join(f"{k}={v}" for k, v in sorted(dims.items())) or "-"


def run_experiment(cfg):
    """Run ``cfg.repeats`` independent repetitions and collect summary rows.

    Each repetition r draws its instance from the stream (cfg.seed, r).
    Solver failures are recorded as status entries instead of propagating.
    Trace CSVs and solution arrays land under ``cfg.out`` when set.  The
    mean row aggregates loss/iterations/seconds over successful repeats.
    """
    rows = []
    out_dir = Path(cfg.out) if cfg.out else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    for r in range(cfg.repeats):
        started = time.perf_counter()
        row = {"problem": cfg.problem, "dims": _dims_label(cfg.dims),
               "seed": f"{cfg.seed}:{r}"}
        try:
            loss, trace, extra = _dispatch(cfg, (cfg.seed, r))
            row.update(loss=loss, iterations=len(trace), status="ok")
            if out_dir is not None:
                stem = f"{cfg.problem}_seed{cfg.seed}_{r}"
                if cfg.trace:
                    trace.to_csv(out_dir / f"{stem}_trace.csv")
                np.savetxt(out_dir / f"{stem}_solution.txt",
                           np.atleast_1d(extra["x"]))
        except Exception as exc:  # recorded, not raised
            row.update(loss=float("nan"), iterations=0, status=f"error: {exc}")
        row["seconds"] = time.perf_counter() - started
        rows.append(row)
    ok = [row for row in rows if row["status"] == "ok"]
    if len(rows) > 1 and ok:
        rows.append({
            "problem": cfg.problem, "dims": _dims_label(cfg.dims),
            "seed": "mean",
            "loss": float(np.mean([row["loss"] for row in ok])),
            "iterations": float(np.mean([row["iterations"] for row in ok])),
            "status": f"ok ({len(ok)}/{cfg.repeats})",
            "seconds": float(np.mean([row["seconds"] for row in ok])),
        })
    return rows


# ---------------------------------------------------------------------------
# table emission
# ---------------------------------------------------------------------------

def emit_table(rows, fmt="aligned"):
    """Render homogeneous dict rows as CSV or aligned text.

    Column order follows the first row.  The aligned format prints floats
    with five decimals; the CSV format uses full repr precision so that
    ``parse_table(emit_table(rows, "csv"))`` reproduces the rows exactly.
    """
    rows = list(rows)
    if fmt not in ("aligned", "csv"):
        raise ValueError(f"unknown table format: {fmt!r}")
    if not rows:
        return ""
    columns = list(rows[0])
    for row in rows:
        if list(row) != columns:
            raise ValueError("rows must share one column layout")
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(_csv_cell(row[c]) for c in columns) + "\n")
        return buf.getvalue()
    cells = [[_aligned_cell(row[c]) for c in columns] for row in rows]
    widths = [max(len(col), *(len(r[i]) for r in cells))
              for i, col in enumerate(columns)]
    lines = ["  ".join(col.rjust(w) for col, w in zip(columns, widths))]
    for r in cells:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(r, widths)))
    return "\n".join(lines) + "\n"


def _csv_cell(v):
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _aligned_cell(v):
    if isinstance(v, float):
        return f"{v:.5f}"
    return str(v)


def parse_table(text):
    """Inverse of ``emit_table(..., "csv")``: rows of ints/floats/strings."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        return []
    columns = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        row = {}
        for col, cell in zip(columns, ln.split(",")):
            row[col] = _coerce(cell)
        rows.append(row)
    return rows


def _coerce(cell):
    try:
        return int(cell)
    except ValueError:
        pass
    try:
        return float(cell)
    except ValueError:
        return cell


# ---------------------------------------------------------------------------
# plain-text matrix/vector block files
# ---------------------------------------------------------------------------

def write_matrix_blocks(path, **arrays):
    """Write named arrays as whitespace-delimited row-major blocks.

    Each block starts with ``name rows cols`` (``name length`` for
    vectors) followed by the rows.  Values are written with full float
    precision and always carry a decimal point, which is what lets the
    reader tell dimension tokens from data.
    """
    lines = []
    for name, arr in arrays.items():
        if _is_int(name):
            raise ValueError("block names must not be integers")
        arr = np.asarray(arr, dtype=float)
        if arr.ndim == 1:
            lines.append(f"{name} {arr.size}")
            lines.append(" ".join(repr(float(v)) for v in arr))
        elif arr.ndim == 2:
            lines.append(f"{name} {arr.shape[0]} {arr.shape[1]}")
            for row in arr:
                lines.append(" ".join(repr(float(v)) for v in row))
        else:
            raise ValueError("only vectors and matrices are supported")
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix_blocks(path):
    """Read a block file written by :func:`write_matrix_blocks`."""
    tokens = Path(path).read_text().split()
    arrays = {}
    pos = 0
    while pos < len(tokens):
        name = tokens[pos]
        pos += 1
        dims = []
        while pos < len(tokens) and len(dims) < 2 and _is_int(tokens[pos]):
            dims.append(int(tokens[pos]))
            pos += 1
        if not dims:
            raise ValueError(f"block {name!r} is missing its dimensions")
        count = dims[0] * (dims[1] if len(dims) == 2 else 1)
        vals = tokens[pos:pos + count]
        if len(vals) != count:
            raise ValueError(f"block {name!r} is truncated")
        pos += count
        data = np.array([float(t) for t in vals])
        arrays[name] = data.reshape(dims) if len(dims) == 2 else data
    return arrays


def _is_int(token):
    try:
        int(token)
    except ValueError:
        return False
    return True


# ---------------------------------------------------------------------------
# key = value config files
# ---------------------------------------------------------------------------

def parse_config(path, allowed=None):
    """Parse a line-oriented ``key = value`` config file.

    Keys mirror the CLI flags with either dashes or underscores; ``#``
    starts a comment.  Unknown keys are rejected when ``allowed`` is given.
    """
    entries = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        value = value.strip()
        if allowed is not None and key not in allowed:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        entries[key] = value
    return entries
