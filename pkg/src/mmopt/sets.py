"""Euclidean projections onto closed sets and the induced distance functions.

Every set is represented by a :class:`ProjectableSet` that knows how to
project an arbitrary point, test membership, and measure distance.  All
projections are deterministic: where the nearest point is not unique
(sparsity, rank, binary midpoints, integer halves) ties are broken by a
fixed lowest-index / round-down rule so repeated runs are reproducible.
"""

import numpy as np

__all__ = [
    "ProjectableSet",
    "NonnegativeOrthant",
    "Box",
    "Ball",
    "Halfspace",
    "BinaryVertices",
    "IntegerLattice",
    "SparsitySet",
    "RankSet",
    "EdgeSparsitySet",
    "FinitePointSet",
    "project_nonneg",
    "project_ball",
    "project_halfspace",
    "project_binary",
    "project_integer",
    "project_sparsity",
    "project_rank",
    "project_edge_sparsity",
    "set_distance",
]


# ---------------------------------------------------------------------------
# projection functions
# ---------------------------------------------------------------------------

def project_nonneg(x):
    """Project onto the nonnegative orthant (componentwise clamp at zero)."""
    return np.maximum(np.asarray(x, dtype=float), 0.0)


def project_ball(x, center, radius):
    """Project onto the closed ball of given center and radius.

    Interior points (including the center itself) are returned unchanged;
    exterior points move radially to the boundary.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    x = np.asarray(x, dtype=float)
    center = np.asarray(center, dtype=float)
    gap = x - center
    dist = np.linalg.norm(gap)
    if dist <= radius:
        return x.copy()
    return center + (radius / dist) * gap


def project_halfspace(x, normal, offset):
    """Project onto the closed halfspace {y : normal . y >= offset}."""
    x = np.asarray(x, dtype=float)
    normal = np.asarray(normal, dtype=float)
    nn = np.dot(normal, normal)
    if nn == 0.0:
        raise ValueError("halfspace normal must be nonzero")
    slack = np.dot(normal, x) - offset
    if slack >= 0.0:
        return x.copy()
    return x - (slack / nn) * normal


def project_binary(x):
    """Round componentwise onto {0,1}; the midpoint 0.5 rounds down to 0."""
    return (np.asarray(x, dtype=float) > 0.5).astype(float)


def project_integer(x):
    """Round componentwise to the nearest integer; half-integers round down."""
    return np.ceil(np.asarray(x, dtype=float) - 0.5)


def project_sparsity(x, k):
    """Keep the k entries of largest magnitude and zero the rest.

    Ties in magnitude are resolved in favor of the lowest index.
    """
    x = np.asarray(x, dtype=float)
    if not 0 <= k <= x.size:
        raise ValueError(f"k must lie in [0, {x.size}], got {k}")
    if k == x.size:
        return x.copy()
    out = np.zeros_like(x)
    if k == 0:
        return out
    keep = np.argsort(-np.abs(x), kind="stable")[:k]
    out[keep] = x[keep]
    return out


def project_rank(X, k):
    """Truncate the singular value decomposition of X to its k leading terms.

    A matrix of rank <= k is returned unchanged (up to the round-off of the
    decomposition).  Dense full SVD throughout; sized for desk-scale inputs.
    """
    X = np.asarray(X, dtype=float)
    if k < 1:
        raise ValueError("target rank must be at least 1")
    if k >= min(X.shape):
        return X.copy()
    U, s, Vt = np.linalg.svd(X, full_matrices=False)
    return (U[:, :k] * s[:k]) @ Vt[:k]


def project_edge_sparsity(M, k, tol=0.0):
    """Keep the k above-diagonal entries of largest magnitude, mirrored below.

    The diagonal passes through unchanged.  Ties are broken toward the
    lowest (row-major) above-diagonal position.
    """
    M = np.asarray(M, dtype=float)
    p = M.shape[0]
    if M.ndim != 2 or M.shape[1] != p:
        raise ValueError("input must be a square matrix")
    if not np.allclose(M, M.T, atol=tol, rtol=0.0) and not np.array_equal(M, M.T):
        raise ValueError("input matrix must be symmetric")
    max_k = p * (p - 1) // 2
    if not 0 <= k <= max_k:
        raise ValueError(f"k must lie in [0, {max_k}], got {k}")
    iu, ju = np.triu_indices(p, k=1)
    vals = M[iu, ju]
    keep_vals = project_sparsity(vals, k)
    out = np.diag(np.diag(M)).astype(float)
    out[iu, ju] = keep_vals
    out[ju, iu] = keep_vals
    return out


def set_distance(x, S):
    """Euclidean distance from x to the set S (zero iff x belongs to S)."""
    return S.distance(x)


def _norm(a):
    # Frobenius norm for matrices, Euclidean for vectors.
    return float(np.linalg.norm(np.ravel(a)))


# ---------------------------------------------------------------------------
# set objects
# ---------------------------------------------------------------------------

class ProjectableSet:
    """A closed set with a deterministic Euclidean projection.

    Subclasses implement :meth:`project` and :meth:`contains`; distance is
    always measured through the projection.  ``convex`` advertises whether
    the projection is nonexpansive.
    """

    kind = "abstract"
    convex = False

    def project(self, x):
        raise NotImplementedError

    def contains(self, x, tol=1e-12):
        raise NotImplementedError

    def distance(self, x):
        x = np.asarray(x, dtype=float)
        return _norm(x - self.project(x))

    def __repr__(self):
        return f"{self.__class__.__name__}()"


class NonnegativeOrthant(ProjectableSet):
    kind = "nonneg-orthant"
    convex = True

    def project(self, x):
        return project_nonneg(x)

    def contains(self, x, tol=1e-12):
        return bool(np.all(np.asarray(x) >= -tol))


class Box(ProjectableSet):
    """Axis-aligned box {x : lower <= x <= upper}."""

    kind = "box"
    convex = True

    def __init__(self, lower, upper):
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        if np.any(self.lower > self.upper):
            raise ValueError("box lower bounds exceed upper bounds")

    def project(self, x):
        return np.clip(np.asarray(x, dtype=float), self.lower, self.upper)

    def contains(self, x, tol=1e-12):
        x = np.asarray(x)
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))

    def __repr__(self):
        return f"Box(lower={self.lower!r}, upper={self.upper!r})"


class Ball(ProjectableSet):
    """Closed Euclidean ball of given center and radius."""

    kind = "ball"
    convex = True

    def __init__(self, center, radius):
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)

    def project(self, x):
        return project_ball(x, self.center, self.radius)

    def contains(self, x, tol=1e-12):
        return _norm(np.asarray(x, dtype=float) - self.center) <= self.radius + tol

    def __repr__(self):
        return f"Ball(center={self.center!r}, radius={self.radius})"


class Halfspace(ProjectableSet):
    """Closed halfspace {x : normal . x >= offset}."""

    kind = "halfspace"
    convex = True

    def __init__(self, normal, offset):
        self.normal = np.asarray(normal, dtype=float)
        if np.dot(self.normal, self.normal) == 0.0:
            raise ValueError("halfspace normal must be nonzero")
        self.offset = float(offset)

    def project(self, x):
        return project_halfspace(x, self.normal, self.offset)

    def contains(self, x, tol=1e-12):
        scale = np.linalg.norm(self.normal)
        return np.dot(self.normal, np.asarray(x)) - self.offset >= -tol * scale

    def __repr__(self):
        return f"Halfspace(normal={self.normal!r}, offset={self.offset})"


class BinaryVertices(ProjectableSet):
    """Vertices {0,1}^d of the unit hypercube."""

    kind = "hypercube-vertices"

    def project(self, x):
        return project_binary(x)

    def contains(self, x, tol=1e-12):
        x = np.asarray(x)
        return bool(np.all((np.abs(x) <= tol) | (np.abs(x - 1.0) <= tol)))


class IntegerLattice(ProjectableSet):
    kind = "integer-lattice"

    def project(self, x):
        return project_integer(x)

    def contains(self, x, tol=1e-12):
        x = np.asarray(x)
        return bool(np.all(np.abs(x - np.round(x)) <= tol))


class SparsitySet(ProjectableSet):
    """Vectors with at most k nonzero entries."""

    kind = "sparsity"

    def __init__(self, k):
        if k < 0:
            raise ValueError("sparsity level must be nonnegative")
        self.k = int(k)

    def project(self, x):
        return project_sparsity(x, self.k)

    def contains(self, x, tol=1e-12):
        return int(np.count_nonzero(np.abs(np.asarray(x)) > tol)) <= self.k

    def __repr__(self):
        return f"SparsitySet(k={self.k})"


class RankSet(ProjectableSet):
    """Matrices of rank at most k."""

    kind = "rank"

    def __init__(self, k):
        if k < 1:
            raise ValueError("target rank must be at least 1")
        self.k = int(k)

    def project(self, x):
        return project_rank(x, self.k)

    def contains(self, x, tol=1e-12):
        s = np.linalg.svd(np.asarray(x, dtype=float), compute_uv=False)
        scale = max(s[0], 1.0) if s.size else 1.0
        return int(np.count_nonzero(s > tol * scale)) <= self.k

    def __repr__(self):
        return f"RankSet(k={self.k})"


class EdgeSparsitySet(ProjectableSet):
    """Symmetric matrices with at most k nonzero above-diagonal entries."""

    kind = "edge-sparsity"

    def __init__(self, k):
        if k < 0:
            raise ValueError("edge budget must be nonnegative")
        self.k = int(k)

    def project(self, x):
        return project_edge_sparsity(x, self.k)

    def contains(self, x, tol=1e-12):
        x = np.asarray(x)
        if not np.allclose(x, x.T, atol=tol, rtol=0.0):
            return False
        above = x[np.triu_indices(x.shape[0], k=1)]
        return int(np.count_nonzero(np.abs(above) > tol)) <= self.k

    def __repr__(self):
        return f"EdgeSparsitySet(k={self.k})"


class FinitePointSet(ProjectableSet):
    """An explicit finite collection of points; projection tests each one.

    Ties in distance go to the point with the lowest index.
    """

    kind = "finite"

    def __init__(self, points):
        self.points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.points.shape[0] == 0:
            raise ValueError("point set must be nonempty")

    def project(self, x):
        x = np.asarray(x, dtype=float)
        gaps = np.linalg.norm(self.points - x[np.newaxis, :], axis=1)
        return self.points[int(np.argmin(gaps))].copy()

    def contains(self, x, tol=1e-12):
        x = np.asarray(x, dtype=float)
        gaps = np.linalg.norm(self.points - x[np.newaxis, :], axis=1)
        return bool(np.min(gaps) <= tol)

    def __repr__(self):
        return f"FinitePointSet({self.points.shape[0]} points)"
