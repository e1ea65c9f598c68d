"""Exact planar convex geometry.

Polygons are stored as counter-clockwise vertex arrays with no repeated or
collinear vertices. Points and segments are valid polygons with one and two
vertices respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

CROSS_EPS = 1e-12
MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class EmptyRegion:
    """Result of an operation whose point set is empty."""

    reason: str = ""


@dataclass(frozen=True)
class Unbounded:
    """Result of a halfspace intersection that does not close."""

    reason: str = ""


def _scale(pts: np.ndarray) -> float:
    if pts.size == 0:
        return 1.0
    return max(1.0, float(np.max(np.abs(pts))))


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _seg_dist(p, a, b) -> float:
    ab = (b[0] - a[0], b[1] - a[1])
    ap = (p[0] - a[0], p[1] - a[1])
    den = ab[0] * ab[0] + ab[1] * ab[1]
    t = 0.0 if den == 0 else min(1.0, max(0.0, (ap[0] * ab[0] + ap[1] * ab[1]) / den))
    return math.hypot(ap[0] - t * ab[0], ap[1] - t * ab[1])


def _monotone_chain(pts: np.ndarray) -> np.ndarray:
    """Andrew's monotone chain on an (k, 2) array; returns CCW extreme points.

    The chain uses the exact sign of the cross product. Afterwards any vertex
    within ``CROSS_EPS * scale`` of the segment joining its neighbours is
    dropped, which moves the boundary by at most that distance and removes
    near-collinear and near-duplicate vertices.
    """
    merge_tol = CROSS_EPS * _scale(pts)

    order = np.lexsort((pts[:, 1], pts[:, 0]))
    uniq = []
    for p in pts[order].tolist():
        if not uniq or p != uniq[-1]:
            uniq.append(p)
    if len(uniq) == 1:
        return np.array(uniq, dtype=float)

    lower: list = []
    for p in uniq:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(uniq):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]

    changed = True
    while changed and len(hull) >= 3:
        changed = False
        for i in range(len(hull)):
            if _seg_dist(hull[i], hull[i - 1], hull[(i + 1) % len(hull)]) <= merge_tol:
                del hull[i]
                changed = True
                break
    if len(hull) == 2 and math.hypot(hull[0][0] - hull[1][0], hull[0][1] - hull[1][1]) <= merge_tol:
        hull = hull[:1]
    out = np.array(hull, dtype=float)
    start = int(np.lexsort((out[:, 1], out[:, 0]))[0])
    return np.roll(out, -start, axis=0)


class ConvexPolygon:
    """Non-empty compact convex subset of the plane.

    ``vertices`` is a read-only (k, 2) array in counter-clockwise order,
    starting from the lexicographically smallest vertex. Construction always
    re-hulls its input, so the stored list is the exact extreme-point set.
    """

    __slots__ = ("_v",)

    def __init__(self, points):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if pts.shape[0] == 0:
            raise ValueError("a ConvexPolygon needs at least one point; use convex_hull for possibly empty input")
        if not np.all(np.isfinite(pts)):
            raise ValueError("polygon coordinates must be finite")
        v = _monotone_chain(pts) + 0.0  # no negative zeros in exports
        v.setflags(write=False)
        self._v = v

    @property
    def vertices(self) -> np.ndarray:
        return self._v

    def __len__(self) -> int:
        return self._v.shape[0]

    def __repr__(self) -> str:
        pts = ", ".join(f"({x:.6g}, {y:.6g})" for x, y in self._v)
        return f"ConvexPolygon([{pts}])"

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConvexPolygon):
            return NotImplemented
        return self._v.shape == other._v.shape and bool(np.array_equal(self._v, other._v))

    def __hash__(self):
        return hash(self._v.tobytes())

    def isclose(self, other: "ConvexPolygon", tol: float = 1e-9) -> bool:
        """Vertexwise comparison up to the choice of starting vertex.

        Roundoff can change which vertex is lexicographically first, so every
        cyclic alignment is tried.
        """
        if self._v.shape != other._v.shape:
            return False
        return any(
            bool(np.all(np.abs(np.roll(self._v, s, axis=0) - other._v) <= tol)) for s in range(len(self._v))
        )

    @property
    def diameter(self) -> float:
        if len(self) == 1:
            return 0.0
        d = self._v[:, None, :] - self._v[None, :, :]
        return float(np.sqrt(np.max(np.sum(d * d, axis=-1))))

    def contains(self, point, tol: float = MEMBERSHIP_TOL) -> bool:
        return bool(point_distances(np.asarray(point, dtype=float).reshape(1, 2), self)[0] <= tol)


def convex_hull(points) -> ConvexPolygon | EmptyRegion:
    """Minimal counter-clockwise extreme-point polygon of a finite point set."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        return EmptyRegion("no input points")
    return ConvexPolygon(pts)


def _bottom_first(v: np.ndarray) -> np.ndarray:
    i = int(np.lexsort((v[:, 0], v[:, 1]))[0])
    return np.roll(v, -i, axis=0)


def minkowski_sum(P: ConvexPolygon, Q: ConvexPolygon) -> ConvexPolygon:
    """Minkowski sum by merging the two edge sequences in angular order."""
    if len(P) == 1:
        return ConvexPolygon(Q.vertices + P.vertices[0])
    if len(Q) == 1:
        return ConvexPolygon(P.vertices + Q.vertices[0])
    a = _bottom_first(P.vertices)
    b = _bottom_first(Q.vertices)
    na, nb = len(a), len(b)
    a = np.vstack([a, a[:2]])
    b = np.vstack([b, b[:2]])
    out = []
    i = j = 0
    while i < na or j < nb:
        out.append(a[i] + b[j])
        ea = a[i + 1] - a[i]
        eb = b[j + 1] - b[j]
        c = ea[0] * eb[1] - ea[1] * eb[0]
        if c >= 0 and i < na:
            i += 1
        if c <= 0 and j < nb:
            j += 1
    return ConvexPolygon(np.array(out))


def scale_set(lam: float, P: ConvexPolygon) -> ConvexPolygon:
    """The set {lam * p : p in P}."""
    if lam == 0:
        return ConvexPolygon(np.zeros((1, 2)))
    return ConvexPolygon(lam * P.vertices)


def translate(P: ConvexPolygon, shift) -> ConvexPolygon:
    return ConvexPolygon(P.vertices + np.asarray(shift, dtype=float))


def product_set(P: ConvexPolygon, Q: ConvexPolygon) -> ConvexPolygon:
    """Hull of componentwise products of vertex pairs.

    Any linear functional of the componentwise product is bilinear in the two
    factors, so its maximum over P x Q sits on a vertex pair.
    """
    prods = (P.vertices[:, None, :] * Q.vertices[None, :, :]).reshape(-1, 2)
    return ConvexPolygon(prods)


def support_value(P: ConvexPolygon, u) -> float:
    """max over vertices of <u, v>."""
    u = np.asarray(u, dtype=float)
    return float(np.max(P.vertices @ u))


def support_values(P: ConvexPolygon, directions: np.ndarray) -> np.ndarray:
    """Support values for a batch of directions, shape (n,)."""
    return np.max(P.vertices @ np.asarray(directions, dtype=float).T, axis=0)


def point_distances(points: np.ndarray, P: ConvexPolygon) -> np.ndarray:
    """Euclidean distance from each point to the polygon (zero inside)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    v = P.vertices
    if len(v) == 1:
        return np.hypot(pts[:, 0] - v[0, 0], pts[:, 1] - v[0, 1])
    a = v
    b = np.roll(v, -1, axis=0)
    if len(v) == 2:
        a, b = a[:1], b[:1]
    ab = b - a  # (e, 2)
    ap = pts[:, None, :] - a[None, :, :]  # (k, e, 2)
    denom = np.sum(ab * ab, axis=1)
    t = np.clip(np.sum(ap * ab[None], axis=2) / denom[None], 0.0, 1.0)
    closest = a[None] + t[..., None] * ab[None]
    dist = np.min(np.linalg.norm(pts[:, None, :] - closest, axis=2), axis=1)
    if len(v) >= 3:
        cross = ab[None, :, 0] * ap[..., 1] - ab[None, :, 1] * ap[..., 0]
        inside = np.all(cross >= 0.0, axis=1)
        dist = np.where(inside, 0.0, dist)
    return dist


def hausdorff(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    """Hausdorff distance between two convex polygons.

    The distance to a convex set is a convex function, so each directed
    sup-inf term is attained at a vertex.
    """
    return float(max(np.max(point_distances(P.vertices, Q)), np.max(point_distances(Q.vertices, P))))


def directional_hausdorff(P: ConvexPolygon, Q: ConvexPolygon, n: int = 720) -> float:
    """max over n uniform directions of |s_P - s_Q|; a lower bound on hausdorff."""
    theta = 2.0 * np.pi * np.arange(n) / n
    dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    return float(np.max(np.abs(support_values(P, dirs) - support_values(Q, dirs))))


def halfspace_pieces(normals, offsets, tol: float = 1e-9):
    """Clip every boundary line against all other halfplanes.

    ``offsets`` may be a vector (one system) or an (m, n) matrix of m systems
    sharing the same normals. Returns ``(status, points)`` lists with one
    entry per system: status is "ok", "empty" or "unbounded" and points is a
    (2j, 2) array holding the two endpoints of each surviving boundary piece.
    Pieces infeasible by less than ``tol`` (relative to the data scale)
    collapse to their midpoint, which keeps points and segments exact.
    """
    U = np.asarray(normals, dtype=float).reshape(-1, 2)
    C = np.asarray(offsets, dtype=float)
    C = C.reshape(1, -1) if C.ndim == 1 else C
    if U.shape[0] == 0 or C.shape[1] != U.shape[0]:
        raise ValueError("need matching, non-empty normal and offset lists")
    nrm2 = np.sum(U * U, axis=1)
    if np.any(nrm2 == 0):
        raise ValueError("normals must be non-zero")
    nrm = np.sqrt(nrm2)

    along = np.column_stack([-U[:, 1], U[:, 0]])  # line direction
    A = U @ along.T  # A[j, k] = <u_j, d_k>
    G = (U @ U.T) / nrm2[None, :]  # <u_j, base_k> = G[j, k] c_k
    par = np.abs(A) <= 1e-12 * nrm[:, None] * nrm[None, :]
    pos = ~par & (A > 0)
    neg = ~par & (A < 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        invA = np.where(par, 0.0, 1.0 / A)

    status, points = [], []
    for c in C:
        scale = max(1.0, float(np.max(np.abs(c))))
        ftol = tol * scale
        B = c[:, None] - G * c[None, :]  # constraint j on line k: A t <= B
        blocked = np.any(par & (B < -ftol), axis=0)
        ratio = B * invA
        t_hi = np.min(np.where(pos, ratio, np.inf), axis=0)
        t_lo = np.max(np.where(neg, ratio, -np.inf), axis=0)
        alive = ~blocked & (t_lo <= t_hi + ftol / nrm)
        if not np.any(alive):
            status.append("empty")
            points.append(None)
            continue
        if np.any(alive & (np.isinf(t_lo) | np.isinf(t_hi))):
            status.append("unbounded")
            points.append(None)
            continue
        lo = t_lo[alive]
        hi = t_hi[alive]
        mid = 0.5 * (lo + hi)
        flip = lo > hi
        lo = np.where(flip, mid, lo)
        hi = np.where(flip, mid, hi)
        base = (c[alive] / nrm2[alive])[:, None] * U[alive]
        d = along[alive]
        pts = np.empty((2 * lo.size, 2))
        pts[0::2] = base + lo[:, None] * d
        pts[1::2] = base + hi[:, None] * d
        status.append("ok")
        points.append(pts)
    return status, points


def halfspace_intersection(normals, offsets, tol: float = 1e-9) -> ConvexPolygon | EmptyRegion | Unbounded:
    """Intersection of the halfplanes {x : <normals[k], x> <= offsets[k]}."""
    status, points = halfspace_pieces(normals, np.asarray(offsets, dtype=float).reshape(-1), tol)
    if status[0] == "empty":
        return EmptyRegion("constraints are inconsistent")
    if status[0] == "unbounded":
        return Unbounded("directions do not positively span the plane")
    return ConvexPolygon(points[0])


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(2)
    n = float(np.hypot(v[0], v[1]))
    if n == 0:
        raise ValueError("zero vector has no direction")
    return v / n


class ConeSpec:
    """Polyhedral convex cone K = {x : <n_i, x> >= 0 for all i} in the plane.

    ``generators`` must lie in K; they are used for properness checks and
    sampling. Normals are stored normalized.
    """

    __slots__ = ("normals", "generators")

    def __init__(self, normals, generators, require_proper: bool = False, tol: float = MEMBERSHIP_TOL):
        N = np.asarray(normals, dtype=float).reshape(-1, 2)
        G = np.asarray(generators, dtype=float).reshape(-1, 2)
        if N.shape[0]:
            N = np.array([_unit(n) for n in N])
        N.setflags(write=False)
        G.setflags(write=False)
        object.__setattr__(self, "normals", N)
        object.__setattr__(self, "generators", G)
        for g in G:
            if not cone_contains(self, g, tol):
                raise ValueError(f"generator {g.tolist()} violates a halfspace constraint")
        if require_proper and not cone_is_proper(self):
            raise ValueError("cone is not proper: it contains a line")

    def __setattr__(self, name, value):
        raise AttributeError("ConeSpec is immutable")

    def __reduce__(self):
        return (ConeSpec, (np.array(self.normals), np.array(self.generators)))

    def __repr__(self) -> str:
        return f"ConeSpec(normals={self.normals.tolist()}, generators={self.generators.tolist()})"

    @classmethod
    def from_generators(cls, generators, require_proper: bool = True) -> "ConeSpec":
        """Cone spanned by the given rays (must fit in an open halfplane)."""
        G = np.array([_unit(g) for g in np.asarray(generators, dtype=float).reshape(-1, 2)])
        if G.shape[0] == 0:
            raise ValueError("need at least one generator")
        mean = G.sum(axis=0)
        if np.hypot(*mean) < 1e-12:
            raise ValueError("generators do not span a pointed cone")
        m = _unit(mean)
        ang = np.arctan2(G[:, 0] * m[1] - G[:, 1] * m[0], G @ m)  # angle of g relative to m (cw positive)
        right = G[int(np.argmax(ang))]
        left = G[int(np.argmin(ang))]
        if np.max(ang) - np.min(ang) >= np.pi - 1e-12:
            raise ValueError("generators do not span a pointed cone")
        if np.allclose(left, right, atol=1e-12):
            perp = np.array([-left[1], left[0]])
            normals = [perp, -perp, left]
        else:
            # K lies counter-clockwise of `right` and clockwise of `left`
            normals = [np.array([-right[1], right[0]]), np.array([left[1], -left[0]])]
        return cls(normals, generators, require_proper=require_proper)

    @classmethod
    def first_quadrant(cls) -> "ConeSpec":
        return cls([[1.0, 0.0], [0.0, 1.0]], [[1.0, 0.0], [0.0, 1.0]], require_proper=True)

    def to_dict(self) -> dict:
        return {"normals": self.normals.tolist(), "generators": self.generators.tolist()}


def cone_contains(K: ConeSpec, x, tol: float = MEMBERSHIP_TOL) -> bool:
    """True iff <n_i, x> >= -tol for every normal."""
    if K.normals.shape[0] == 0:
        return True
    return bool(np.all(K.normals @ np.asarray(x, dtype=float) >= -tol))


def cone_is_proper(K: ConeSpec, tol: float = MEMBERSHIP_TOL) -> bool:
    """True iff K contains no line.

    The generator test is the operative check; the rank test catches cones
    whose generator list does not reach the lineality space.
    """
    if K.normals.shape[0] == 0 or np.linalg.matrix_rank(K.normals, tol=1e-12) < 2:
        return False
    for g in K.generators:
        if np.hypot(*g) > tol and cone_contains(K, -g, tol):
            return False
    return True
