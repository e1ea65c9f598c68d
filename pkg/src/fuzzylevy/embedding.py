"""Support-function embedding of fuzzy vectors into a sampled L^p space.

A fuzzy vector is represented by the matrix of its support values
``s(alpha_i, u_k)`` on an alpha grid times a uniform direction grid. The
matrix space is the discretized L^p((0,1] x S^1): alpha integrates with
left-step weights, directions with the uniform weight 1/n.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .exceptions import GridMismatch, InversionFailed
from .fuzzy import AlphaGrid, FuzzyVector
from .geometry import MEMBERSHIP_TOL, ConeSpec, ConvexPolygon, EmptyRegion, Unbounded, halfspace_pieces


@dataclass(frozen=True)
class SphereGrid:
    """n uniform unit directions u_k = (cos 2pi k/n, sin 2pi k/n)."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 8 or self.n % 2:
            raise ValueError("direction count must be an even integer >= 8")
        object.__setattr__(self, "n", int(self.n))

    @cached_property
    def angles(self) -> np.ndarray:
        a = 2.0 * np.pi * np.arange(self.n) / self.n
        a.setflags(write=False)
        return a

    @cached_property
    def directions(self) -> np.ndarray:
        """Unit directions, built from one sector and its symmetries.

        The grid is exactly symmetric under negation and, when n allows it,
        under quarter turns and the diagonal reflection, so axis and diagonal
        directions are exact and cone normals line up bit for bit.
        """
        n = self.n
        d = np.empty((n, 2))
        if n % 8 == 0:
            q = n // 4
            k = np.arange(n // 8 + 1)
            t = 2.0 * np.pi * k / n
            d[k] = np.column_stack([np.cos(t), np.sin(t)])
            d[q - k] = np.column_stack([np.sin(t), np.cos(t)])
            d[q : 2 * q] = np.column_stack([-d[:q, 1], d[:q, 0]])
        elif n % 4 == 0:
            q = n // 4
            t = 2.0 * np.pi * np.arange(q) / n
            d[:q] = np.column_stack([np.cos(t), np.sin(t)])
            d[q : 2 * q] = np.column_stack([-d[:q, 1], d[:q, 0]])
        else:
            t = 2.0 * np.pi * np.arange(n // 2) / n
            d[: n // 2] = np.column_stack([np.cos(t), np.sin(t)])
        d[n // 2 :] = -d[: n // 2]
        d = d + 0.0
        d.setflags(write=False)
        return d

    def index_of(self, u, tol: float = 1e-12) -> int | None:
        """Grid index of direction u, or None if u is not a grid direction."""
        u = np.asarray(u, dtype=float)
        u = u / np.hypot(*u)
        k = int(np.argmax(self.directions @ u))
        return k if np.hypot(*(self.directions[k] - u)) <= tol else None


class EmbeddedFunction:
    """Sampled function on (alpha levels) x (directions).

    Any finite matrix is allowed: the ambient space is strictly larger than
    the image of the embedding.
    """

    __slots__ = ("agrid", "sgrid", "values")

    def __init__(self, agrid: AlphaGrid, sgrid: SphereGrid, values):
        v = np.array(values, dtype=float)
        if v.shape != (len(agrid), sgrid.n):
            raise ValueError(f"values must have shape {(len(agrid), sgrid.n)}, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("embedded values must be finite")
        v = v + 0.0
        v.setflags(write=False)
        object.__setattr__(self, "agrid", agrid)
        object.__setattr__(self, "sgrid", sgrid)
        object.__setattr__(self, "values", v)

    def __setattr__(self, name, value):
        raise AttributeError("EmbeddedFunction is immutable")

    def __reduce__(self):
        return (EmbeddedFunction, (self.agrid, self.sgrid, np.array(self.values)))

    @classmethod
    def zeros(cls, agrid: AlphaGrid, sgrid: SphereGrid) -> "EmbeddedFunction":
        return cls(agrid, sgrid, np.zeros((len(agrid), sgrid.n)))

    def __repr__(self) -> str:
        return f"EmbeddedFunction(m={len(self.agrid)}, n={self.sgrid.n})"

    def _check(self, other: "EmbeddedFunction"):
        if self.agrid != other.agrid or self.sgrid != other.sgrid:
            raise GridMismatch("embedded functions live on different grids")

    def __add__(self, other):
        if not isinstance(other, EmbeddedFunction):
            return NotImplemented
        self._check(other)
        return EmbeddedFunction(self.agrid, self.sgrid, self.values + other.values)

    def __sub__(self, other):
        if not isinstance(other, EmbeddedFunction):
            return NotImplemented
        self._check(other)
        return EmbeddedFunction(self.agrid, self.sgrid, self.values - other.values)

    def __mul__(self, lam):
        return EmbeddedFunction(self.agrid, self.sgrid, float(lam) * self.values)

    __rmul__ = __mul__

    def __truediv__(self, lam):
        return EmbeddedFunction(self.agrid, self.sgrid, self.values / float(lam))

    def __neg__(self):
        return EmbeddedFunction(self.agrid, self.sgrid, -self.values)

    def __eq__(self, other):
        if not isinstance(other, EmbeddedFunction):
            return NotImplemented
        return self.agrid == other.agrid and self.sgrid == other.sgrid and np.array_equal(self.values, other.values)

    def allclose(self, other: "EmbeddedFunction", atol: float = 1e-9) -> bool:
        self._check(other)
        return bool(np.all(np.abs(self.values - other.values) <= atol))


def _quadrature_weights(agrid: AlphaGrid, sgrid: SphereGrid) -> np.ndarray:
    return np.outer(agrid.weights, np.full(sgrid.n, 1.0 / sgrid.n))


def embed(x: FuzzyVector, sgrid: SphereGrid) -> EmbeddedFunction:
    """values[i, k] = support value of cut i in direction u_k."""
    D = sgrid.directions.T
    vals = np.array([np.max(c.vertices @ D, axis=0) for c in x.cuts])
    return EmbeddedFunction(x.grid, sgrid, vals)


def lp_norm(f: EmbeddedFunction, p: float = 2.0) -> float:
    a = np.abs(f.values)
    if np.isinf(p):
        return float(np.max(a))
    if p < 1:
        raise ValueError("p must be >= 1")
    w = _quadrature_weights(f.agrid, f.sgrid)
    return float(np.sum(w * a**p) ** (1.0 / p))


def lp_distance(f: EmbeddedFunction, g: EmbeddedFunction, p: float = 2.0) -> float:
    f._check(g)
    return lp_norm(f - g, p)


def fuzzy_dp(x: FuzzyVector, y: FuzzyVector, p: float, sgrid: SphereGrid) -> float:
    """Distance between fuzzy vectors pulled back through the embedding."""
    if x.grid != y.grid:
        raise GridMismatch("fuzzy vectors are defined on different alpha grids")
    return lp_distance(embed(x, sgrid), embed(y, sgrid), p)


@dataclass(frozen=True)
class DualProbe:
    """Finite-rank linear functional: sum of weights * values * quadrature weight."""

    agrid: AlphaGrid
    sgrid: SphereGrid
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (len(self.agrid), self.sgrid.n):
            raise ValueError("probe weights have the wrong shape")
        if not np.all(np.isfinite(w)):
            raise ValueError("probe weights must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def point_mass(cls, agrid: AlphaGrid, sgrid: SphereGrid, i: int, k: int) -> "DualProbe":
        w = np.zeros((len(agrid), sgrid.n))
        w[i, k] = 1.0
        return cls(agrid, sgrid, w)

    def dual_norm(self, p: float = 2.0) -> float:
        """Operator norm of the probe on the sampled L^p space (Hoelder)."""
        mu = _quadrature_weights(self.agrid, self.sgrid)
        a = np.abs(self.weights)
        if np.isinf(p):
            return float(np.sum(mu * a))
        if p == 1:
            return float(np.max(a[mu > 0]))
        q = p / (p - 1.0)
        return float(np.sum(mu * a**q) ** (1.0 / q))


def probe(ell: DualProbe, f: EmbeddedFunction) -> float:
    if ell.agrid != f.agrid or ell.sgrid != f.sgrid:
        raise GridMismatch("probe and function live on different grids")
    return float(np.sum(ell.weights * f.values * _quadrature_weights(f.agrid, f.sgrid)))


@dataclass(frozen=True)
class Violation:
    kind: str  # subadditivity | antipodal | alpha-monotonicity | empty-inversion
    location: tuple
    magnitude: float


@dataclass(frozen=True)
class ValidityReport:
    violations: tuple = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}


def _level_pieces(f: EmbeddedFunction):
    return halfspace_pieces(f.sgrid.directions, f.values)


def _regions(pieces):
    out = []
    for st, pts in zip(*pieces):
        if st == "empty":
            out.append(EmptyRegion("constraints are inconsistent"))
        elif st == "unbounded":
            out.append(Unbounded("directions do not positively span the plane"))
        else:
            out.append(ConvexPolygon(pts))
    return out


def _validity(f: EmbeddedFunction, tol: float, status) -> ValidityReport:
    v = f.values
    n = f.sgrid.n
    h = n // 2
    stol = tol * max(1.0, float(np.max(np.abs(v))))
    out = []

    anti = v[:, :h] + v[:, h:]
    for i, k in zip(*np.nonzero(anti < -stol)):
        out.append(Violation("antipodal", (int(i), int(k)), float(-anti[i, k])))

    # u_{k-1} + u_{k+1} = 2 cos(2 pi / n) u_k, so sublinearity forces this
    c2 = 2.0 * np.cos(2.0 * np.pi / n)
    excess = c2 * v - np.roll(v, 1, axis=1) - np.roll(v, -1, axis=1)
    for i, k in zip(*np.nonzero(excess > stol)):
        out.append(Violation("subadditivity", (int(i), int(k)), float(excess[i, k])))

    rise = v[1:] - v[:-1]
    for i, k in zip(*np.nonzero(rise > stol)):
        out.append(Violation("alpha-monotonicity", (int(i) + 1, int(k)), float(rise[i, k])))

    for i, st in enumerate(status):
        if st != "ok":
            out.append(Violation("empty-inversion", (i,), float("inf")))
    return ValidityReport(tuple(out))


def validate_support(f: EmbeddedFunction, tol: float = MEMBERSHIP_TOL) -> ValidityReport:
    """Necessary conditions for f to be a sampled fuzzy support function.

    Tolerances are scaled by max(1, max|f|).
    """
    return _validity(f, tol, _level_pieces(f)[0])


def _stack(f: EmbeddedFunction, regions) -> FuzzyVector:
    for i, r in enumerate(regions):
        if isinstance(r, EmptyRegion):
            raise InversionFailed(i, "empty intersection")
        if isinstance(r, Unbounded):
            raise InversionFailed(i, "unbounded intersection")
    return FuzzyVector(f.agrid, regions)


def invert(f: EmbeddedFunction) -> FuzzyVector:
    """Rebuild each cut as the intersection of its supporting halfplanes."""
    return _stack(f, _regions(_level_pieces(f)))


def in_embedded_cone(f: EmbeddedFunction, K: ConeSpec, tol: float = MEMBERSHIP_TOL) -> bool:
    """f is a valid support function whose preimage is K-positive."""
    status, points = _level_pieces(f)
    if not _validity(f, tol, status).is_valid:
        return False
    # the widest cut lies in K iff its boundary pieces do; nestedness of the
    # higher cuts already follows from alpha-monotonicity
    return _points_in_cone(points[0], K, tol)


def _points_in_cone(v: np.ndarray, K: ConeSpec, tol: float) -> bool:
    if K.normals.shape[0] == 0:
        return True
    return bool(np.all(v @ K.normals.T >= -tol * max(1.0, float(np.max(np.abs(v))))))


def cone_aligned(K: ConeSpec, sgrid: SphereGrid) -> bool:
    """Every outward cone normal is a grid direction.

    Then the circumscribed polygons produced by ``invert`` of a K-positive
    embedding stay inside K, so cone membership is exact at grid scale.
    """
    return all(sgrid.index_of(-n) is not None for n in K.normals)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(f: EmbeddedFunction, path) -> None:
    """Header: 'alpha' then direction angles; one row per alpha level."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alpha"] + [_fmt(a) for a in f.sgrid.angles])
        for a, row in zip(f.agrid.levels, f.values):
            w.writerow([_fmt(a)] + [_fmt(x) for x in row])


def read_csv(path) -> EmbeddedFunction:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    n = len(rows[0]) - 1
    alphas = [float(r[0]) for r in rows[1:]]
    vals = [[float(x) for x in r[1:]] for r in rows[1:]]
    return EmbeddedFunction(AlphaGrid(tuple(alphas)), SphereGrid(n), vals)
