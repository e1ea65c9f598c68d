"""Fuzzy vectors in the plane represented by stacks of nested alpha-cuts."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import EmptyCut, GridMismatch, NestednessViolation
from .geometry import (
    MEMBERSHIP_TOL,
    ConeSpec,
    ConvexPolygon,
    hausdorff,
    minkowski_sum,
    point_distances,
    product_set,
    scale_set,
)


@dataclass(frozen=True)
class AlphaGrid:
    """Strictly increasing membership levels in (0, 1], ending at exactly 1."""

    levels: tuple

    def __post_init__(self):
        lv = tuple(float(a) for a in self.levels)
        object.__setattr__(self, "levels", lv)
        if len(lv) < 2:
            raise ValueError("an alpha grid needs at least two levels")
        if lv[0] <= 0.0:
            raise ValueError("alpha levels must be positive")
        if lv[-1] != 1.0:
            raise ValueError("the last alpha level must be exactly 1")
        if any(b <= a for a, b in zip(lv, lv[1:])):
            raise ValueError("alpha levels must be strictly increasing")

    @classmethod
    def uniform(cls, m: int) -> "AlphaGrid":
        return cls(tuple((i + 1) / m for i in range(m)))

    def __len__(self) -> int:
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    @property
    def weights(self) -> np.ndarray:
        """Left-step quadrature weights: a_1, a_2 - a_1, ..., 1 - a_{m-1}."""
        lv = np.asarray(self.levels)
        return np.diff(lv, prepend=0.0)


def _containment_excess(inner: ConvexPolygon, outer: ConvexPolygon) -> float:
    return float(np.max(point_distances(inner.vertices, outer)))


class FuzzyVector:
    """A fuzzy vector given by its alpha-cuts on a fixed grid.

    ``cuts[i]`` is the alpha-cut at ``grid.levels[i]``; the stack must be
    nested (higher levels inside lower ones) up to ``tol`` relative to the
    coordinate scale.
    """

    __slots__ = ("grid", "cuts")

    def __init__(self, grid: AlphaGrid, cuts: Sequence[ConvexPolygon], tol: float = MEMBERSHIP_TOL):
        cuts = tuple(cuts)
        if len(cuts) != len(grid):
            raise ValueError(f"expected {len(grid)} cuts, got {len(cuts)}")
        for i, c in enumerate(cuts):
            if not isinstance(c, ConvexPolygon):
                raise EmptyCut(i)
        for i in range(1, len(cuts)):
            scale = max(1.0, float(np.max(np.abs(cuts[i - 1].vertices))))
            if _containment_excess(cuts[i], cuts[i - 1]) > tol * scale:
                raise NestednessViolation(i)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "cuts", cuts)

    def __setattr__(self, name, value):
        raise AttributeError("FuzzyVector is immutable")

    def __reduce__(self):
        return (FuzzyVector, (self.grid, self.cuts))

    def __repr__(self) -> str:
        return f"FuzzyVector(levels={self.grid.levels}, cuts={list(self.cuts)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FuzzyVector):
            return NotImplemented
        return self.grid == other.grid and self.cuts == other.cuts

    def isclose(self, other: "FuzzyVector", tol: float = 1e-9) -> bool:
        return self.grid == other.grid and all(a.isclose(b, tol) for a, b in zip(self.cuts, other.cuts))

    @property
    def support(self) -> ConvexPolygon:
        """Widest retained cut; stands in for the closure of the support."""
        return self.cuts[0]

    @property
    def diameter(self) -> float:
        return self.cuts[0].diameter

    def to_literal(self) -> dict:
        return {"alphas": list(self.grid.levels), "cuts": [c.vertices.tolist() for c in self.cuts]}

    @classmethod
    def from_literal(cls, lit: dict, grid: AlphaGrid | None = None) -> "FuzzyVector":
        g = AlphaGrid(tuple(lit["alphas"])) if "alphas" in lit else grid
        if g is None:
            raise ValueError("fuzzy literal without alphas needs a grid")
        if grid is not None and g != grid:
            raise GridMismatch("fuzzy literal alphas differ from the configured grid")
        return make_fuzzy(g, [ConvexPolygon(c) for c in lit["cuts"]])

    # operator sugar
    def __add__(self, other):
        return add(self, other)

    def __rmul__(self, lam):
        return scalar_mul(lam, self)


def make_fuzzy(grid: AlphaGrid, cuts: Sequence[ConvexPolygon], tol: float = MEMBERSHIP_TOL) -> FuzzyVector:
    """Validated constructor; raises NestednessViolation / EmptyCut."""
    return FuzzyVector(grid, cuts, tol)


def crisp(x, grid: AlphaGrid) -> FuzzyVector:
    """Indicator of a single point: every cut is the singleton {x}."""
    p = ConvexPolygon(np.asarray(x, dtype=float).reshape(1, 2))
    return FuzzyVector(grid, [p] * len(grid))


def alpha_cut(x: FuzzyVector, alpha: float) -> ConvexPolygon:
    """Cut at the smallest grid level >= alpha (left-continuous step rule)."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    i = bisect.bisect_left(x.grid.levels, alpha)
    return x.cuts[i]


def membership(x: FuzzyVector, p, tol: float = MEMBERSHIP_TOL) -> float:
    """Step reconstruction of the characterizing function at p."""
    p = np.asarray(p, dtype=float).reshape(1, 2)
    value = 0.0
    for a, cut in zip(x.grid.levels, x.cuts):
        if point_distances(p, cut)[0] <= tol:
            value = a
        else:
            break
    return value


def _same_grid(x: FuzzyVector, y: FuzzyVector):
    if x.grid != y.grid:
        raise GridMismatch("fuzzy vectors are defined on different alpha grids")


def add(x: FuzzyVector, y: FuzzyVector) -> FuzzyVector:
    """Levelwise Minkowski sum."""
    _same_grid(x, y)
    return FuzzyVector(x.grid, [minkowski_sum(a, b) for a, b in zip(x.cuts, y.cuts)])


def scalar_mul(lam: float, x: FuzzyVector) -> FuzzyVector:
    return FuzzyVector(x.grid, [scale_set(lam, c) for c in x.cuts])


def multiply(x: FuzzyVector, y: FuzzyVector) -> FuzzyVector:
    """Levelwise componentwise set product (not used by the process)."""
    _same_grid(x, y)
    return FuzzyVector(x.grid, [product_set(a, b) for a, b in zip(x.cuts, y.cuts)])


def is_K_positive(x: FuzzyVector, K: ConeSpec, tol: float = MEMBERSHIP_TOL) -> bool:
    """Every vertex of the widest cut lies in K.

    The tolerance is scaled by the cut's coordinate magnitude.
    """
    v = x.cuts[0].vertices
    if K.normals.shape[0] == 0:
        return True
    return bool(np.all(v @ K.normals.T >= -tol * max(1.0, float(np.max(np.abs(v))))))


def d_infty(x: FuzzyVector, y: FuzzyVector) -> float:
    """max over grid levels of the Hausdorff distance between cuts."""
    _same_grid(x, y)
    return max(hausdorff(a, b) for a, b in zip(x.cuts, y.cuts))


__all__ = [
    "AlphaGrid",
    "FuzzyVector",
    "add",
    "alpha_cut",
    "crisp",
    "d_infty",
    "is_K_positive",
    "make_fuzzy",
    "membership",
    "multiply",
    "scalar_mul",
]
