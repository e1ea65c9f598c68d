"""scikit-learn style wrappers around the embedding and the subordinator.

``SupportFunctionEmbedding`` is a transformer from fuzzy vectors to flat
support-function rows. ``ConeStableSubordinator`` fits a stable cone Levy
measure to a set of fuzzy atoms and then samples paths from it.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .embedding import EmbeddedFunction, SphereGrid, embed, invert
from .exceptions import GridMismatch, TripletInvalid
from .fuzzy import AlphaGrid, FuzzyVector
from .geometry import ConeSpec
from .levy import LevyModel, LevyTriplet, Trajectory, simulate, state_at, validate_triplet
from .stats import simulate_ensemble


def check_fuzzy_vectors(X, grid: AlphaGrid | None = None) -> list:
    """Non-empty list of fuzzy vectors sharing one alpha grid."""
    if isinstance(X, FuzzyVector):
        X = [X]
    X = list(X)
    if not X:
        raise ValueError("expected at least one fuzzy vector")
    for k, x in enumerate(X):
        if not isinstance(x, FuzzyVector):
            raise TypeError(f"item {k} is {type(x).__name__}, not FuzzyVector")
    ref = grid if grid is not None else X[0].grid
    for k, x in enumerate(X):
        if x.grid != ref:
            raise GridMismatch(f"item {k} uses a different alpha grid")
    return X


def check_support_matrix(Z, agrid: AlphaGrid, sgrid: SphereGrid) -> np.ndarray:
    """Rows of flattened support functions as a (k, m, n) float array."""
    Z = np.asarray(Z, dtype=float)
    m, n = len(agrid), sgrid.n
    if Z.ndim == 1:
        Z = Z[None, :]
    if Z.ndim == 2:
        if Z.shape[1] != m * n:
            raise ValueError(f"expected {m * n} features, got {Z.shape[1]}")
        Z = Z.reshape(-1, m, n)
    if Z.ndim != 3 or Z.shape[1:] != (m, n):
        raise ValueError(f"expected shape (k, {m}, {n}), got {Z.shape}")
    if not np.all(np.isfinite(Z)):
        raise ValueError("support values must be finite")
    return Z


class SupportFunctionEmbedding(TransformerMixin, BaseEstimator):
    """Sampled support functions on (alpha levels) x (unit directions).

    Parameters
    ----------
    n_directions : int
        Number of equally spaced directions; even and at least 8.
    """

    def __init__(self, n_directions: int = 64):
        self.n_directions = n_directions

    def fit(self, X, y=None):
        X = check_fuzzy_vectors(X)
        self.alpha_grid_ = X[0].grid
        self.sphere_grid_ = SphereGrid(self.n_directions)
        self.n_features_out_ = len(self.alpha_grid_) * self.n_directions
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "sphere_grid_")
        X = check_fuzzy_vectors(X, self.alpha_grid_)
        return np.stack([embed(x, self.sphere_grid_).values.ravel() for x in X])

    def inverse_transform(self, Z) -> list:
        """Fuzzy vectors whose cuts are the halfspace intersections of each row."""
        check_is_fitted(self, "sphere_grid_")
        Z = check_support_matrix(Z, self.alpha_grid_, self.sphere_grid_)
        return [invert(EmbeddedFunction(self.alpha_grid_, self.sphere_grid_, z)) for z in Z]

    def to_embedded(self, row) -> EmbeddedFunction:
        check_is_fitted(self, "sphere_grid_")
        z = check_support_matrix(row, self.alpha_grid_, self.sphere_grid_)
        if z.shape[0] != 1:
            raise ValueError("expected a single row")
        return EmbeddedFunction(self.alpha_grid_, self.sphere_grid_, z[0])


class ConeStableSubordinator(BaseEstimator):
    """alpha-stable subordinator whose angular measure sits on given atoms.

    ``fit`` embeds and normalizes the atoms (sample weights become angular
    masses), sets the drift to the centering plus ``delta`` times the
    embedded ``drift_element`` and validates the resulting triplet.

    Parameters
    ----------
    alpha : float in (0, 1)
    c_alpha : float > 0
    cone : ConeSpec or None
        Reference cone; None means the closed first quadrant.
    n_directions : int
    p : float >= 1
        Norm defining the unit sphere for the atoms.
    delta : float >= 0
    drift_element : FuzzyVector or None
    """

    def __init__(
        self,
        alpha: float = 0.5,
        c_alpha: float = 1.0,
        cone: ConeSpec | None = None,
        n_directions: int = 64,
        p: float = 2.0,
        delta: float = 0.0,
        drift_element: FuzzyVector | None = None,
    ):
        self.alpha = alpha
        self.c_alpha = c_alpha
        self.cone = cone
        self.n_directions = n_directions
        self.p = p
        self.delta = delta
        self.drift_element = drift_element

    def fit(self, X: Sequence[FuzzyVector], y=None, sample_weight=None):
        X = check_fuzzy_vectors(X)
        w = np.ones(len(X)) if sample_weight is None else np.asarray(sample_weight, dtype=float)
        if w.shape != (len(X),):
            raise ValueError("one sample weight per atom")
        cone = self.cone if self.cone is not None else ConeSpec.first_quadrant()
        sgrid = SphereGrid(self.n_directions)
        self.model_ = LevyModel.from_fuzzy(self.alpha, X, w.tolist(), cone, sgrid, self.c_alpha, self.p)
        element = None
        if self.drift_element is not None:
            check_fuzzy_vectors([self.drift_element], X[0].grid)
            element = embed(self.drift_element, sgrid)
        self.triplet_ = LevyTriplet.centered(self.model_, element, self.delta)
        self.report_ = validate_triplet(self.triplet_)
        if not self.report_.ok:
            raise TripletInvalid(self.report_)
        return self

    def sample(self, T: float = 1.0, eps: float = 0.01, seed: int = 0) -> Trajectory:
        check_is_fitted(self, "triplet_")
        return simulate(self.triplet_, T, eps, seed)

    def sample_paths(self, n: int, T: float = 1.0, eps: float = 0.01, master_seed: int = 0, jobs: int = 1) -> list:
        check_is_fitted(self, "triplet_")
        return simulate_ensemble(self.triplet_, T, eps, master_seed, n, jobs)

    def predict(self, traj: Trajectory, times) -> np.ndarray:
        """States of a sampled path at the given times, one flat row each."""
        check_is_fitted(self, "triplet_")
        return np.stack([state_at(traj, self.model_, float(t)).values.ravel() for t in np.atleast_1d(times)])


__all__ = [
    "ConeStableSubordinator",
    "SupportFunctionEmbedding",
    "check_fuzzy_vectors",
    "check_support_matrix",
]
