"""alpha-stable subordinators in the embedded cone and their fuzzy pullback.

The Levy measure is the polar product

    nu(C) = c_alpha^{-1} * int_0^inf sum_j w_j 1_C(r y_j) r^{-1-alpha} dr

with finitely many unit-norm angular atoms y_j inside the embedded cone. For
alpha in (0, 1) every path is a drift plus absolutely summable jumps, so the
simulator is a truncated inverse-tail (LePage) series with no compensation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate

from . import rng as _rng
from .embedding import (
    DualProbe,
    EmbeddedFunction,
    SphereGrid,
    cone_aligned,
    embed,
    in_embedded_cone,
    invert,
    lp_distance,
    lp_norm,
    probe,
)
from .exceptions import BelowTruncation, QuadratureNonConvergence, TripletInvalid
from .fuzzy import AlphaGrid, FuzzyVector
from .geometry import ConeSpec

QUAD_TARGET = 1e-8


class LevyModel:
    """Stable cone Levy measure with discrete angular part.

    Atoms are checked for grid consistency and unit norm here; membership in
    the embedded cone is condition (b) of :func:`validate_triplet` so that an
    invalid model can still be built and reported on.
    """

    def __init__(
        self,
        alpha: float,
        atoms: Sequence[EmbeddedFunction],
        weights: Sequence[float],
        cone: ConeSpec,
        agrid: AlphaGrid,
        sgrid: SphereGrid,
        c_alpha: float = 1.0,
        p_model: float = 2.0,
    ):
        if not 0.0 < alpha < 1.0:
            raise ValueError("alpha must lie strictly inside (0, 1)")
        if not c_alpha > 0:
            raise ValueError("c_alpha must be positive")
        if not p_model >= 1:
            raise ValueError("p_model must be >= 1")
        atoms = tuple(atoms)
        weights = tuple(float(w) for w in weights)
        if len(atoms) != len(weights):
            raise ValueError("one weight per atom")
        if any(not w > 0 for w in weights):
            raise ValueError("atom weights must be positive")
        for j, y in enumerate(atoms):
            if y.agrid != agrid or y.sgrid != sgrid:
                raise ValueError(f"atom #{j} lives on a different grid")
            if abs(lp_norm(y, p_model) - 1.0) > 1e-9:
                raise ValueError(f"atom #{j} does not have unit norm")
        if not cone_aligned(cone, sgrid):
            raise ValueError(
                "every outward cone normal must be a grid direction; otherwise K-positivity "
                "is not decidable at grid scale"
            )
        self.alpha = float(alpha)
        self.c_alpha = float(c_alpha)
        self.atoms = atoms
        self.weights = weights
        self.cone = cone
        self.agrid = agrid
        self.sgrid = sgrid
        self.p_model = float(p_model)
        if atoms:
            self.atom_values = np.stack([y.values for y in atoms])
        else:
            self.atom_values = np.zeros((0, len(agrid), sgrid.n))
        self.atom_values.setflags(write=False)
        self.atom_norms = np.array([lp_norm(y, p_model) for y in atoms])

    @classmethod
    def from_fuzzy(
        cls,
        alpha: float,
        atoms: Sequence[FuzzyVector],
        weights: Sequence[float],
        cone: ConeSpec,
        sgrid: SphereGrid,
        c_alpha: float = 1.0,
        p_model: float = 2.0,
    ) -> "LevyModel":
        """Embed fuzzy atoms and scale them onto the unit sphere."""
        if not atoms:
            raise ValueError("from_fuzzy needs at least one atom; use the constructor for pure drift")
        agrid = atoms[0].grid
        ys = []
        for j, x in enumerate(atoms):
            f = embed(x, sgrid)
            nrm = lp_norm(f, p_model)
            if nrm == 0:
                raise ValueError(f"atom #{j} embeds to zero and cannot be normalized")
            ys.append(f / nrm)
        return cls(alpha, ys, weights, cone, agrid, sgrid, c_alpha, p_model)

    @property
    def total_mass(self) -> float:
        return float(sum(self.weights))

    def __repr__(self) -> str:
        return (
            f"LevyModel(alpha={self.alpha}, c_alpha={self.c_alpha}, atoms={len(self.atoms)}, "
            f"total_mass={self.total_mass}, p_model={self.p_model})"
        )


@dataclass(frozen=True)
class TripletReport:
    a_ok: bool
    b_ok: bool
    bad_atoms: tuple
    c_ok: bool
    centering: EmbeddedFunction
    gamma0: EmbeddedFunction
    total_mass: float
    bochner: float

    @property
    def ok(self) -> bool:
        return self.a_ok and self.b_ok and self.c_ok

    def summary(self) -> str:
        parts = ["(a) PASS" if self.a_ok else "(a) FAIL"]
        if self.b_ok:
            parts.append("(b) PASS")
        else:
            parts.append("(b) FAIL " + " ".join(f"atom #{j}" for j in self.bad_atoms))
        parts.append("(c) PASS" if self.c_ok else "(c) FAIL gamma0 outside cone")
        return " ".join(parts)


class LevyTriplet:
    """Generating triplet (0, nu, gamma); the Gaussian part is zero by construction."""

    __slots__ = ("model", "gamma", "_report")

    def __init__(self, model: LevyModel, gamma: EmbeddedFunction):
        if gamma.agrid != model.agrid or gamma.sgrid != model.sgrid:
            raise ValueError("gamma lives on a different grid than the model")
        self.model = model
        self.gamma = gamma
        self._report = None

    @property
    def A(self) -> int:
        return 0

    @classmethod
    def centered(cls, model: LevyModel, element: EmbeddedFunction | None = None, delta: float = 0.0) -> "LevyTriplet":
        """gamma = centering + delta * element, so gamma0 = delta * element."""
        if delta < 0:
            raise ValueError("delta must be non-negative")
        gamma = pettis_centering(model)
        if element is not None and delta:
            gamma = gamma + delta * element
        return cls(model, gamma)


def bochner_norm_integral(model: LevyModel) -> float:
    """int_{0<|x|<=1} |x| nu(dx) = Lambda / (c_alpha (1 - alpha))."""
    return model.total_mass / (model.c_alpha * (1.0 - model.alpha))


def pettis_centering(model: LevyModel) -> EmbeddedFunction:
    """int_{0<|x|<=1} x nu(dx) = sum_j w_j y_j / (c_alpha (1 - alpha))."""
    if not model.alpha < 1:
        raise ValueError("the centering integral needs alpha < 1")
    w = np.asarray(model.weights)
    vals = np.tensordot(w, model.atom_values, axes=1) if w.size else np.zeros((len(model.agrid), model.sgrid.n))
    return EmbeddedFunction(model.agrid, model.sgrid, vals / (model.c_alpha * (1.0 - model.alpha)))


def tail_mass(model: LevyModel, eps: float) -> float:
    """nu(|x| > eps) = Lambda eps^{-alpha} / (c_alpha alpha)."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    return model.total_mass * eps ** (-model.alpha) / (model.c_alpha * model.alpha)


def truncation_bound(model: LevyModel, eps: float, T: float) -> float:
    """Expected norm of the discarded jumps of size <= eps up to time T."""
    if not model.alpha < 1:
        raise ValueError("the bound needs alpha < 1")
    return T * model.total_mass * eps ** (1.0 - model.alpha) / (model.c_alpha * (1.0 - model.alpha))


def validate_triplet(tr: LevyTriplet, tol: float = 1e-9) -> TripletReport:
    """Check the three subordinator conditions; cached on the triplet."""
    if tr._report is not None and tol == 1e-9:
        return tr._report
    model = tr.model
    bad = tuple(j for j, y in enumerate(model.atoms) if not in_embedded_cone(y, model.cone, tol))
    centering = pettis_centering(model)
    gamma0 = tr.gamma - centering
    report = TripletReport(
        a_ok=True,
        b_ok=not bad,
        bad_atoms=bad,
        c_ok=in_embedded_cone(gamma0, model.cone, tol),
        centering=centering,
        gamma0=gamma0,
        total_mass=model.total_mass,
        bochner=bochner_norm_integral(model),
    )
    if tol == 1e-9:
        tr._report = report
    return report


@dataclass(frozen=True)
class Trajectory:
    """Drift plus a finite list of jumps sorted by time.

    The state at time t is ``gamma0 * t + sum_{t_i <= t} r_i * y_{j_i}``.
    Construction does not enforce the simulation invariants, so hand-built
    or re-read paths can be checked by :func:`verify_path`.
    """

    gamma0: EmbeddedFunction
    T: float
    eps: float
    times: np.ndarray = field(repr=False)
    magnitudes: np.ndarray = field(repr=False)
    atom_indices: np.ndarray = field(repr=False)
    seed: int = 0

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float).reshape(-1)
        r = np.asarray(self.magnitudes, dtype=float).reshape(-1)
        j = np.asarray(self.atom_indices, dtype=np.int64).reshape(-1)
        if not (t.shape == r.shape == j.shape):
            raise ValueError("times, magnitudes and atom indices must have equal length")
        order = np.argsort(t, kind="stable")
        for name, arr in (("times", t[order]), ("magnitudes", r[order]), ("atom_indices", j[order])):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return self.times.shape[0]

    @property
    def jumps(self) -> list:
        return list(zip(self.times.tolist(), self.magnitudes.tolist(), self.atom_indices.tolist()))


def _jump_count_and_magnitudes(model: LevyModel, T: float, eps: float, stream: _rng.Stream) -> np.ndarray:
    rate = model.total_mass * T / (model.c_alpha * model.alpha)
    inv_alpha = 1.0 / model.alpha
    mags: list = []
    gamma = 0.0
    chunk = 64
    while True:
        g = np.cumsum(np.concatenate([[gamma], stream.exponentials(chunk)]))[1:]
        r = (rate / g) ** inv_alpha
        stop = np.nonzero(r <= eps)[0]
        if stop.size:
            mags.extend(r[: stop[0]].tolist())
            return np.asarray(mags, dtype=float)
        mags.extend(r.tolist())
        gamma = float(g[-1])
        chunk = min(chunk * 2, 1 << 16)


def simulate(tr: LevyTriplet, T: float, eps: float, seed: int) -> Trajectory:
    """Series simulation of the subordinator on (0, T], jumps larger than eps.

    Arrivals Gamma_1 < Gamma_2 < ... of a unit-rate Poisson process give
    magnitudes r_i = (Lambda T / (c_alpha alpha Gamma_i))^{1/alpha} until the
    first r_i <= eps; each kept jump gets a uniform time and an atom drawn
    with probability w_j / Lambda. See :mod:`fuzzylevy.rng` for the streams.
    """
    if not (T > 0 and eps > 0):
        raise ValueError("T and eps must be positive")
    report = validate_triplet(tr)
    if not report.ok:
        raise TripletInvalid(report)
    model = tr.model
    if model.total_mass == 0:
        empty = np.zeros(0)
        return Trajectory(report.gamma0, T, eps, empty, empty, np.zeros(0, dtype=np.int64), seed)

    mags = _jump_count_and_magnitudes(model, T, eps, _rng.Stream(seed, _rng.STREAM_ARRIVALS))
    k = mags.size
    times = T * _rng.Stream(seed, _rng.STREAM_TIMES).uniforms(k)
    u = _rng.Stream(seed, _rng.STREAM_ATOMS).uniforms(k)
    cum = np.cumsum(model.weights)
    idx = np.minimum(np.searchsorted(cum, u * model.total_mass, side="right"), len(model.weights) - 1)
    return Trajectory(report.gamma0, float(T), float(eps), times, mags, idx, seed)


def _coefficients(traj: Trajectory, model: LevyModel, mask: np.ndarray) -> np.ndarray:
    return np.bincount(traj.atom_indices[mask], weights=traj.magnitudes[mask], minlength=len(model.atoms))


def state_at(traj: Trajectory, model: LevyModel, t: float, left: bool = False) -> EmbeddedFunction:
    """Path value at t (right-continuous); ``left=True`` gives the left limit."""
    if not 0.0 <= t <= traj.T:
        raise ValueError(f"t={t} outside [0, {traj.T}]")
    mask = traj.times < t if left else traj.times <= t
    coef = _coefficients(traj, model, mask)
    vals = traj.gamma0.values * t + np.tensordot(coef, model.atom_values, axes=1)
    return EmbeddedFunction(model.agrid, model.sgrid, vals)


def increment(traj: Trajectory, model: LevyModel, s: float, t: float) -> EmbeddedFunction:
    """state(t) - state(s) assembled from drift and the jumps in (s, t].

    Summing only the jumps in the window avoids the cancellation a literal
    subtraction of two large states would suffer.
    """
    if not 0.0 <= s <= t <= traj.T:
        raise ValueError("need 0 <= s <= t <= T")
    mask = (traj.times > s) & (traj.times <= t)
    coef = _coefficients(traj, model, mask)
    vals = traj.gamma0.values * (t - s) + np.tensordot(coef, model.atom_values, axes=1)
    return EmbeddedFunction(model.agrid, model.sgrid, vals)


def fuzzy_state(traj: Trajectory, model: LevyModel, t: float) -> FuzzyVector:
    """Fuzzy preimage of the state at t; K-positive for valid triplets."""
    return invert(state_at(traj, model, t))


def jump_sum(traj: Trajectory, model: LevyModel, eps_E: float, t: float):
    """Sum and count of jumps with norm > eps_E strictly before t."""
    if eps_E < traj.eps:
        raise BelowTruncation(f"eps_E={eps_E} is below the simulation truncation {traj.eps}")
    size = traj.magnitudes * model.atom_norms[traj.atom_indices] if len(traj) else np.zeros(0)
    mask = (traj.times < t) & (size > eps_E)
    coef = _coefficients(traj, model, mask)
    vals = np.tensordot(coef, model.atom_values, axes=1)
    return EmbeddedFunction(model.agrid, model.sgrid, vals), int(np.count_nonzero(mask))


@lru_cache(maxsize=64)
def _unit_stable_integral(alpha: float) -> complex:
    """int_0^inf (e^{ix} - 1) x^{-1-alpha} dx.

    [0, 1] by the power series sum_k i^k / (k! (k - alpha)); [1, inf) by
    Fourier-weighted quadrature of x^{-1-alpha} minus the closed-form 1/alpha.
    """
    near = 0j
    k = 1
    term_scale = 1.0
    while True:
        term_scale /= k
        term = (1j**k) * term_scale / (k - alpha)
        near += term
        if abs(term) < 1e-18:
            break
        k += 1
    f = lambda x: x ** (-1.0 - alpha)  # noqa: E731
    opts = dict(wvar=1.0, epsabs=1e-13, limlst=200, full_output=1)
    c, ec = integrate.quad(f, 1.0, np.inf, weight="cos", **opts)[:2]
    s, es = integrate.quad(f, 1.0, np.inf, weight="sin", **opts)[:2]
    err = ec + es
    if not err <= QUAD_TARGET:
        raise QuadratureNonConvergence(err, QUAD_TARGET)
    return near + complex(c, s) - 1.0 / alpha


def stable_exponent(s: float, alpha: float) -> complex:
    """R(s) = int_0^inf (e^{irs} - 1) r^{-1-alpha} dr for alpha in (0, 1).

    Substituting x = r|s| splits the integral at r = 1/|s|.
    """
    if s == 0:
        return 0j
    J = _unit_stable_integral(float(alpha))
    if s < 0:
        J = J.conjugate()
    return abs(s) ** alpha * J


def char_functional(tr: LevyTriplet, ell: DualProbe, t: float) -> complex:
    """E exp(i ell(X_t)) for the regular subordinator (no compensation)."""
    report = validate_triplet(tr)
    if not report.ok:
        raise TripletInvalid(report)
    model = tr.model
    expo = 0j
    for w, y in zip(model.weights, model.atoms):
        expo += w / model.c_alpha * stable_exponent(probe(ell, y), model.alpha)
    expo = t * expo + 1j * t * probe(ell, report.gamma0)
    return complex(np.exp(expo))


@dataclass
class PathReport:
    invariant_failures: list = field(default_factory=list)
    start_ok: bool = True
    cone_failures: list = field(default_factory=list)
    monotonicity_failures: list = field(default_factory=list)
    tv_formula: float = 0.0
    tv_numeric: float = 0.0
    tv_ok: bool = True
    continuity_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.start_ok
            and self.tv_ok
            and not self.invariant_failures
            and not self.cone_failures
            and not self.monotonicity_failures
            and not self.continuity_failures
        )

    def messages(self) -> list:
        out = list(self.invariant_failures)
        if not self.start_ok:
            out.append("state at t=0 is not zero")
        out += [f"state outside cone at t={t!r}" for t in self.cone_failures]
        out += [f"increment outside cone on ({s!r}, {t!r}]" for s, t in self.monotonicity_failures]
        if not self.tv_ok:
            out.append(f"total variation {self.tv_numeric!r} != {self.tv_formula!r}")
        out += [f"not right-continuous at t={t!r}" for t in self.continuity_failures]
        return out


def total_variation(traj: Trajectory, model: LevyModel) -> float:
    """Variation of the path measured piece by piece on the actual states."""
    p = model.p_model
    events = np.unique(np.concatenate([[0.0], traj.times[(traj.times > 0) & (traj.times <= traj.T)], [traj.T]]))
    tv = 0.0
    for a, b in zip(events[:-1], events[1:]):
        tv += lp_norm(state_at(traj, model, b, left=True) - state_at(traj, model, a), p)
    for t in np.unique(traj.times):
        if 0 < t <= traj.T:
            tv += lp_norm(state_at(traj, model, t) - state_at(traj, model, t, left=True), p)
    return tv


def verify_path(traj: Trajectory, model: LevyModel, times, tol: float = 1e-9, tv_rtol: float = 1e-6) -> PathReport:
    """Pathwise checks: start at zero, cone-valued, cone-increasing,
    bounded-variation identity and right-continuity at the sampled times."""
    rep = PathReport()
    p = model.p_model
    times = np.sort(np.asarray(times, dtype=float))
    if np.any((times < 0) | (times > traj.T)):
        raise ValueError("verification times must lie in [0, T]")

    for t in traj.times[traj.magnitudes <= traj.eps]:
        rep.invariant_failures.append(f"jump magnitude not above truncation level at t={float(t)!r}")
    if np.any((traj.times <= 0) | (traj.times > traj.T)):
        rep.invariant_failures.append("jump time outside (0, T]")
    if np.any((traj.atom_indices < 0) | (traj.atom_indices >= len(model.atoms))):
        rep.invariant_failures.append("atom index out of range")
        return rep

    rep.start_ok = bool(np.all(state_at(traj, model, 0.0).values == 0.0))

    for t in times:
        if not in_embedded_cone(state_at(traj, model, t), model.cone, tol):
            rep.cone_failures.append(float(t))
    for s, t in zip(times[:-1], times[1:]):
        if t > s and not in_embedded_cone(increment(traj, model, s, t), model.cone, tol):
            rep.monotonicity_failures.append((float(s), float(t)))

    g_norm = lp_norm(traj.gamma0, p)
    rep.tv_formula = float(traj.T * g_norm + np.sum(traj.magnitudes * model.atom_norms[traj.atom_indices]))
    rep.tv_numeric = total_variation(traj, model)
    rep.tv_ok = abs(rep.tv_numeric - rep.tv_formula) <= tv_rtol * max(abs(rep.tv_formula), 1e-300)

    for t in times:
        if t >= traj.T:
            continue
        later = traj.times[traj.times > t]
        gap = (later[0] if later.size else traj.T) - t
        delta = 0.5 * min(gap, traj.T - t, 1e-3 * traj.T)
        d = lp_distance(state_at(traj, model, t), state_at(traj, model, t + delta), p)
        scale = max(1.0, lp_norm(state_at(traj, model, t), p))
        if d > g_norm * delta * (1 + 1e-9) + 1e-12 * scale:
            rep.continuity_failures.append(float(t))
    return rep
