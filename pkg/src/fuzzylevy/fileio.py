"""Flat-file exports: trajectory CSVs, metadata sidecars, manifests, polygon dumps.

All decimals are written with 17 significant digits so that a re-read value
is bit-identical to the one written.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .embedding import EmbeddedFunction, _fmt, read_csv
from .fuzzy import FuzzyVector
from .levy import LevyModel, Trajectory

TRAJECTORY_HEADER = ("time", "magnitude", "atom_index")


def trajectory_name(index: int) -> str:
    return f"trajectory_{index:06d}.csv"


def write_trajectory(traj: Trajectory, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_HEADER)
        for t, r, j in zip(traj.times, traj.magnitudes, traj.atom_indices):
            w.writerow((_fmt(t), _fmt(r), int(j)))


def read_jumps(path):
    """(times, magnitudes, atom_indices) arrays from a trajectory CSV."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != TRAJECTORY_HEADER:
        raise ValueError(f"{path}: expected header {','.join(TRAJECTORY_HEADER)}")
    body = rows[1:]
    try:
        times = np.array([float(r[0]) for r in body])
        mags = np.array([float(r[1]) for r in body])
        idx = np.array([int(r[2]) for r in body], dtype=np.int64)
    except (IndexError, ValueError) as e:
        raise ValueError(f"{path}: malformed row: {e}") from e
    return times, mags, idx


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_suffix(".json")


def write_sidecar(traj: Trajectory, model: LevyModel, path, gamma0_ref: str) -> None:
    meta = {
        "alpha": model.alpha,
        "c_alpha": model.c_alpha,
        "T": traj.T,
        "eps": traj.eps,
        "seed": traj.seed,
        "total_mass": model.total_mass,
        "gamma0": gamma0_ref,
        "jumps": len(traj),
    }
    Path(path).write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")


def read_trajectory(path, gamma0: EmbeddedFunction | None = None) -> Trajectory:
    """Trajectory from a CSV and its sidecar; gamma0 is read from the
    referenced CSV unless supplied."""
    path = Path(path)
    meta = json.loads(sidecar_path(path).read_text())
    if gamma0 is None:
        gamma0 = read_csv(path.parent / meta["gamma0"])
    times, mags, idx = read_jumps(path)
    return Trajectory(gamma0, float(meta["T"]), float(meta["eps"]), times, mags, idx, int(meta["seed"]))


def write_polygons(x: FuzzyVector, path) -> None:
    """One row per vertex: level index, alpha, vertex index, x, y."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("level", "alpha", "vertex", "x", "y"))
        for i, (a, cut) in enumerate(zip(x.grid.levels, x.cuts)):
            for k, (px, py) in enumerate(cut.vertices):
                w.writerow((i, _fmt(a), k, _fmt(px), _fmt(py)))


def read_polygons(path) -> dict:
    """{level index: (alpha, vertex array)} from a polygon dump."""
    out: dict = {}
    with Path(path).open(newline="") as fh:
        r = csv.reader(fh)
        next(r)
        for lv, a, _, px, py in r:
            alpha, pts = out.setdefault(int(lv), (float(a), []))
            pts.append((float(px), float(py)))
    return {k: (a, np.array(p)) for k, (a, p) in out.items()}


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def write_manifest(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def write_stats(results, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("test", "statistic", "threshold", "passed"))
        for r in results:
            w.writerow((r.name, _fmt(r.statistic), _fmt(r.threshold), "true" if r.passed else "false"))
