"""Command-line front end.

    fuzzylevy validate --config run.json
    fuzzylevy simulate --config run.json [--out DIR] [--jobs N] [--seed U64]
    fuzzylevy verify   --config run.json [--out DIR] [--jobs N] [--times ...] [FILE ...]
    fuzzylevy snapshot --config run.json --times t1,t2 [--out DIR] FILE [FILE ...]

Exit codes: 0 ok, 1 domain failure, 2 usage or schema error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import fileio
from . import rng as _rng
from .config import SCHEMA_VERSION, RunConfig, load_config
from .embedding import DualProbe, _fmt, lp_norm, write_csv
from .exceptions import ConfigError, InversionFailed, TripletInvalid
from .fuzzy import is_K_positive
from .levy import bochner_norm_integral, fuzzy_state, state_at, validate_triplet, verify_path
from .stats import path_statistics, simulate_ensemble

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

PROBE_STREAM = 3


class UsageError(Exception):
    pass


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _times(text: str) -> list:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad time list: {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty time list")
    return vals


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fuzzylevy", description="K-positive fuzzy Levy subordinators")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, files: str | None = None):
        p.add_argument("--config", required=True, metavar="PATH", help="JSON run configuration")
        p.add_argument("--out", metavar="DIR", help="output directory (default: outputs.directory)")
        p.add_argument("--jobs", type=_positive_int, default=1, metavar="N", help="worker processes")
        p.add_argument("--seed", type=_u64, metavar="U64", help="override sim.master_seed")
        p.add_argument("--times", type=_times, metavar="t1,t2,...", help="comma-separated times in [0, T]")
        if files:
            p.add_argument("files", nargs="*", metavar="FILE", help=files)

    common(sub.add_parser("validate", help="check the generating triplet"))
    common(sub.add_parser("simulate", help="simulate trajectories and write a manifest"))
    common(sub.add_parser("verify", help="pathwise and statistical checks"), "trajectory CSVs (default: all in --out)")
    common(sub.add_parser("snapshot", help="materialize fuzzy states at given times"), "trajectory CSVs")
    return ap


def _out_dir(args, cfg: RunConfig) -> Path:
    return Path(args.out if args.out else cfg.outputs["directory"])


def _fmt_report(cfg: RunConfig) -> tuple:
    rep = validate_triplet(cfg.triplet, cfg.verify["tol"])
    lines = [
        rep.summary(),
        f"total angular mass: {rep.total_mass!r}",
        f"bochner integral: {bochner_norm_integral(cfg.model)!r}",
        f"gamma0 norm: {lp_norm(rep.gamma0, cfg.p)!r} ({'in cone' if rep.c_ok else 'outside cone'})",
    ]
    return rep, lines


def cmd_validate(args, cfg: RunConfig) -> int:
    rep, lines = _fmt_report(cfg)
    print("\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_DOMAIN


def cmd_simulate(args, cfg: RunConfig) -> int:
    rep, lines = _fmt_report(cfg)
    if not rep.ok:
        print("\n".join(lines), file=sys.stderr)
        return EXIT_DOMAIN
    out = _out_dir(args, cfg)
    out.mkdir(parents=True, exist_ok=True)
    exports = set(cfg.outputs["exports"])
    trajs = simulate_ensemble(cfg.triplet, cfg.T, cfg.eps, cfg.master_seed, cfg.trajectories, args.jobs)

    write_csv(rep.gamma0, out / "gamma0.csv")
    entries = []
    for k, traj in enumerate(trajs):
        name = fileio.trajectory_name(k)
        entry = {"index": k, "seed": traj.seed, "jumps": len(traj)}
        if "trajectories" in exports:
            fileio.write_trajectory(traj, out / name)
            fileio.write_sidecar(traj, cfg.model, fileio.sidecar_path(out / name), "gamma0.csv")
            entry["file"] = name
            entry["sha256"] = fileio.sha256_file(out / name)
        entries.append(entry)
    if "manifest" in exports:
        fileio.write_manifest(
            out / "manifest.json",
            {
                "schema_version": SCHEMA_VERSION,
                "config_sha256": cfg.digest,
                "parameters": {
                    "alpha": cfg.model.alpha,
                    "c_alpha": cfg.model.c_alpha,
                    "T": cfg.T,
                    "eps": cfg.eps,
                    "master_seed": cfg.master_seed,
                    "total_mass": cfg.model.total_mass,
                    "p": cfg.p,
                },
                "gamma0": {"file": "gamma0.csv", "sha256": fileio.sha256_file(out / "gamma0.csv")},
                "trajectories": entries,
            },
        )
    total = sum(len(t) for t in trajs)
    print(f"wrote {len(trajs)} trajectories ({total} jumps) to {out}")
    return EXIT_OK


def _load_paths(args, cfg: RunConfig) -> list:
    if args.files:
        paths = [Path(f) for f in args.files]
    else:
        paths = sorted(_out_dir(args, cfg).glob("trajectory_*.csv"))
    if not paths:
        raise UsageError("no trajectories")
    trajs = []
    for path in paths:
        try:
            traj = fileio.read_trajectory(path)
        except (OSError, ValueError, KeyError) as e:
            raise UsageError(f"{path}: {e}") from e
        if traj.gamma0.agrid != cfg.agrid or traj.gamma0.sgrid != cfg.sgrid:
            raise UsageError(f"{path}: grid does not match the config")
        if traj.T != cfg.T or traj.eps != cfg.eps:
            raise UsageError(f"{path}: T or eps does not match the config")
        trajs.append(traj)
    return list(zip(paths, trajs))


def _verify_one(job):
    traj, model, times, tol = job
    return verify_path(traj, model, times, tol)


def _probes(cfg: RunConfig) -> list:
    n = cfg.verify["probes"]
    shape = (len(cfg.agrid), cfg.sgrid.n)
    stream = _rng.Stream(cfg.verify["probe_seed"], PROBE_STREAM)
    out = []
    for _ in range(n):
        w = 2.0 * stream.uniforms(shape[0] * shape[1]).reshape(shape) - 1.0
        out.append(DualProbe(cfg.agrid, cfg.sgrid, w))
    return out


def cmd_verify(args, cfg: RunConfig) -> int:
    pairs = _load_paths(args, cfg)
    times = args.times if args.times else np.linspace(0.0, cfg.T, cfg.verify["times"]).tolist()
    if any(not 0.0 <= t <= cfg.T for t in times):
        raise UsageError(f"times must lie in [0, {cfg.T}]")
    jobs = [(traj, cfg.model, times, cfg.verify["tol"]) for _, traj in pairs]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_verify_one, jobs, chunksize=max(1, len(jobs) // (4 * args.jobs))))
    else:
        reports = [_verify_one(j) for j in jobs]

    failed = 0
    for (path, _), rep in zip(pairs, reports):
        if not rep.ok:
            failed += 1
            for msg in rep.messages():
                print(f"{path}: {msg}")
    print(f"pathwise: {len(pairs) - failed}/{len(pairs)} trajectories pass")

    results = []
    if len(pairs) >= 2:
        trajs = [t for _, t in pairs]
        results = path_statistics(
            cfg.triplet, trajs, cfg.verify["eps_levels"], _probes(cfg), cfg.verify["significance"]
        )
        for r in results:
            print(f"{r.name}: statistic={r.statistic:.6g} threshold={r.threshold:.6g} {'PASS' if r.passed else 'FAIL'}")
    if "stats" in cfg.outputs["exports"]:
        out = _out_dir(args, cfg)
        out.mkdir(parents=True, exist_ok=True)
        fileio.write_stats(results, out / "stats.csv")
    return EXIT_DOMAIN if failed else EXIT_OK


def cmd_snapshot(args, cfg: RunConfig) -> int:
    if not args.files:
        raise UsageError("snapshot needs at least one trajectory file")
    if not args.times:
        raise UsageError("snapshot needs --times")
    if any(not 0.0 <= t <= cfg.T for t in args.times):
        raise UsageError(f"times must lie in [0, {cfg.T}]")
    pairs = _load_paths(args, cfg)
    root = _out_dir(args, cfg) / "snapshots"
    status = EXIT_OK
    for path, traj in pairs:
        d = root / path.stem
        d.mkdir(parents=True, exist_ok=True)
        rows = []
        for k, t in enumerate(args.times):
            state = state_at(traj, cfg.model, t)
            write_csv(state, d / f"state_{k:03d}.csv")
            try:
                x = fuzzy_state(traj, cfg.model, t)
            except InversionFailed as e:
                print(f"{path}: inversion failed at t={t!r}: {e}", file=sys.stderr)
                status = EXIT_DOMAIN
                continue
            fileio.write_polygons(x, d / f"polygons_{k:03d}.csv")
            ok = is_K_positive(x, cfg.cone, cfg.verify["tol"])
            if not ok:
                print(f"{path}: fuzzy state at t={t!r} is not K-positive", file=sys.stderr)
                status = EXIT_DOMAIN
            rows.append((k, t, ok))
        with (d / "index.csv").open("w") as fh:
            fh.write("index,time,k_positive\n")
            for k, t, ok in rows:
                fh.write(f"{k},{_fmt(t)},{'true' if ok else 'false'}\n")
        print(f"{path}: {len(rows)} snapshots written to {d}")
    return status


COMMANDS = {"validate": cmd_validate, "simulate": cmd_simulate, "verify": cmd_verify, "snapshot": cmd_snapshot}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = cfg.with_seed(args.seed)
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except TripletInvalid as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
