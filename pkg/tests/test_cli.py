import copy
import json

import numpy as np
import pytest

from fuzzylevy import fileio
from fuzzylevy.cli import main
from fuzzylevy.embedding import SphereGrid, embed, read_csv
from fuzzylevy.fuzzy import AlphaGrid, crisp

BASE = {
    "schema_version": 1,
    "cone": {"generators": [[1, 0], [0, 1]]},
    "alpha_grid": {"uniform": 3},
    "sphere_n": 16,
    "model": {
        "alpha": 0.5,
        "atoms": [
            {"fuzzy": {"cuts": [[[0.5, 0.5], [2, 0.5], [1, 1.5]], [[0.8, 0.7], [1.5, 0.7], [1, 1.2]], [[1, 0.9]]]}, "weight": 0.6},
            {"fuzzy": {"point": [0.3, 2.0]}, "weight": 0.4},
        ],
    },
    "gamma": {"mode": "centering_plus", "element": {"point": [1, 1]}, "delta": 0.25},
    "sim": {"T": 1.0, "eps": 0.02, "trajectories": 12, "master_seed": 5},
    "verify": {"times": 11, "eps_levels": [0.5], "probes": 1, "probe_seed": 3},
}


def write_config(tmp_path, raw, name="run.json"):
    raw = copy.deepcopy(raw)
    raw.setdefault("outputs", {})["directory"] = str(tmp_path / "out")
    p = tmp_path / name
    p.write_text(json.dumps(raw, indent=1))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out + out.err


def test_validate_ok(tmp_path, capsys):
    code, text = run(capsys, "validate", "--config", write_config(tmp_path, BASE))
    assert code == 0
    assert "(a) PASS (b) PASS (c) PASS" in text
    assert "bochner integral" in text and "in cone" in text


def test_validate_atom_outside_cone(tmp_path, capsys):
    raw = copy.deepcopy(BASE)
    raw["model"]["atoms"].append({"fuzzy": {"point": [-1.0, 0.5]}, "weight": 0.1})
    code, text = run(capsys, "validate", "--config", write_config(tmp_path, raw))
    assert code == 1
    assert "(b) FAIL atom #2" in text
    code, _ = run(capsys, "simulate", "--config", write_config(tmp_path, raw))
    assert code == 1


def test_malformed_config(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"schema_version": 1,\n "cone": [}')
    code, text = run(capsys, "validate", "--config", str(p))
    assert code == 2 and "line 2" in text
    raw = copy.deepcopy(BASE)
    raw["sim"]["T"] = "one"
    code, text = run(capsys, "validate", "--config", write_config(tmp_path, raw))
    assert code == 2 and "field sim/T" in text


def test_usage_errors(tmp_path, capsys):
    cfg = write_config(tmp_path, BASE)
    with pytest.raises(SystemExit) as ei:
        main(["simulate", "--config", cfg, "--seed", "-3"])
    assert ei.value.code == 2
    with pytest.raises(SystemExit) as ei:
        main(["frobnicate"])
    assert ei.value.code == 2
    code, text = run(capsys, "snapshot", "--config", cfg, "--times", "0.5")
    assert code == 2


def test_simulate_is_byte_identical(tmp_path, capsys):
    cfg = write_config(tmp_path, BASE)
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "simulate", "--config", cfg, "--out", str(a))[0] == 0
    assert run(capsys, "simulate", "--config", cfg, "--out", str(b), "--jobs", "2")[0] == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    assert len([n for n in names if n.endswith(".csv") and n.startswith("trajectory_")]) == 12
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes(), n
    man = json.loads((a / "manifest.json").read_text())
    assert man["schema_version"] == 1
    for e in man["trajectories"]:
        assert e["sha256"] == fileio.sha256_file(a / e["file"])
    # seed override changes the run
    c = tmp_path / "c"
    run(capsys, "simulate", "--config", cfg, "--out", str(c), "--seed", "0x10")
    assert (c / "manifest.json").read_bytes() != (a / "manifest.json").read_bytes()


def test_zero_mass_gives_empty_trajectory(tmp_path, capsys):
    raw = copy.deepcopy(BASE)
    raw["model"]["atoms"] = []
    raw["sim"]["trajectories"] = 1
    cfg = write_config(tmp_path, raw)
    assert run(capsys, "simulate", "--config", cfg)[0] == 0
    lines = (tmp_path / "out" / "trajectory_000000.csv").read_text().splitlines()
    assert lines == ["time,magnitude,atom_index"]


def test_verify_fresh_and_tampered(tmp_path, capsys):
    cfg = write_config(tmp_path, BASE)
    out = tmp_path / "out"
    run(capsys, "simulate", "--config", cfg)
    code, text = run(capsys, "verify", "--config", cfg, "--jobs", "2")
    assert code == 0, text
    assert "12/12 trajectories pass" in text
    stats = (out / "stats.csv").read_text().splitlines()
    assert stats[0] == "test,statistic,threshold,passed" and len(stats) > 4

    victim = out / "trajectory_000003.csv"
    rows = victim.read_text().splitlines()
    assert len(rows) > 1
    t, mag, idx = rows[1].split(",")
    rows[1] = ",".join([t, "-" + mag, idx])
    victim.write_text("\n".join(rows) + "\n")
    code, text = run(capsys, "verify", "--config", cfg, str(victim))
    assert code == 1
    flagged = [ln for ln in text.splitlines() if ln.startswith(str(victim))]
    assert any("outside cone" in ln for ln in flagged)
    assert any(f"at t={float(t)!r}" in ln for ln in flagged)


def test_verify_without_trajectories(tmp_path, capsys):
    cfg = write_config(tmp_path, BASE)
    code, text = run(capsys, "verify", "--config", cfg)
    assert code == 2 and "no trajectories" in text


def test_snapshot_start_and_pure_drift(tmp_path, capsys):
    raw = copy.deepcopy(BASE)
    raw["model"]["atoms"] = []
    raw["gamma"] = {"mode": "centering_plus", "element": {"point": [1.0, 2.0]}, "delta": 1.0}
    raw["sim"]["trajectories"] = 1
    cfg = write_config(tmp_path, raw)
    run(capsys, "simulate", "--config", cfg)
    traj = str(tmp_path / "out" / "trajectory_000000.csv")
    code, text = run(capsys, "snapshot", "--config", cfg, "--times", "0,1", traj)
    assert code == 0, text
    d = tmp_path / "out" / "snapshots" / "trajectory_000000"
    s0, s1 = read_csv(d / "state_000.csv"), read_csv(d / "state_001.csv")
    assert np.all(s0.values == 0.0)
    assert s1 == read_csv(tmp_path / "out" / "gamma0.csv")
    assert s1.allclose(embed(crisp((1, 2), AlphaGrid.uniform(3)), SphereGrid(16)), 1e-12)
    polys = fileio.read_polygons(d / "polygons_000.csv")
    assert all(np.array_equal(v, [[0.0, 0.0]]) for _, v in polys.values())
    assert (d / "index.csv").read_text().splitlines()[1:] == ["0,0,true", "1,1,true"]


def test_snapshot_random_path_recheck(tmp_path, capsys):
    cfg = write_config(tmp_path, BASE)
    run(capsys, "simulate", "--config", cfg)
    traj = str(tmp_path / "out" / "trajectory_000000.csv")
    times = ",".join(str(t) for t in np.linspace(0, 1, 10))
    code, text = run(capsys, "snapshot", "--config", cfg, "--times", times, traj)
    assert code == 0, text
    idx = (tmp_path / "out" / "snapshots" / "trajectory_000000" / "index.csv").read_text().splitlines()[1:]
    assert len(idx) == 10 and all(r.endswith(",true") for r in idx)
    code, _ = run(capsys, "snapshot", "--config", cfg, "--times", "2.0", traj)
    assert code == 2
