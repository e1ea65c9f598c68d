import copy
import json

import numpy as np
import pytest

from fuzzylevy.config import build_config, load_config
from fuzzylevy.exceptions import ConfigError
from fuzzylevy.levy import pettis_centering, validate_triplet

BASE = {
    "schema_version": 1,
    "cone": {"generators": [[1, 0], [0, 1]]},
    "alpha_grid": {"uniform": 3},
    "sphere_n": 16,
    "model": {"alpha": 0.5, "atoms": [{"fuzzy": {"point": [1, 1]}, "weight": 1.0}]},
    "gamma": {"mode": "centering_plus"},
    "sim": {"T": 1.0, "eps": 0.1, "trajectories": 2, "master_seed": 1},
}


def cfg(**patch):
    raw = copy.deepcopy(BASE)
    for path, value in patch.items():
        node = raw
        keys = path.split("__")
        for k in keys[:-1]:
            node = node[k]
        node[keys[-1]] = value
    return raw


def test_minimal_config_builds_with_defaults():
    c = build_config(cfg())
    assert c.p == 2.0 and c.verify["significance"] == 0.01
    assert c.outputs["directory"] == "out"
    assert c.triplet.gamma == pettis_centering(c.model)
    assert validate_triplet(c.triplet).ok


def test_atoms_are_normalized():
    c = build_config(cfg(model__atoms=[{"fuzzy": {"point": [3, 4]}, "weight": 2.0}]))
    assert c.model.atom_norms == pytest.approx([1.0])
    assert c.model.total_mass == 2.0


@pytest.mark.parametrize(
    "patch, field",
    [
        ({"sphere_n": 15}, "sphere_n"),
        ({"model__alpha": 1.0}, "model/alpha"),
        ({"sim__master_seed": -1}, "sim/master_seed"),
        ({"model__atoms": [{"fuzzy": {"point": [1]}, "weight": 1}]}, "model/atoms/0/fuzzy"),
        ({"model__atoms": [{"fuzzy": {"point": [1, 1]}, "weight": 0}]}, "model/atoms/0/weight"),
        ({"schema_version": 2}, "schema_version"),
        ({"bogus": 1}, "<root>"),
    ],
)
def test_schema_errors_name_the_field(patch, field):
    with pytest.raises(ConfigError, match=f"field {field}"):
        build_config(cfg(**patch))


def test_semantic_errors():
    with pytest.raises(ConfigError, match="cone"):
        build_config(cfg(cone={"generators": [[1, 0], [-1, 0]]}))
    with pytest.raises(ConfigError, match="model/atoms/0/fuzzy"):
        build_config(cfg(model__atoms=[{"fuzzy": {"cuts": [[[0, 0]], [[5, 5]], [[0, 0]]]}, "weight": 1}]))
    with pytest.raises(ConfigError, match="gamma/values"):
        build_config(cfg(gamma={"mode": "explicit", "values": [[0.0] * 3]}))
    with pytest.raises(ConfigError, match="model"):
        # cone normals not on an 8-direction grid
        build_config(cfg(sphere_n=8, cone={"generators": [[1, 0], [1, 2]]}))


def test_json_syntax_error_has_line_and_column(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "schema_version": 1,\n  "cone": ,\n}')
    with pytest.raises(ConfigError, match="line 3 column 11"):
        load_config(p)
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")


def test_explicit_gamma_and_seed_override(tmp_path):
    raw = cfg(gamma={"mode": "explicit", "values": np.ones((3, 16)).tolist()})
    p = tmp_path / "c.json"
    p.write_text(json.dumps(raw))
    c = load_config(p)
    assert np.all(c.triplet.gamma.values == 1.0)
    d = c.with_seed(99)
    assert d.master_seed == 99 and c.master_seed == 1
    assert d.digest != c.digest
    assert load_config(p).digest == c.digest
