"""Run configuration: a JSON document checked against a versioned schema."""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import jsonschema
import numpy as np

from .embedding import EmbeddedFunction, SphereGrid, embed
from .exceptions import ConfigError, FuzzyLevyError
from .fuzzy import AlphaGrid, FuzzyVector, crisp
from .geometry import ConeSpec, cone_is_proper
from .levy import LevyModel, LevyTriplet, pettis_centering

SCHEMA_VERSION = 1

_point = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_fuzzy = {
    "type": "object",
    "oneOf": [{"required": ["point"]}, {"required": ["cuts"]}],
    "properties": {
        "point": _point,
        "cuts": {"type": "array", "items": {"type": "array", "items": _point, "minItems": 1}, "minItems": 1},
        "alphas": {"type": "array", "items": {"type": "number"}},
    },
    "additionalProperties": False,
}

SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["schema_version", "cone", "alpha_grid", "sphere_n", "model", "gamma", "sim"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "cone": {
            "type": "object",
            "required": ["generators"],
            "additionalProperties": False,
            "properties": {
                "generators": {"type": "array", "items": _point, "minItems": 1},
                "normals": {"type": "array", "items": _point, "minItems": 1},
            },
        },
        "alpha_grid": {
            "type": "object",
            "oneOf": [{"required": ["levels"]}, {"required": ["uniform"]}],
            "additionalProperties": False,
            "properties": {
                "levels": {"type": "array", "items": {"type": "number"}, "minItems": 2},
                "uniform": {"type": "integer", "minimum": 2},
            },
        },
        "sphere_n": {"type": "integer", "minimum": 8, "multipleOf": 2},
        "p": {"type": "number", "minimum": 1},
        "model": {
            "type": "object",
            "required": ["alpha", "atoms"],
            "additionalProperties": False,
            "properties": {
                "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "c_alpha": {"type": "number", "exclusiveMinimum": 0},
                "atoms": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["fuzzy", "weight"],
                        "additionalProperties": False,
                        "properties": {"fuzzy": _fuzzy, "weight": {"type": "number", "exclusiveMinimum": 0}},
                    },
                },
            },
        },
        "gamma": {
            "type": "object",
            "required": ["mode"],
            "oneOf": [
                {
                    "properties": {"mode": {"const": "explicit"}, "values": {"type": "array"}},
                    "required": ["values"],
                },
                {
                    "properties": {"mode": {"const": "centering_plus"}, "element": _fuzzy, "delta": {"type": "number", "minimum": 0}},
                },
            ],
            "properties": {"mode": {"enum": ["explicit", "centering_plus"]}},
        },
        "sim": {
            "type": "object",
            "required": ["T", "eps", "trajectories", "master_seed"],
            "additionalProperties": False,
            "properties": {
                "T": {"type": "number", "exclusiveMinimum": 0},
                "eps": {"type": "number", "exclusiveMinimum": 0},
                "trajectories": {"type": "integer", "minimum": 0},
                "master_seed": {"type": "integer", "minimum": 0, "maximum": 18446744073709551615},
            },
        },
        "verify": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "significance": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "times": {"type": "integer", "minimum": 1},
                "eps_levels": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
                "probes": {"type": "integer", "minimum": 0},
                "probe_seed": {"type": "integer", "minimum": 0, "maximum": 18446744073709551615},
                "tol": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "outputs": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "directory": {"type": "string"},
                "exports": {
                    "type": "array",
                    "items": {"enum": ["trajectories", "gamma0", "manifest", "stats"]},
                    "uniqueItems": True,
                },
            },
        },
    },
}

DEFAULT_VERIFY = {"significance": 0.01, "times": 50, "eps_levels": [], "probes": 0, "probe_seed": 0, "tol": 1e-9}
DEFAULT_OUTPUTS = {"directory": "out", "exports": ["trajectories", "gamma0", "manifest", "stats"]}


@dataclass(frozen=True)
class RunConfig:
    raw: dict
    cone: ConeSpec
    agrid: AlphaGrid
    sgrid: SphereGrid
    p: float
    model: LevyModel
    triplet: LevyTriplet
    T: float
    eps: float
    trajectories: int
    master_seed: int
    verify: dict
    outputs: dict

    @property
    def digest(self) -> str:
        """sha256 of the canonical JSON form of the effective config."""
        text = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def with_seed(self, seed: int) -> "RunConfig":
        raw = copy.deepcopy(self.raw)
        raw["sim"]["master_seed"] = int(seed)
        return build_config(raw)


def _fuzzy_from(lit: dict, agrid: AlphaGrid, where: str) -> FuzzyVector:
    try:
        if "point" in lit:
            return crisp(lit["point"], agrid)
        return FuzzyVector.from_literal(lit, agrid)
    except (FuzzyLevyError, ValueError) as e:
        raise ConfigError(f"{where}: {e}") from e


def build_config(raw: dict) -> RunConfig:
    """Validate a parsed document and build every domain object it names."""
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as e:
        field = "/".join(str(x) for x in e.absolute_path) or "<root>"
        raise ConfigError(f"field {field}: {e.message}") from e

    try:
        cone_raw = raw["cone"]
        if "normals" in cone_raw:
            cone = ConeSpec(cone_raw["normals"], cone_raw["generators"])
        else:
            cone = ConeSpec.from_generators(cone_raw["generators"], require_proper=False)
    except ValueError as e:
        raise ConfigError(f"field cone: {e}") from e
    if not cone_is_proper(cone):
        raise ConfigError("field cone: cone is not proper")

    ag = raw["alpha_grid"]
    try:
        agrid = AlphaGrid(tuple(ag["levels"])) if "levels" in ag else AlphaGrid.uniform(ag["uniform"])
        sgrid = SphereGrid(raw["sphere_n"])
    except ValueError as e:
        raise ConfigError(f"grid: {e}") from e
    p = float(raw.get("p", 2.0))

    m = raw["model"]
    atoms = [_fuzzy_from(a["fuzzy"], agrid, f"field model/atoms/{k}/fuzzy") for k, a in enumerate(m["atoms"])]
    weights = [a["weight"] for a in m["atoms"]]
    try:
        if atoms:
            model = LevyModel.from_fuzzy(m["alpha"], atoms, weights, cone, sgrid, m.get("c_alpha", 1.0), p)
        else:
            model = LevyModel(m["alpha"], [], [], cone, agrid, sgrid, m.get("c_alpha", 1.0), p)
    except ValueError as e:
        raise ConfigError(f"field model: {e}") from e

    g = raw["gamma"]
    if g["mode"] == "explicit":
        try:
            gamma = EmbeddedFunction(agrid, sgrid, np.asarray(g["values"], dtype=float))
        except ValueError as e:
            raise ConfigError(f"field gamma/values: {e}") from e
    else:
        gamma = pettis_centering(model)
        if "element" in g and g.get("delta", 0.0):
            el = embed(_fuzzy_from(g["element"], agrid, "field gamma/element"), sgrid)
            gamma = gamma + float(g["delta"]) * el
    triplet = LevyTriplet(model, gamma)

    s = raw["sim"]
    verify = {**DEFAULT_VERIFY, **raw.get("verify", {})}
    outputs = {**DEFAULT_OUTPUTS, **raw.get("outputs", {})}
    return RunConfig(
        raw=raw,
        cone=cone,
        agrid=agrid,
        sgrid=sgrid,
        p=p,
        model=model,
        triplet=triplet,
        T=float(s["T"]),
        eps=float(s["eps"]),
        trajectories=int(s["trajectories"]),
        master_seed=int(s["master_seed"]),
        verify=verify,
        outputs=outputs,
    )


def load_config(path) -> RunConfig:
    """Read and build a config file; every problem surfaces as ConfigError."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from e
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e
    return build_config(raw)
