"""Experiment configuration: JSON in, validated dataclass out.

Configs are hashed canonically so report filenames identify their inputs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .bounds import BoundParameters
from .errors import ConfigError
from .orbits import WorkLimits
from .places import PlaceSet
from .proj1 import ProjPoint, parse_point
from .ratmap import MapError, MapSystem, map_from_json, parse_map
from .words import Word

DEFAULTS = {
    "pointA": "inf",
    "epsilon": "1/2",
    "depth": 6,
    "precisionBits": 128,
    "nodeCap": 1_000_000,
    "bitCap": 1_000_000,
    "dedupe": True,
    "hminPeriodBound": 2,
    "heightDepth": 12,
}

_KNOWN_KEYS = {
    "system", "point", "pointA", "places", "epsilon", "word", "depth",
    "workLimits", "boundParameters", "precisionBits", "dedupe",
    "hminPeriodBound", "averagedLevel", "heightDepth", "cMode", "seed",
}


@dataclass(frozen=True)
class ExperimentConfig:
    system: MapSystem
    point: ProjPoint
    point_a: ProjPoint
    places: PlaceSet
    epsilon: Fraction
    word: Word
    depth: int
    limits: WorkLimits
    bound_parameters: Optional[BoundParameters]
    precision_bits: int
    dedupe: bool
    hmin_period_bound: int
    averaged_level: Optional[int]
    height_depth: int
    c_mode: str
    seed: int
    raw: dict = field(compare=False, repr=False)

    def canonical_hash(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def _require(cond: bool, message: str):
    if not cond:
        raise ConfigError(message)


def parse_config(obj: dict) -> ExperimentConfig:
    """Validate and normalize a config dict; raises ConfigError on problems."""
    _require(isinstance(obj, dict), "config must be a JSON object")
    unknown = set(obj) - _KNOWN_KEYS
    _require(not unknown, f"unknown config keys: {sorted(unknown)}")
    _require("system" in obj, "config needs a 'system' entry")

    system_obj = obj["system"]
    if isinstance(system_obj, dict):
        entries = system_obj.get("maps")
    else:
        entries = system_obj
    _require(isinstance(entries, list) and entries,
             "'system' must list at least one map")
    maps = []
    for entry in entries:
        try:
            if isinstance(entry, str):
                maps.append(parse_map(entry))
            elif isinstance(entry, dict):
                maps.append(map_from_json(entry))
            else:
                raise ConfigError(f"map entries are strings or objects, got {entry!r}")
        except MapError as exc:
            raise ConfigError(f"invalid map {entry!r}: {exc}") from exc
    try:
        system = MapSystem(maps)
    except MapError as exc:
        raise ConfigError(str(exc)) from exc

    _require("point" in obj, "config needs a 'point' entry")
    try:
        point = parse_point(str(obj["point"]))
        point_a = parse_point(str(obj.get("pointA", DEFAULTS["pointA"])))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid point: {exc}") from exc

    try:
        places = PlaceSet.parse(obj.get("places", ["inf"]))
    except ValueError as exc:
        raise ConfigError(f"invalid places: {exc}") from exc

    try:
        epsilon = Fraction(str(obj.get("epsilon", DEFAULTS["epsilon"])))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid epsilon: {exc}") from exc
    _require(0 < epsilon <= 1, "epsilon must lie in (0, 1]")

    word_obj = obj.get("word", {"letters": [1], "mode": "periodic"})
    if isinstance(word_obj, list):
        word_obj = {"letters": word_obj, "mode": "finite"}
    try:
        word = Word.from_json(word_obj)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"invalid word: {exc}") from exc
    _require(word.max_letter() <= system.k,
             f"word letters exceed the system size {system.k}")

    depth = obj.get("depth", DEFAULTS["depth"])
    _require(isinstance(depth, int) and depth >= 0, "depth must be a nonnegative integer")

    wl = obj.get("workLimits", {})
    _require(isinstance(wl, dict), "workLimits must be an object")
    limits = WorkLimits(node_cap=wl.get("nodeCap", DEFAULTS["nodeCap"]),
                        bit_cap=wl.get("bitCap", DEFAULTS["bitCap"]))
    _require(limits.node_cap > 0 and limits.bit_cap > 0,
             "work limits must be positive")

    params = None
    if "boundParameters" in obj:
        _require(isinstance(obj["boundParameters"], dict),
                 "boundParameters must be an object")
        try:
            params = BoundParameters(**obj["boundParameters"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid boundParameters: {exc}") from exc

    precision = obj.get("precisionBits", DEFAULTS["precisionBits"])
    _require(isinstance(precision, int) and precision >= 16,
             "precisionBits must be an integer >= 16")

    dedupe = obj.get("dedupe", DEFAULTS["dedupe"])
    _require(isinstance(dedupe, bool), "dedupe must be a boolean")

    hmin_bound = obj.get("hminPeriodBound", DEFAULTS["hminPeriodBound"])
    _require(isinstance(hmin_bound, int) and hmin_bound >= 1,
             "hminPeriodBound must be an integer >= 1")

    averaged = obj.get("averagedLevel")
    if averaged is not None:
        _require(isinstance(averaged, int) and averaged >= 0,
                 "averagedLevel must be a nonnegative integer")

    height_depth = obj.get("heightDepth", DEFAULTS["heightDepth"])
    _require(isinstance(height_depth, int) and height_depth >= 1,
             "heightDepth must be a positive integer")

    c_mode = obj.get("cMode", "certified")
    _require(c_mode in ("certified", "empirical"),
             "cMode must be 'certified' or 'empirical'")

    seed = obj.get("seed", 0)
    _require(isinstance(seed, int), "seed must be an integer")

    return ExperimentConfig(
        system=system, point=point, point_a=point_a, places=places,
        epsilon=epsilon, word=word, depth=depth, limits=limits,
        bound_parameters=params, precision_bits=precision, dedupe=dedupe,
        hmin_period_bound=hmin_bound, averaged_level=averaged,
        height_depth=height_depth, c_mode=c_mode, seed=seed, raw=obj)


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(obj)
