"""JSON loading and validation for systems, closed sets and cell orders."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from .builders import KINDS, SpecError, SystemSpec, build
from .closedset import STATUS_CODES, ClosedTower
from .extremal import CellOrder, OrderError
from .tower import TowerSystem

FORMAT = "cantor-sections/1"

_INTS = {"type": "array", "items": {"type": "integer", "minimum": 0}}

SYSTEM_SCHEMA = {
    "$defs": {
        "system": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "format": {"const": FORMAT},
                "kind": {"enum": list(KINDS)},
                "permutation": {**_INTS, "minItems": 1},
                "alphabet": {"type": "array", "items": {"type": "string", "minLength": 1},
                             "minItems": 1},
                "forbidden": {"type": "array", "items": {"type": "string"}},
                "bases": {"type": "array", "items": {"type": "integer", "minimum": 2},
                          "minItems": 1},
                "inner": {"$ref": "#/$defs/system"},
                "parts": {"type": "array", "items": {"$ref": "#/$defs/system"},
                          "minItems": 1},
            },
            "additionalProperties": False,
        }
    },
    "$ref": "#/$defs/system",
}

_EXPLICIT = {
    "type": "object",
    "required": ["levels"],
    "properties": {
        "format": {"const": FORMAT},
        "type": {"const": "closed_set"},
        "levels": {
            "type": "array", "minItems": 1,
            "items": {"type": "array", "items": {
                "type": "array", "minItems": 2, "maxItems": 2,
                "prefixItems": [{"type": "integer", "minimum": 0},
                                {"enum": ["IN", "PARTIAL", "OUT"]}]}}},
    },
}

_GENERATORS = {
    "all": {"properties": {"generator": {"const": "all"}}},
    "cells": {"required": ["depth", "cells"],
              "properties": {"depth": {"type": "integer", "minimum": 0},
                             "cells": {**_INTS, "minItems": 1}}},
    "branches": {"required": ["depth", "cells"],
                 "properties": {"depth": {"type": "integer", "minimum": 0},
                                "cells": {**_INTS, "minItems": 1}}},
    "points": {"required": ["points"],
               "properties": {"points": {"type": "array", "minItems": 1,
                                         "items": {"type": "string"}}}},
    "union": {"required": ["parts"],
              "properties": {"parts": {"type": "array", "minItems": 1,
                                       "items": {"type": "object"}}}},
}

ORDER_SCHEMA = {
    "type": "object",
    "required": ["levels"],
    "properties": {
        "format": {"const": FORMAT},
        "type": {"const": "cell_order"},
        "levels": {"type": "array", "minItems": 1, "items": _INTS},
    },
}


class InputError(ValueError):
    """Bad input document; ``path`` is a JSON pointer into it."""

    def __init__(self, message: str, path: str = "/"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


def _pointer(parts, prefix: str = "") -> str:
    return prefix + "/" + "/".join(str(p) for p in parts) if parts else prefix or "/"


def _validate(obj: Any, schema: dict, prefix: str = "") -> None:
    err = jsonschema.exceptions.best_match(
        jsonschema.Draft202012Validator(schema).iter_errors(obj))
    if err is not None:
        raise InputError(err.message, _pointer(err.absolute_path, prefix))


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc.msg} (line {exc.lineno})") from exc


def load_system(obj: Any) -> TowerSystem:
    _validate(obj, SYSTEM_SCHEMA)
    obj = {k: v for k, v in obj.items() if k != "format"}
    try:
        return build(SystemSpec.from_json(obj))
    except SpecError as exc:
        raise InputError(str(exc).split(": ", 1)[-1], exc.path or "/") from exc


def load_closed_set(system: TowerSystem, obj: Any, prefix: str = "") -> ClosedTower:
    if not isinstance(obj, dict):
        raise InputError("closed set must be an object", prefix or "/")
    if "levels" in obj:
        _validate(obj, _EXPLICIT, prefix)
        levels = []
        for n, lev in enumerate(obj["levels"]):
            size = system.size(n)
            entries = {}
            for i, (c, name) in enumerate(lev):
                if c >= size:
                    raise InputError(f"cell {c} out of range at depth {n}",
                                     f"{prefix}/levels/{n}/{i}/0")
                entries[c] = STATUS_CODES[name]
            levels.append(entries)
        tower = ClosedTower.explicit(system, levels)
        problems = tower.check(len(levels) - 1)
        if problems:
            raise InputError(problems[0], f"{prefix}/levels")
        return tower
    gen = obj.get("generator")
    if gen not in _GENERATORS:
        raise InputError(f"unknown generator {gen!r}", f"{prefix}/generator")
    _validate(obj, {"type": "object", **_GENERATORS[gen]}, prefix)
    if gen == "all":
        return ClosedTower.whole(system)
    if gen in ("cells", "branches"):
        size = system.size(obj["depth"])
        for i, c in enumerate(obj["cells"]):
            if c >= size:
                raise InputError(f"cell {c} out of range", f"{prefix}/cells/{i}")
        if gen == "cells":
            return ClosedTower.from_cells(system, obj["depth"], obj["cells"])
        return ClosedTower.from_paths(system, obj["depth"], obj["cells"])
    if gen == "points":
        for i, name in enumerate(obj["points"]):
            try:
                system.point(name, 0)
            except (KeyError, ValueError, IndexError):
                raise InputError(f"unknown point {name!r}", f"{prefix}/points/{i}")
        return ClosedTower.from_points(system, obj["points"])
    parts = [load_closed_set(system, p, f"{prefix}/parts/{i}")
             for i, p in enumerate(obj["parts"])]
    return ClosedTower.union(*parts)


def load_order(system: TowerSystem, obj: Any) -> CellOrder:
    _validate(obj, ORDER_SCHEMA)
    try:
        return CellOrder.from_json(system, obj)
    except OrderError as exc:
        raise InputError(str(exc), "/levels") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
