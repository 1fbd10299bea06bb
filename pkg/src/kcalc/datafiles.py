"""Bundled JSON data: location, loading, canonical serialization."""

from __future__ import annotations

import json
import os
from functools import lru_cache
from pathlib import Path
from typing import Any

import jsonschema

from .errors import DataError

DATA_ENV = "KCALC_DATA_DIR"
SCHEMA_VERSION = 1

# bundled file -> schema
BUNDLED = {
    "b13_cohomology.json": "cohomology_ring",
    "coefficient_rows.json": "coefficient_rows",
    "dim7_table.json": "dim7_table",
    "flag_catalog.json": "flag_catalog",
    "sphere_theorem_tuples.json": "sphere_theorem_tuples",
}
SCHEMA_DIR = Path(__file__).resolve().parent / "schemas"


def data_dir() -> Path:
    override = os.environ.get(DATA_ENV)
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "data"


def dumps(obj: Any) -> str:
    """Canonical form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_json(path: str | Path) -> Any:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        raise DataError(f"{path}: empty file")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: not valid JSON ({e})") from None


@lru_cache(maxsize=None)
def schema(name: str) -> dict:
    path = SCHEMA_DIR / f"{name}.schema.json"
    if not path.exists():
        raise DataError(f"no schema named {name!r}")
    return json.loads(path.read_text(encoding="utf-8"))


def validate(obj: Any, schema_name: str, where: str = "input") -> Any:
    """Raise DataError naming the offending path and field."""
    v = jsonschema.Draft7Validator(schema(schema_name))
    errors = sorted(v.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        loc = "/".join(str(x) for x in e.absolute_path) or "<root>"
        raise DataError(f"{where}: {loc}: {e.message}")
    return obj


def load_validated(path: str | Path, schema_name: str) -> Any:
    return validate(read_json(path), schema_name, str(path))


def load(name: str) -> Any:
    obj = read_json(data_dir() / name)
    v = obj.get("schema_version") if isinstance(obj, dict) else None
    if v != SCHEMA_VERSION:
        raise DataError(f"{name}: schema_version must be {SCHEMA_VERSION}, got {v!r}")
    if name in BUNDLED:
        validate(obj, BUNDLED[name], name)
    return obj
