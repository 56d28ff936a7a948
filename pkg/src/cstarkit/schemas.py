"""JSON schemas for every CLI input file and for the emitted report.

Validation goes through :mod:`jsonschema` (draft 2020-12); a violation is
reported with the JSON pointer of the offending value.
"""

from __future__ import annotations

import json

from jsonschema import Draft202012Validator

from .errors import InputError

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_BLOCKS = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}

ELEMENT = {
    "type": "object",
    "required": ["blocks", "data"],
    "properties": {
        "blocks": _BLOCKS,
        "data": {"type": "array", "items": {"type": "array", "items": {"type": "array", "items": _COMPLEX}}},
    },
    "additionalProperties": False,
}

ALGEBRA = {
    "oneOf": [
        {"type": "string", "pattern": r"^\s*(C\d+|M\d+)(\s*\+\s*(C\d+|M\d+))*\s*$"},
        {
            "type": "object",
            "required": ["blocks"],
            "properties": {"blocks": _BLOCKS, "name": {"type": "string"}},
            "additionalProperties": False,
        },
    ]
}

METRIC_TABLE = {
    "type": "object",
    "required": ["algebra", "points", "dist"],
    "properties": {
        "algebra": {"$ref": "#/$defs/algebra"},
        "points": {"type": "array", "items": {"type": "string", "minLength": 1}, "minItems": 1},
        "dist": {
            "type": "object",
            "propertyNames": {"pattern": r"^[^|]+\|[^|]+$"},
            "additionalProperties": {"$ref": "#/$defs/element"},
        },
    },
    "additionalProperties": False,
    "$defs": {"algebra": ALGEBRA, "element": ELEMENT},
}

_LABEL = {"type": ["string", "number"]}
_MODULUS = {"type": "string", "minLength": 1}

SPACE = {
    "type": "object",
    "required": ["kind"],
    "oneOf": [
        {"properties": {"kind": {"const": "scaled-modulus"}, "alpha": {"type": "number", "exclusiveMinimum": 0}},
         "additionalProperties": False},
        {"properties": {"kind": {"const": "rational-line"}, "alpha": {"type": "number", "exclusiveMinimum": 0}},
         "additionalProperties": False},
        {"properties": {"kind": {"const": "complex-line"}}, "additionalProperties": False},
        {"properties": {"kind": {"const": "table"}, "table": {"$ref": "#/$defs/table"}},
         "required": ["table"], "additionalProperties": False},
    ],
}

_COMMON = {"kind": {}, "modulus": _MODULUS, "name": {"type": "string"}}

GENERATOR = {
    "type": "object",
    "required": ["kind"],
    "oneOf": [
        {"properties": {**_COMMON, "kind": {"const": "constant"}, "point": _LABEL},
         "required": ["point"], "additionalProperties": False},
        {"properties": {**_COMMON, "kind": {"const": "harmonic"}, "center": _LABEL,
                        "scale": _LABEL, "power": {"type": "integer", "minimum": 1}},
         "additionalProperties": False},
        {"properties": {**_COMMON, "kind": {"const": "geometric"}, "offset": _LABEL,
                        "first": _LABEL, "ratio": _LABEL},
         "additionalProperties": False},
        {"properties": {**_COMMON, "kind": {"const": "table-walk"},
                        "points": {"type": "array", "items": _LABEL, "minItems": 1}, "cycle": {"type": "boolean"}},
         "required": ["points"], "additionalProperties": False},
        {"properties": {**_COMMON, "kind": {"const": "expression"}, "expr": {"type": "string", "minLength": 1}},
         "required": ["expr"], "additionalProperties": False},
    ],
}

SEQUENCE_FILE = {
    "type": "object",
    "required": ["space", "sequence"],
    "properties": {
        "space": {"$ref": "#/$defs/space"},
        "sequence": {"$ref": "#/$defs/generator"},
        "target": _LABEL,
        "witnesses": {"type": "array", "items": {"$ref": "#/$defs/element"}, "minItems": 1},
        "expect": {
            "type": "object",
            "properties": {"converges": {"type": "boolean"}, "cauchy": {"type": "boolean"}},
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
    "$defs": {"space": SPACE, "generator": GENERATOR, "element": ELEMENT, "algebra": ALGEBRA,
              "table": {k: v for k, v in METRIC_TABLE.items() if k != "$defs"}},
}

MODULE_VECTOR = {
    "type": "object",
    "required": ["rank", "coords"],
    "properties": {
        "rank": {"type": "integer", "minimum": 1},
        "coords": {"type": "array", "items": {"$ref": "#/$defs/element"}, "minItems": 1},
    },
    "additionalProperties": False,
}

MODULE_FILE = {
    "type": "object",
    "required": ["algebra", "rank", "vectors"],
    "properties": {
        "algebra": {"$ref": "#/$defs/algebra"},
        "rank": {"type": "integer", "minimum": 1},
        "vectors": {"type": "array", "items": {"$ref": "#/$defs/vector"}, "minItems": 1},
    },
    "additionalProperties": False,
    "$defs": {"algebra": ALGEBRA, "element": ELEMENT, "vector": MODULE_VECTOR},
}

ALGEBRA_FILE = {"$ref": "#/$defs/algebra", "$defs": {"algebra": ALGEBRA}}

REPORT = {
    "type": "object",
    "required": ["tool", "version", "command", "timestamp", "config", "summary", "warnings", "records"],
    "properties": {
        "tool": {"const": "cstarkit"},
        "version": {"type": "string"},
        "command": {"type": "string"},
        "timestamp": {"type": "string"},
        "config": {"type": "object"},
        "summary": {
            "type": "object",
            "required": ["total", "passed", "failed"],
            "properties": {k: {"type": "integer", "minimum": 0} for k in ("total", "passed", "failed")},
        },
        "warnings": {"type": "array", "items": {"type": "string"}},
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["check_id", "anchor", "verdict", "samples", "violations", "witness", "details"],
                "properties": {
                    "check_id": {"type": "string", "minLength": 1},
                    "anchor": {"type": "string", "minLength": 1},
                    "verdict": {"enum": ["pass", "fail"]},
                    "samples": {"type": "integer", "minimum": 0},
                    "violations": {"type": "integer", "minimum": 0},
                    "witness": {},
                    "details": {"type": "object"},
                    "timing": {"type": "number", "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

SCHEMAS = {
    "element": ELEMENT,
    "algebra": ALGEBRA_FILE,
    "metric-table": METRIC_TABLE,
    "sequence": SEQUENCE_FILE,
    "module": MODULE_FILE,
    "report": REPORT,
}


def pointer(path) -> str:
    """RFC 6901 pointer for a jsonschema error path."""
    parts = [str(p).replace("~", "~0").replace("/", "~1") for p in path]
    return "/" + "/".join(parts) if parts else "/"


def validate(instance, schema_name: str) -> None:
    """Raise InputError naming the JSON pointer of the first (deepest-path-first) violation."""
    validator = Draft202012Validator(SCHEMAS[schema_name])
    errors = sorted(validator.iter_errors(instance), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        where = pointer(err.absolute_path)
        raise InputError(f"schema violation at {where}: {err.message}", witness=where)


def loads(text: str, source: str = "<input>"):
    """Parse JSON, turning decode errors into InputError with line and column."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                         witness={"line": exc.lineno, "column": exc.colno}) from exc


def load_file(path: str, schema_name: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    data = loads(text, path)
    validate(data, schema_name)
    return data
