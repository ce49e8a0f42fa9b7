"""JSON documents in and out: schemas, parsers and byte-stable emitters."""

from __future__ import annotations

import json

import jsonschema

from .ball_tree import INF, Ball, complement_region, make_ball
from .errors import UnsupportedFormat
from .moebius import Classification, Moebius
from .schottky import SchottkyData
from .valued_field.fields import ValuedField, make_field
from .valued_field.value_group import ValueElement, from_json as value_from_json
from .weighted_graph import WeightedGraph

# ---------------------------------------------------------------- schemas

_RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"}
VALUE_SCHEMA = {
    "type": "array",
    "minItems": 1,
    "items": {"anyOf": [{"type": "integer"}, _RATIONAL]},
}
ELEMENT_SCHEMA = {
    "anyOf": [
        {"type": "integer"},
        {"type": "string"},
        {"type": "array", "minItems": 2, "maxItems": 2, "items": {"anyOf": [{"type": "integer"}, {"type": "string"}]}},
    ]
}
FIELD_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["rational-padic", "funcfield-tadic", "rank2-composite", "quad-ext"]},
        "p": {"type": "integer", "minimum": 2},
        "base": {"anyOf": [{"type": "string"}, {"type": "object"}]},
        "ramifier": ELEMENT_SCHEMA,
    },
}
BALL_SCHEMA = {
    "type": "object",
    "required": ["center", "radius"],
    "properties": {"center": ELEMENT_SCHEMA, "radius": VALUE_SCHEMA, "complement": {"type": "boolean"}},
}
MATRIX_SCHEMA = {
    "anyOf": [
        {
            "type": "object",
            "required": ["a", "b", "c", "d"],
            "properties": {k: ELEMENT_SCHEMA for k in "abcd"},
        },
        {
            "type": "array",
            "minItems": 2,
            "maxItems": 2,
            "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": ELEMENT_SCHEMA},
        },
    ]
}
POINTSET_SCHEMA = {
    "type": "object",
    "required": ["points"],
    "properties": {"points": {"type": "array", "items": ELEMENT_SCHEMA}, "field": FIELD_SCHEMA},
}
SCHOTTKY_SCHEMA = {
    "type": "object",
    "required": ["generators", "balls"],
    "properties": {
        "field": FIELD_SCHEMA,
        "generators": {"type": "array", "items": MATRIX_SCHEMA},
        "balls": {"type": "array", "items": BALL_SCHEMA},
    },
}
GRAPH_SCHEMA = {
    "type": "object",
    "required": ["vertices", "edges"],
    "properties": {
        "vertices": {"type": "array", "items": {"type": "string"}},
        "edges": {
            "type": "array",
            "items": {
                "type": "array",
                "minItems": 3,
                "maxItems": 4,
                # the optional fourth item is the covering word of a quotient edge
                "prefixItems": [
                    {"type": "string"},
                    {"type": "string"},
                    VALUE_SCHEMA,
                    {"type": "array", "items": {"type": "integer"}},
                ],
            },
        },
        "field": FIELD_SCHEMA,
    },
}
CLASSIFY_SCHEMA = {
    "anyOf": [
        MATRIX_SCHEMA,
        {"type": "object", "required": ["matrix"], "properties": {"matrix": MATRIX_SCHEMA, "field": FIELD_SCHEMA}},
    ]
}


def validate(doc, schema) -> None:
    """Raise ValueError with a readable message when doc does not match."""
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValueError(f"schema violation at {where}: {exc.message}") from None


# ---------------------------------------------------------------- parsers


def field_from_json(doc) -> ValuedField:
    validate(doc, FIELD_SCHEMA)
    return make_field(doc)


def point_from_json(field: ValuedField, doc):
    if doc == "inf":
        return INF
    return field.parse(doc)


def point_to_json(field: ValuedField, z):
    return "inf" if z is INF else field.format(z)


def value_to_json(v: ValueElement):
    return v.to_json()


def ball_from_json(field: ValuedField, doc):
    validate(doc, BALL_SCHEMA)
    center = field.parse(doc["center"])
    radius = value_from_json(doc["radius"], field.rank)
    if doc.get("complement"):
        return complement_region(field, center, radius)
    return make_ball(field, center, radius)


def matrix_from_json(field: ValuedField, doc) -> Moebius:
    validate(doc, MATRIX_SCHEMA)
    if isinstance(doc, dict):
        entries = [doc[k] for k in "abcd"]
    else:
        entries = [doc[0][0], doc[0][1], doc[1][0], doc[1][1]]
    return Moebius(field, *(field.parse(x) for x in entries))


def schottky_from_json(doc, field: ValuedField | None = None) -> SchottkyData:
    validate(doc, SCHOTTKY_SCHEMA)
    if "field" in doc:
        field = field_from_json(doc["field"])
    if field is None:
        raise ValueError("no field given")
    gens = tuple(matrix_from_json(field, m) for m in doc["generators"])
    balls = []
    for b in doc["balls"]:
        ball = ball_from_json(field, b)
        if not isinstance(ball, Ball):
            raise ValueError("ping-pong balls must be balls, not complements")
        balls.append(ball)
    return SchottkyData(field, gens, tuple(balls))


def graph_from_json(doc) -> WeightedGraph:
    validate(doc, GRAPH_SCHEMA)
    return WeightedGraph.from_json(doc)


def classification_to_json(field: ValuedField, cls: Classification) -> dict:
    doc = {
        "kind": cls.kind,
        "multiplier_valuation": None if cls.multiplier_valuation is None else cls.multiplier_valuation.to_json(),
        "fixed": [point_to_json(field, fp.point) for fp in cls.fixed_points],
    }
    inexact = [fp.precision for fp in cls.fixed_points if not fp.exact]
    if inexact:
        doc["precision"] = min(inexact).to_json()
    return doc


# ---------------------------------------------------------------- emitters


def dumps(doc) -> str:
    """Deterministic JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit(doc, fmt: str = "json", dot=None) -> bytes:
    """Serialize a result; dot is the DOT text for results that have one."""
    if fmt == "json":
        return dumps(doc).encode("utf-8")
    if fmt == "dot":
        if dot is None:
            raise UnsupportedFormat("this result has no DOT form")
        return dot.encode("utf-8")
    raise UnsupportedFormat(f"unknown output format {fmt!r}")
