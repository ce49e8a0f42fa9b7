"""Command-line interface: JSON in, JSON or DOT out.

Exit codes: 0 success, 1 a mathematical violation reported as a result,
2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field as dc_field
from typing import Optional

from . import serialization as ser
from .errors import LambdaTreeError, NotStabilized, UnsupportedFormat
from .finite_tree import build_tree, to_dot
from .graph_synthesis import round_trip, synthesize_report
from .moebius import classify
from .schottky import limit_set_sample, quotient_graph, sample_precision, verify_ping_pong
from .valued_field.value_group import from_json as value_from_json

COMMANDS = ("classify", "tree", "schottky-verify", "limit-set", "quotient", "synthesize", "round-trip")


class MalformedInput(Exception):
    pass


@dataclass
class JobRequest:
    command: str
    payload: object
    field: Optional[dict] = None
    depth: int = 4
    precision: Optional[list] = None
    max_depth: int = 10
    format: str = "json"
    seed: Optional[int] = None


@dataclass
class JobResult:
    code: int
    doc: dict
    dot: Optional[str] = None
    extra: dict = dc_field(default_factory=dict)


def _field(req: JobRequest, payload):
    spec = payload.get("field") if isinstance(payload, dict) and "field" in payload else req.field
    if spec is None:
        raise MalformedInput("a field is required (--field or a \"field\" key in the payload)")
    return ser.field_from_json(spec)


def _precision(req: JobRequest, rank: int):
    if req.precision is None:
        return None
    return value_from_json(req.precision, rank)


def _violation(kind: str, message: str) -> dict:
    return {"status": "violation", "error": kind, "detail": message}


def _run_classify(req):
    ser.validate(req.payload, ser.CLASSIFY_SCHEMA)
    f = _field(req, req.payload)
    m = req.payload["matrix"] if isinstance(req.payload, dict) and "matrix" in req.payload else req.payload
    g = ser.matrix_from_json(f, m)
    return JobResult(0, ser.classification_to_json(f, classify(g, _precision(req, f.rank))))


def _run_tree(req):
    ser.validate(req.payload, ser.POINTSET_SCHEMA)
    f = _field(req, req.payload)
    pts = [ser.point_from_json(f, p) for p in req.payload["points"]]
    tree = build_tree(f, pts)
    return JobResult(0, tree.to_json(), to_dot(tree))


def _verified(req):
    data = ser.schottky_from_json(req.payload, None if req.field is None else ser.field_from_json(req.field))
    report = verify_ping_pong(data)
    return data, report


def _run_verify(req):
    _, report = _verified(req)
    return JobResult(0 if report.ok else 1, report.to_json())


def _run_limit_set(req):
    data, report = _verified(req)
    if not report.ok:
        return JobResult(1, report.to_json())
    data = report.data
    prec = _precision(req, data.field.rank) or sample_precision(data, req.depth)
    pts = limit_set_sample(data, req.depth, prec)
    f = data.field
    doc = {"depth": req.depth, "precision": prec.to_json(), "points": [ser.point_to_json(f, z) for z in pts]}
    return JobResult(0, doc)


def _run_quotient(req):
    data, report = _verified(req)
    if not report.ok:
        return JobResult(1, report.to_json())
    try:
        q = quotient_graph(report.data, depth=req.depth, max_depth=req.max_depth)
    except NotStabilized as exc:
        doc = _violation("NotStabilized", str(exc))
        doc["depth"] = exc.depth
        return JobResult(1, doc)
    return JobResult(0, q.to_json(), q.to_dot())


def _run_synthesize(req):
    G = ser.graph_from_json(req.payload)
    syn = synthesize_report(G, _field(req, req.payload))
    return JobResult(0, syn.to_json())


def _run_round_trip(req):
    G = ser.graph_from_json(req.payload)
    rep = round_trip(G, _field(req, req.payload), depth=req.depth, max_depth=req.max_depth)
    return JobResult(0 if rep.isomorphic else 1, rep.to_json(), rep.quotient.to_dot())


_DISPATCH = {
    "classify": _run_classify,
    "tree": _run_tree,
    "schottky-verify": _run_verify,
    "limit-set": _run_limit_set,
    "quotient": _run_quotient,
    "synthesize": _run_synthesize,
    "round-trip": _run_round_trip,
}


def run(req: JobRequest) -> tuple:
    """(exit code, output bytes) for one request."""
    if req.format not in ("json", "dot"):
        return 2, ser.emit({"status": "malformed", "error": "UnsupportedFormat", "detail": f"unknown format {req.format!r}"})
    try:
        res = _DISPATCH[req.command](req)
    except (MalformedInput, ValueError, TypeError, KeyError, SyntaxError, ZeroDivisionError) as exc:
        return 2, ser.emit({"status": "malformed", "error": type(exc).__name__, "detail": str(exc)})
    except LambdaTreeError as exc:
        return 1, ser.emit(_violation(type(exc).__name__, str(exc)))
    if req.seed is not None:
        res.doc["seed"] = req.seed
    if req.format == "dot" and res.code == 0:
        try:
            return res.code, ser.emit(res.doc, "dot", res.dot)
        except UnsupportedFormat as exc:
            return 2, ser.emit({"status": "malformed", "error": "UnsupportedFormat", "detail": str(exc)})
    return res.code, ser.emit(res.doc)


def _load_json(text: str, what: str):
    """Inline JSON, a file path, or '-' for stdin."""
    if text == "-":
        raw = sys.stdin.read()
    elif os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            raw = fh.read()
    else:
        raw = text
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{what}: not valid JSON ({exc.msg})") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lambdatree", description="Balls, Moebius actions and Schottky groups over valued fields.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("payload", nargs="?", default="-", help="JSON text, a file path, or - for stdin (default)")
    p.add_argument("--field", help="field spec as inline JSON or a file path")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--precision", help='Hensel precision as a value vector, e.g. "[16]"')
    p.add_argument("--max-depth", type=int, default=10)
    p.add_argument("--format", default="json", help="json or dot")
    p.add_argument("--seed", type=int, help="seed for randomized commands; echoed in the output")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        payload = _load_json(args.payload, "payload")
        field = _load_json(args.field, "--field") if args.field else None
        precision = _load_json(args.precision, "--precision") if args.precision else None
        if precision is not None:
            ser.validate(precision, ser.VALUE_SCHEMA)
    except (MalformedInput, ValueError) as exc:
        sys.stdout.buffer.write(ser.emit({"status": "malformed", "error": type(exc).__name__, "detail": str(exc)}))
        return 2
    req = JobRequest(args.command, payload, field, args.depth, precision, args.max_depth, args.format, args.seed)
    code, out = run(req)
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    return code
