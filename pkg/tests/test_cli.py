import json
import subprocess
import sys
from pathlib import Path

import pytest

from lambdatree import serialization as ser
from lambdatree.cli import JobRequest, main, run
from lambdatree.errors import UnsupportedFormat
from lambdatree.schottky import verify_ping_pong

DATA = Path(__file__).resolve().parents[1] / "scripts" / "data"
Q3 = {"kind": "rational-padic", "p": 3}


def call(*argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def load(name):
    return json.loads((DATA / name).read_text())


# ---------------------------------------------------------------- examples


def test_classify_example(capsys):
    code, out = call("classify", "[[3,0],[0,1]]", "--field", json.dumps(Q3), capsys=capsys)
    assert code == 0
    assert json.loads(out) == {"kind": "hyperbolic", "multiplier_valuation": [1], "fixed": ["0", "inf"]}


def test_tree_example_dot(capsys):
    payload = json.dumps({"points": ["0", "1", "9", "inf"], "field": Q3})
    code, out = call("tree", payload, "--format", "dot", capsys=capsys)
    assert code == 0
    body = out.splitlines()[1:-1]
    nodes = [l for l in body if "--" not in l]
    edges = [l for l in body if "--" in l]
    assert len(nodes) == 2 and len(edges) == 1 and edges[0].endswith('[label="[2]"];')


def test_overlap_is_a_violation(capsys):
    doc = load("rank1_schottky.json")
    doc["balls"][0]["radius"] = [0]
    code, out = call("schottky-verify", json.dumps(doc), capsys=capsys)
    rep = json.loads(out)
    assert code == 1 and not rep["verified"]
    assert any(v["kind"] == "overlap" and v["indices"] == [1, 2] for v in rep["violations"])


def test_malformed_input_exits_2(capsys):
    code, out = call("classify", "{not json", "--field", json.dumps(Q3), capsys=capsys)
    assert code == 2 and json.loads(out)["status"] == "malformed"
    code, out = call("classify", "[[3,0],[0,1]]", capsys=capsys)  # no field
    assert code == 2
    code, out = call("tree", json.dumps({"points": "0"}), "--field", json.dumps(Q3), capsys=capsys)
    assert code == 2 and "schema" in json.loads(out)["detail"]
    code, out = call("classify", "[[3,0],[0,1]]", "--field", json.dumps(Q3), "--format", "svg", capsys=capsys)
    assert code == 2
    assert call("bogus", capsys=capsys)[0] == 2


def test_library_errors_exit_1(capsys):
    code, out = call("classify", "[[1,0],[0,1]]", "--field", json.dumps(Q3), capsys=capsys)
    doc = json.loads(out)
    assert code == 1 and doc == {"status": "violation", "error": "IdentityInput", "detail": doc["detail"]}
    code, out = call("tree", json.dumps({"points": ["0", "inf"]}), "--field", json.dumps(Q3), capsys=capsys)
    assert code == 1 and json.loads(out)["error"] == "TooFewPoints"


def test_quotient_json_and_dot(capsys):
    path = DATA / "rank1_schottky.json"
    code, out = call("quotient", path, capsys=capsys)
    doc = json.loads(out)
    assert code == 0 and doc["genus"] == 2 and doc["stabilized"]
    assert all(isinstance(e[3], list) for e in doc["edges"])  # covering words
    code, dot = call("quotient", path, "--format", "dot", capsys=capsys)
    assert code == 0 and dot.startswith("graph G {") and dot.count("--") == 3


def test_quotient_dot_shows_loops(capsys):
    from lambdatree.schottky import far_example

    doc = far_example().to_json()
    code, dot = call("quotient", json.dumps(doc), "--format", "dot", capsys=capsys)
    assert code == 0
    lines = [l for l in dot.splitlines() if "--" in l]
    assert len(lines) == 2 and all(l.split(" -- ")[0].strip() == l.split(" -- ")[1].split(" [")[0] for l in lines)


def test_not_stabilized_is_a_violation(capsys):
    code, out = call("quotient", DATA / "rank1_schottky.json", "--depth", 1, "--max-depth", 1, capsys=capsys)
    doc = json.loads(out)
    assert code == 1 and doc["error"] == "NotStabilized"


def test_limit_set_and_seed(capsys):
    code, out = call("limit-set", DATA / "rank1_schottky.json", "--depth", 1, "--seed", 7, capsys=capsys)
    doc = json.loads(out)
    assert code == 0 and sorted(doc["points"]) == ["0", "1", "3", "4"] and doc["seed"] == 7


def test_synthesize_and_round_trip(capsys):
    code, out = call("synthesize", DATA / "dumbbell.json", "--field", json.dumps(Q3), capsys=capsys)
    assert code == 0
    data = ser.schottky_from_json(json.loads(out))
    assert verify_ping_pong(data).ok and data.g == 2
    code, out = call("round-trip", DATA / "theta_odd.json", "--field", json.dumps(Q3), capsys=capsys)
    doc = json.loads(out)
    assert code == 0 and doc["isomorphic"] and any("quad-ext" in n for n in doc["notes"])


# ---------------------------------------------------------------- emitter contract


def test_emit_is_deterministic_and_rejects_formats():
    req = JobRequest("quotient", load("rank1_schottky.json"))
    assert run(req) == run(req)
    assert ser.emit({"b": 1, "a": [1, 2]}) == b'{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
    with pytest.raises(UnsupportedFormat):
        ser.emit({}, "yaml")
    with pytest.raises(UnsupportedFormat):
        ser.emit({}, "dot")


def test_separate_processes_give_identical_bytes():
    cmd = [sys.executable, "-m", "lambdatree", "limit-set", str(DATA / "rank2_schottky.json"), "--depth", "2"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.endswith(b"\n")


def test_emitted_documents_reparse(capsys):
    f = ser.field_from_json(Q3)
    _, out = call("classify", "[[10,1],[3,3]]", "--field", json.dumps(Q3), "--precision", "[12]", capsys=capsys)
    doc = json.loads(out)
    for z in doc["fixed"]:
        ser.validate(z, ser.ELEMENT_SCHEMA)
        ser.point_from_json(f, z)
    ser.validate(doc["precision"], ser.VALUE_SCHEMA)
    _, out = call("tree", json.dumps({"points": ["0", "1", "9", "1/3", "inf"]}), "--field", json.dumps(Q3), capsys=capsys)
    for b in json.loads(out)["vertices"]:
        ser.ball_from_json(f, b)
    _, out = call("quotient", DATA / "rank1_schottky.json", capsys=capsys)
    g = ser.graph_from_json(json.loads(out))
    assert g.genus() == 2
    _, out = call("synthesize", DATA / "theta_odd.json", "--field", json.dumps(Q3), capsys=capsys)
    assert verify_ping_pong(ser.schottky_from_json(json.loads(out))).ok
    _, out = call("round-trip", DATA / "dumbbell.json", "--field", json.dumps(Q3), capsys=capsys)
    ser.graph_from_json(json.loads(out)["quotient"])
