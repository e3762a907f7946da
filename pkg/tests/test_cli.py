import io
import json

import pytest

from tricontract.analysis import certify, triple_table
from tricontract.cli import run
from tricontract.fixtures import example_document, load_example
from tricontract.metric import parse_space
from tricontract.phi import SQRTSQ, PhiSpec


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, fname in (("2.1", "ex21.json"), ("2.2", "ex22.json")):
        p = tmp_path / fname
        p.write_text(example_document(name))
        paths[name] = str(p)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"points": ["x", "y", "z"], "distances": [[0, 1, 10], [1, 0, 1], [10, 1, 0]],
                               "map": {"x": "x", "y": "x", "z": "x"}}))
    paths["bad"] = str(bad)
    swap = tmp_path / "swap.json"
    swap.write_text(json.dumps({"points": ["A", "B", "C"], "distances": [[0, 1, 10], [1, 0, 10], [10, 10, 0]],
                                "map": {"A": "B", "B": "A", "C": "A"}}))
    paths["swap"] = str(swap)
    nomap = tmp_path / "nomap.json"
    nomap.write_text('{"points": ["A","B","C"], "distances": [[0,4,2],[4,0,4],[2,4,0]]}')
    paths["nomap"] = str(nomap)
    return paths


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_certify_max(files):
    code, out, _ = call("certify", "--input", files["2.1"], "--phi", "max")
    assert code == 0
    assert "alpha_star: 0.75" in out and "contracting: true" in out


def test_certify_json(files):
    code, out, _ = call("certify", "--input", files["2.1"], "--phi", "max", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc == {"phi": "max", "alpha_star": 0.75, "witness": ["A", "B", "C"], "contracting": True,
                   "triples_checked": 10}


def test_certify_negative_exit(files):
    code, out, _ = call("certify", "--input", files["2.2"], "--phi", "sum", "--format", "json")
    assert code == 1
    assert json.loads(out)["alpha_star"] == 1.0


def test_certify_alpha_mode(files):
    code, out, _ = call("certify", "--input", files["2.1"], "--phi", "max", "--alpha", "0.75")
    assert code == 0 and "holds: true" in out
    code, out, _ = call("certify", "--input", files["2.1"], "--phi", "max", "--alpha", "0.7", "--format", "json")
    doc = json.loads(out)
    assert code == 1 and not doc["holds"] and len(doc["violations"]) == 9
    code, _, err = call("certify", "--input", files["2.1"], "--alpha", "1.0")
    assert code == 2


def test_solve(files):
    code, out, _ = call("solve", "--input", files["2.1"], "--phi", "max", "--start", "A")
    assert code == 0
    assert "orbit: A -> C -> E" in out and "fixed point E" in out


def test_solve_json(files):
    code, out, _ = call("solve", "--input", files["2.2"], "--phi", "sqrtsq", "--start", "B", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["trace"]["steps"] == ["B", "D"]
    assert doc["trace"]["verdict"]["point"] == "D"


def test_solve_not_contracting(files):
    code, out, _ = call("solve", "--input", files["2.2"], "--phi", "max", "--start", "A")
    assert code == 1 and "not contracting" in out


def test_solve_period2(files):
    code, out, _ = call("solve", "--input", files["swap"], "--phi", "max", "--start", "C")
    assert code == 1 and "period-2" in out


def test_solve_bad_start(files):
    assert call("solve", "--input", files["2.1"], "--phi", "max", "--start", "Z")[0] == 2


def test_fixed_points(files):
    code, out, _ = call("fixed-points", "--input", files["2.2"], "--format", "json")
    assert code == 0 and json.loads(out) == {"fixed_points": ["C", "D"], "period2_points": []}
    code, out, _ = call("fixed-points", "--input", files["swap"])
    assert code == 1 and "period2_points: A, B" in out


def test_validate(files):
    code, out, _ = call("validate", "--input", files["2.1"])
    assert code == 0 and "triangle_ok: true" in out
    code, out, _ = call("validate", "--input", files["bad"], "--format", "json")
    doc = json.loads(out)
    assert code == 1 and not doc["triangle_ok"]
    assert ["x", "y", "z"] in [v["points"] for v in doc["violations"]]


def test_invalid_metric_on_certify(files):
    code, _, err = call("certify", "--input", files["bad"], "--phi", "max")
    assert code == 1 and "triangle inequality" in err


@pytest.mark.parametrize("argv", [
    ["certify", "--input", "/nonexistent/file.json"],
    ["certify"],
    ["frobnicate"],
    [],
    ["certify", "--input", "x.json", "--phi", "median"],
    ["certify", "--input", "x.json", "--bogus"],
    ["examples", "3.1"],
    ["random", "--n", "2", "--seed", "0"],
])
def test_usage_errors(argv):
    code, _, err = call(*argv)
    assert code == 2 and err


def test_missing_map(files):
    assert call("certify", "--input", files["nomap"])[0] == 2


def test_examples_22_text():
    code, out, _ = call("examples", "2.2")
    assert code == 0
    assert "phi(T)=12 " in out and "phi=18 " in out and "20.7979589711" in out


def test_examples_match_pipeline():
    for name in ("2.1", "2.2"):
        code, out, _ = call("examples", name, "--format", "json")
        doc = json.loads(out)
        space, T = load_example(name)
        assert code == 0
        phis = {c["phi"]: c for c in doc["certificates"]}
        for key, c in phis.items():
            assert c == certify(space, T, PhiSpec.parse(key)).to_dict()
        rows = triple_table(space, T, PhiSpec.parse(doc["table"]["phi"]))
        assert [r["image_phi"] for r in doc["table"]["rows"]] == [r.image_phi for r in rows]


def test_json_output_is_deterministic(files):
    for argv in (["certify", "--input", files["2.2"], "--phi", "sqrtsq"], ["examples", "2.1"],
                 ["solve", "--input", files["2.1"], "--phi", "max", "--start", "B"]):
        first = call(*argv, "--format", "json")
        assert call(*argv, "--format", "json") == first


def test_random(tmp_path):
    code, out, _ = call("random", "--n", "6", "--seed", "5")
    assert code == 0
    space, T = parse_space(out)
    assert len(space) == 6 and T is not None
    assert call("random", "--n", "6", "--seed", "5")[1] == out
    target = tmp_path / "r.json"
    code, out2, _ = call("random", "--n", "6", "--seed", "5", "--out", str(target))
    assert code == 0 and out2 == "" and target.read_text() == out
    code, _, _ = call("certify", "--input", str(target), "--phi", "max")
    assert code in (0, 1)


def test_sqrtsq_example_numbers():
    space, T = load_example("2.2")
    rows = {r.triple: r for r in triple_table(space, T, SQRTSQ)}
    assert rows["A", "C", "D"].preimage_phi == pytest.approx(20.798, abs=1e-3)
