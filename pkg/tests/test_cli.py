import json

import jsonschema
import pydot
import pytest

from resync import corpus
from resync.cli import load_schema, main


@pytest.fixture
def machine(tmp_path):
    def write(name):
        p = tmp_path / f"{name}.tw"
        p.write_text(corpus.source(name), encoding="utf-8")
        return str(p)
    return write


@pytest.fixture
def pair_file(tmp_path):
    def write(obj, name="pair.json"):
        p = tmp_path / name
        p.write_text(json.dumps(obj), encoding="utf-8")
        return str(p)
    return write


FIG1 = {"input": "baca", "output": "abac", "origin": [4, 1, 2, 3]}
FIG1_RIGHT = {"input": "baca", "output": "abac", "origin": [1, 1, 2, 3]}


def run_json(capsys, argv, schema):
    code = main(argv + ["--json"])
    report = json.loads(capsys.readouterr().out)
    jsonschema.validate(report, load_schema(schema))
    return code, report


def test_decide_yes(machine, capsys):
    assert main(["decide-oneway", machine("t1"), "-k", "3"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "YES"


def test_decide_no_with_witness(machine, capsys, tmp_path):
    dot = tmp_path / "w.dot"
    code, report = run_json(capsys, ["decide-oneway", machine("t2"), "-k", "3", "--dot", str(dot)], "decision")
    assert code == 1 and report["verdict"] == "NO"
    assert set(report["witness"]["flows"]) == {"F1", "E", "F2", "E'", "F3"}
    assert pydot.graph_from_dot_data(dot.read_text(encoding="utf-8"))


def test_crosswidth_crossing_pair(pair_file, capsys):
    assert main(["crosswidth", pair_file(FIG1)]) == 0
    assert capsys.readouterr().out.strip() == "1"
    code, report = run_json(capsys, ["crosswidth", pair_file([FIG1, FIG1_RIGHT])], "crosswidth")
    assert [r["width"] for r in report["results"]] == [1, 0]


def test_traversal(pair_file, capsys):
    code, report = run_json(capsys, ["traversal", pair_file(FIG1, "a.json"), pair_file(FIG1_RIGHT, "b.json")],
                            "traversal")
    assert code == 0 and report["max_traversal"] == 1
    assert report["right_to_left"] == {"2": [4], "3": [4], "4": [4]}


def test_traversal_mismatch_is_usage_error(pair_file):
    other = dict(FIG1_RIGHT, input="bac", origin=[1, 1, 2, 3])
    assert main(["traversal", pair_file(FIG1, "a.json"), pair_file(other, "b.json")]) == 2


def test_run(machine, capsys):
    code, report = run_json(capsys, ["run", machine("t1"), "baca"], "run")
    assert code == 0
    assert [r["origin"] for r in report["runs"]] == [[4, 1, 2, 3]]


def test_flows_and_dot(machine, capsys, tmp_path):
    dot = tmp_path / "f.dot"
    code, report = run_json(capsys, ["flows", machine("reverse"), "ab", "2", "3", "--dot", str(dot)], "flows")
    assert code == 0 and report["flow"]["l"] == ["r0", "l", "r1"]
    (g,) = pydot.graph_from_dot_data(dot.read_text(encoding="utf-8"))
    assert len(g.get_edges()) == 3


def test_monoid(machine, capsys):
    code, report = run_json(capsys, ["monoid", machine("identity"), "-k", "1"], "monoid")
    assert code == 0 and report["within_bound"] and report["size"] == 9


def test_pump(machine, capsys):
    code, report = run_json(capsys, ["pump", machine("identity"), "ab", "2", "3", "-n", "3"], "pump")
    assert code == 0 and report["pair"]["input"] == "abbb" and report["order_violations"] == []


def test_pump_not_a_loop(machine):
    assert main(["pump", machine("t1"), "ab", "2", "3"]) == 2


def test_factorize(machine, capsys, tmp_path):
    dot = tmp_path / "tree.dot"
    code, report = run_json(capsys, ["factorize", machine("t1"), "baca", "--threshold", "1",
                                     "--dot", str(dot)], "factorize")
    assert code == 0 and report["violations"] == [] and report["order_preserving"]
    assert pydot.graph_from_dot_data(dot.read_text(encoding="utf-8"))


def test_factorize_inversion(machine, capsys):
    code, report = run_json(capsys, ["factorize", machine("t2"), "a#b"], "factorize")
    assert code == 1 and "error" in report


def test_no_run_report(machine, capsys):
    code, report = run_json(capsys, ["flows", machine("t2"), "ab", "1", "2"], "flows")
    assert code == 1 and report == {"error": "no successful run"}


@pytest.mark.parametrize("name, code", [("identity", 0), ("multipass", 1)])
def test_sparsity(machine, capsys, name, code):
    got, report = run_json(capsys, ["sparsity", machine(name), "-k", "1", "--max-len", "3"], "sparsity")
    assert got == code
    assert (report["witness"] is None) == (code == 0)


def test_bound_exceeded_exit(machine):
    assert main(["monoid", machine("t1"), "--cap", "3"]) == 3


def test_usage_errors(machine, tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["decide-oneway"])
    assert exc.value.code == 2
    assert main(["run", str(tmp_path / "missing.tw"), "a"]) == 2
    bad = tmp_path / "bad.tw"
    bad.write_text("input: a\nright: q\ninitial: q\nq, z -> a, q\n", encoding="utf-8")
    assert main(["run", str(bad), "a"]) == 2
    assert "line 4" in capsys.readouterr().err
    assert main(["run", machine("t1"), "xyz"]) == 2


def test_exit_codes_are_deterministic(machine):
    path = machine("reverse")
    assert {main(["decide-oneway", path]) for _ in range(3)} == {1}


def test_pair_schema_accepts_pairs():
    jsonschema.validate(FIG1, load_schema("pair"))
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"input": "a", "output": "b", "origin": [0]}, load_schema("pair"))
