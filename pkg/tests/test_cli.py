import io
import json

import pytest

from dinv import cli
from dinv.cfk import staircase_from_alexander
from dinv.knots import AlexanderPoly
from dinv.randomized import cancelling_pair

TREFOIL = staircase_from_alexander(AlexanderPoly.parse("T - 1 + T^-1"))


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def trefoil_file(tmp_path):
    path = tmp_path / "trefoil.json"
    path.write_text(json.dumps(TREFOIL.to_json()))
    return str(path)


def test_lens_json(capsys):
    code, out, _ = run(capsys, "lens", "3", "1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["det"] == 3
    assert [e["d"] for e in data["entries"]] == ["1/2", "-1/6", "-1/6"]


def test_lens_human_and_recursive(capsys):
    code, out, _ = run(capsys, "lens", "2", "1")
    assert code == 0 and "label" in out and "1/4" in out
    code, out2, _ = run(capsys, "lens", "5", "2", "--recursive", "--json")
    assert code == 0 and len(json.loads(out2)["entries"]) == 5


def test_omega_negative_slope(capsys):
    code, out, _ = run(capsys, "omega", "-7/3", "--json")
    assert code == 0
    assert "-3" in out and "-2" in out


def test_torsion_and_surgery(capsys):
    code, out, _ = run(capsys, "torsion", "T - 1 + T^-1", "--json")
    assert code == 0
    code, out, _ = run(capsys, "surgery", "T - 1 + T^-1", "3", "--json")
    assert code == 0
    entries = json.loads(out)["entries"]
    assert entries[0]["d"] == "-3/2"


def test_obstruct_lspace(capsys):
    code, out, _ = run(capsys, "obstruct", "lspace", "T - 1 + T^-1")
    assert code == 0 and out.startswith("OBSTRUCTED")
    code, out, _ = run(capsys, "obstruct", "lspace", "1", "--json")
    assert code == 0 and json.loads(out)["status"] == "INCONCLUSIVE"


def test_obstruct_cable(capsys, trefoil_file):
    code, out, _ = run(capsys, "obstruct", "cable", "2", "--json")
    assert code == 0 and json.loads(out)["status"] == "OBSTRUCTED"
    code, out, _ = run(capsys, "obstruct", "cable", "2", "--complex", trefoil_file, "--json")
    assert code == 0 and json.loads(out)["certificate"]["d_one"] == "-2/1"


def test_stdin_polynomial(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("-T^2 + T - 1\n"))
    code, out, _ = run(capsys, "obstruct", "lspace", "-")
    assert code == 0 and out.startswith("OBSTRUCTED")


def test_stdin_complex(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(TREFOIL.to_json())))
    code, out, _ = run(capsys, "cfk", "-", "--tau", "--json")
    assert code == 0 and json.loads(out)["tau"] == 1


def test_cfk_queries(capsys, trefoil_file):
    code, out, _ = run(capsys, "cfk", trefoil_file, "--tau", "--d1", "--homology", "i:0", "--json")
    data = json.loads(out)
    assert code == 0 and data == {"valid": True, "tau": 1, "d1": "-2/1", "homology": {"0": 1}}


def test_cfk_reduce(capsys, tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(TREFOIL.direct_sum(cancelling_pair("c", 0, 0)).to_json()))
    code, out, _ = run(capsys, "cfk", str(path), "--reduce", "--json")
    assert code == 0 and json.loads(out) == TREFOIL.to_json()


def test_json_round_trip_is_byte_identical(capsys, trefoil_file):
    code, out, _ = run(capsys, "cfk", trefoil_file, "--reduce", "--json")
    again = trefoil_file + ".out"
    with open(again, "w") as fh:
        fh.write(out)
    code2, out2, _ = run(capsys, "cfk", again, "--reduce", "--json")
    assert code == code2 == 0 and out == out2


def test_verify_prop(capsys, trefoil_file):
    code, out, _ = run(capsys, "verify", "prop-a1", trefoil_file, "--json")
    assert code == 0 and json.loads(out)["details"]["d1"] == "-2/1"


def test_plumb_too_many_bad_vertices(capsys, tmp_path):
    tree = {
        "vertices": [{"id": 0, "weight": -9}] + [{"id": k, "weight": w}
                                                 for k, w in enumerate([-1, -9] * 3, start=1)],
        "edges": [[0, 1], [1, 2], [0, 3], [3, 4], [0, 5], [5, 6]],
    }
    path = tmp_path / "tree.json"
    path.write_text(json.dumps(tree))
    code, _, err = run(capsys, "plumb", str(path), "--method", "box")
    assert code == 3 and "TooManyBadVertices" in err


def test_plumb_single_vertex_bounds_reversed_lens(capsys, tmp_path):
    tree = {"vertices": [{"id": 0, "weight": -3}], "edges": []}
    path = tmp_path / "tree.json"
    path.write_text(json.dumps(tree))
    code, out, _ = run(capsys, "plumb", str(path), "--json")
    assert code == 0 and sorted(e["d"] for e in json.loads(out)["entries"]) == ["-1/2", "1/6", "1/6"]


@pytest.mark.parametrize("argv", [
    ["lens", "6", "4"],
    ["lens", "0", "1"],
    ["torsion", "T^"],
    ["cfk", "/nonexistent/file.json"],
    ["lens", "three", "1"],
    ["frobnicate"],
])
def test_invalid_input_exit_code(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_precondition_exit_code(capsys, tmp_path):
    path = tmp_path / "unknot.json"
    path.write_text(json.dumps(staircase_from_alexander(AlexanderPoly.parse("1")).to_json()))
    code, _, err = run(capsys, "verify", "prop-a1", str(path))
    assert code == 3 and "HypothesisFailed" in err


def test_check_single(capsys):
    code, out, _ = run(capsys, "check", "5")
    assert code == 0 and out.startswith("[PASS] 5")
