"""JSON round trips and the command-line front end."""

import json

import numpy as np
import pytest

from qwalk import fixtures as fx
from qwalk.cli import main
from qwalk.graph import torus, write_edge_list
from qwalk.serialize import SerializationError, dumps, state_from_dict, state_to_dict
from qwalk.stationary import construct_optimal


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_state_round_trip():
    g, m = fx.torus_pair(4, 3)
    state, _ = construct_optimal(g, m)
    data = json.loads(dumps(state_to_dict(state, m)))
    back, marked = state_from_dict(data, g)
    np.testing.assert_array_equal(back.amplitudes, state.amplitudes)
    assert marked == [6, 7] and data["normalized"] is True


def test_state_wrong_graph():
    g, m = fx.torus_pair(4, 3)
    data = state_to_dict(fx.pair_state(g, (6, 7)), m)
    with pytest.raises(SerializationError, match="graph_hash"):
        state_from_dict(data, torus(3, 4))


def test_state_missing_arc():
    g, m = fx.torus_pair(4, 3)
    data = state_to_dict(fx.pair_state(g, (6, 7)), m)
    data["amplitudes"].pop()
    with pytest.raises(SerializationError, match="misses 1"):
        state_from_dict(data, g)


def test_dumps_is_canonical():
    assert dumps({"b": 0.1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 0.1\n}\n'


# CLI -----------------------------------------------------------------------


def test_construct_pair(capsys):
    code, out, _ = run(capsys, "construct", "--graph", "torus", "4", "3", "--marked", "6,7")
    assert code == 0
    data = json.loads(out)
    assert data["report"]["is_stationary"]
    vals = {(e["from"], e["to"]): e["value"] for e in data["state"]["amplitudes"]}
    a = vals[(0, 1)]
    assert vals[(6, 7)] == pytest.approx(-3 * a) and vals[(7, 6)] == pytest.approx(-3 * a)
    assert all(v == pytest.approx(a) for k, v in vals.items() if k not in {(6, 7), (7, 6)})


def test_construct_verify_round_trip(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert main(["construct", "--graph", "torus", "4", "3", "--marked", "6,7", "--out", str(out)]) == 0
    code, text, _ = run(capsys, "verify", "--graph", "torus", "4", "3", "--state", str(out))
    assert code == 0 and json.loads(text)["is_stationary"]


def test_verify_perturbed(tmp_path, capsys):
    out = tmp_path / "s.json"
    main(["construct", "--graph", "torus", "4", "3", "--marked", "6,7", "--out", str(out)])
    data = json.loads(out.read_text())
    data["state"]["amplitudes"][0]["value"] += 0.01
    out.write_text(json.dumps(data))
    code, text, _ = run(capsys, "verify", "--graph", "torus", "4", "3", "--state", str(out))
    assert code == 1 and json.loads(text)["violations"]


def test_optimize(tmp_path, capsys):
    g, m = fx.torus_pair(4, 3)
    p = tmp_path / "gen.json"
    p.write_text(dumps(state_to_dict(fx.general_pair_state(g, m, 1.0, 0.5), m)))
    code, text, _ = run(capsys, "optimize", "--graph", "torus", "4", "3", "--state", str(p))
    assert code == 0
    assert json.loads(text)["report"]["overlap_with_initial"] == pytest.approx(0.72168783648703, abs=1e-12)


def test_exists_path2(capsys):
    code, out, _ = run(capsys, "exists", "--graph", "path2", "--marked", "0")
    assert code == 1 and json.loads(out)["verdict"] == "infeasible"


def test_exists_pair(capsys):
    code, out, _ = run(capsys, "exists", "--graph", "torus", "4", "3", "--marked", "6,7")
    assert code == 0 and json.loads(out)["verdict"] == "feasible"


def test_balance_from_file(tmp_path, capsys):
    g, _ = fx.disjoint_unmarked_pair()
    p = tmp_path / "g.txt"
    write_edge_list(g, str(p))
    code, out, _ = run(capsys, "balance", "--graph", str(p), "--marked", "0,1")
    a, b = json.loads(out)["assignment"]
    assert code == 0 and a / b == pytest.approx(1.5)


def test_construct_with_assign(tmp_path, capsys):
    g, _ = fx.disjoint_unmarked_pair()
    p = tmp_path / "g.txt"
    write_edge_list(g, str(p))
    code, _, _ = run(capsys, "construct", "--graph", str(p), "--marked", "0,1", "--assign", "U0=3,U1=2")
    assert code == 0
    code, out, _ = run(capsys, "construct", "--graph", str(p), "--marked", "0,1", "--assign", "0=1,1=1")
    assert code == 1 and json.loads(out)["verdict"] == "infeasible"


def test_simulate_csv_and_json(capsys):
    code, out, _ = run(capsys, "simulate", "--graph", "complete", "16", "--marked", "0", "--steps", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "step,success_probability,norm" and len(lines) == 5
    code, out, _ = run(capsys, "simulate", "--graph", "complete", "16", "--marked", "0",
                       "--steps", "3", "--format", "json", "--oracle", "skw")
    assert code == 0 and json.loads(out)["step"] == [0, 1, 2, 3]


def test_eigen(tmp_path, capsys):
    dump = tmp_path / "b.json"
    code, out, _ = run(capsys, "eigen", "--graph", "torus", "4", "3", "--marked", "6,7", "--dump-basis", str(dump))
    data = json.loads(out)
    assert code == 0 and data["projection_norm"] ** 2 == pytest.approx(fx.pair_overlap_squared(12))
    assert json.loads(dump.read_text())["dimension"] == data["dimension"]


def test_generate(capsys):
    code, out, _ = run(capsys, "generate", "--graph", "torus", "4", "3")
    assert code == 0 and out.splitlines()[0] == "12 24"


def test_determinism(capsys):
    argv = ["construct", "--graph", "torus", "5", "4", "--marked", "6,7"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "--graph", "torus", "4"],
        ["construct", "--graph", "nosuchfile.txt"],
        ["construct", "--graph", "torus", "4", "3", "--marked", "6,x"],
        ["construct", "--graph", "torus", "4", "3", "--marked", "60"],
        ["construct", "--graph", "torus", "4", "3", "--marked", "6,7", "--tol", "-1"],
        ["construct", "--graph", "torus", "4", "3", "--marked", "6,7", "--assign", "5=1"],
        ["verify", "--graph", "torus", "4", "3"],
        ["simulate", "--graph", "torus", "4", "3", "--steps", "-1"],
        ["simulate", "--graph", "torus", "4", "3", "--oracle", "bogus"],
    ],
)
def test_input_errors(argv, capsys):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert len(err.strip().splitlines()) >= 1


def test_env_tolerance(monkeypatch, capsys):
    monkeypatch.setenv("QWALK_TOL", "1e-6")
    _, out, _ = run(capsys, "construct", "--graph", "torus", "4", "3", "--marked", "6,7")
    assert json.loads(out)["report"]["tolerance"] == 1e-6
    monkeypatch.setenv("QWALK_TOL", "abc")
    code, _, err = run(capsys, "construct", "--graph", "torus", "4", "3", "--marked", "6,7")
    assert code == 2 and "QWALK_TOL" in err
