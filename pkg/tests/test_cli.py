import json

import numpy as np
import pytest

from so3topo.cli import main
from so3topo.homotopy import HomotopyGrid, verify_homotopy
from so3topo.paths import load_path, save_path, RotationPath, Loop


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_classify(workdir, capsys):
    assert run(capsys, "generate", "axis-loop", "--turns", "1", "--out", "one_turn.json")[0] == 0
    code, out, _ = run(capsys, "classify", "one_turn.json")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "-1"
    assert "agree:  yes" in out


def test_classify_constant(workdir, capsys):
    save_path(Loop(RotationPath(np.tile([1.0, 0, 0, 0], (3, 1)))), "c.json")
    code, out, _ = run(capsys, "classify", "c.json")
    assert (code, out.splitlines()[0]) == (0, "+1")


def test_classify_json_format(workdir, capsys):
    run(capsys, "generate", "doubled", "--out", "two_turns.json")
    code, out, _ = run(capsys, "classify", "two_turns.json", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"class": 1, "lift": 1, "crossing_parity": 1, "agree": True}


@pytest.mark.parametrize("text", ['{"samples": [[1, 0, 0', "[]", '{"samples": [[1,0,0,0],[0,1,0,0]]}'])
def test_classify_bad_input(workdir, capsys, text):
    (workdir / "bad.json").write_text(text)
    assert run(capsys, "classify", "bad.json")[0] == 2


def test_missing_file(workdir, capsys):
    assert run(capsys, "classify", "nope.json")[0] == 2


def test_disagreement_exit_code(workdir, capsys, monkeypatch):
    from so3topo import cli
    from so3topo.paths import HomotopyClass

    monkeypatch.setattr(cli, "crossing_parity", lambda loop: HomotopyClass.TRIVIAL)
    run(capsys, "generate", "axis-loop", "--out", "one_turn.json")
    assert run(capsys, "classify", "one_turn.json")[0] == 3


def test_generate_random_deterministic(workdir, capsys):
    run(capsys, "generate", "random", "--seed", "7", "--out", "a.json")
    run(capsys, "generate", "random", "--seed", "7", "--out", "b.json")
    run(capsys, "generate", "random", "--seed", "8", "--out", "c.json")
    assert (workdir / "a.json").read_text() == (workdir / "b.json").read_text()
    assert (workdir / "a.json").read_text() != (workdir / "c.json").read_text()


def test_generate_bad_params(workdir, capsys):
    assert run(capsys, "generate", "axis-loop", "--axis", "0", "0", "0")[0] == 2
    assert run(capsys, "generate", "doubled", "--turns", "0.5")[0] == 2
    assert run(capsys, "generate", "axis-loop", "--n", "1")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["generate", "spiral"])
    assert exc.value.code == 2


def test_generate_csv(workdir, capsys):
    code, out, _ = run(capsys, "generate", "axis-loop", "--n", "5", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "i,w,x,y,z" and len(out.splitlines()) == 6


def test_contract_round_trip(workdir, capsys):
    run(capsys, "generate", "doubled", "--out", "two_turns.json")
    code, out, _ = run(capsys, "contract", "two_turns.json", "--out", "grid.csv")
    assert code == 0 and "grid" in out and "worst step" in out
    grid = HomotopyGrid.from_csv(workdir / "grid.csv")
    assert verify_homotopy(grid, load_path("two_turns.json")).passed


def test_contract_nontrivial(workdir, capsys):
    run(capsys, "generate", "axis-loop", "--out", "one_turn.json")
    code, _, err = run(capsys, "contract", "one_turn.json", "--out", "g.csv")
    assert code == 4 and "nontrivial" in err


def test_contract_constant_to_stdout(workdir, capsys):
    save_path(Loop(RotationPath(np.tile([1.0, 0, 0, 0], (3, 1)))), "c.json")
    code, out, err = run(capsys, "contract", "c.json")
    assert code == 0 and "grid" in err
    rows = [l.split(",") for l in out.splitlines()[1:]]
    assert all([float(v) for v in r[2:]] == [1.0, 0.0, 0.0, 0.0] for r in rows)


def test_chart_ball(workdir, capsys):
    save_path(RotationPath(np.tile([1.0, 0, 0, 0], (3, 1))), "id.json")
    code, out, _ = run(capsys, "chart", "id.json", "--model", "ball")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "i,vx,vy,vz"
    assert all([float(v) for v in l.split(",")[1:]] == [0.0, 0.0, 0.0] for l in lines[1:])


def test_chart_ball_full_turn(workdir, capsys):
    run(capsys, "generate", "axis-loop", "--n", "100", "--out", "one_turn.json")
    _, out, _ = run(capsys, "chart", "one_turn.json", "--model", "ball")
    v = np.array([[float(x) for x in l.split(",")[1:]] for l in out.splitlines()[1:]])
    assert np.allclose(v[:, :2], 0)
    z = v[:, 2]
    # straight out to +pi, jump to -pi, straight back
    np.testing.assert_allclose(z[:50], np.linspace(0, 2 * np.pi, 100)[:50], atol=1e-12)
    assert z[49] > 3.0 and z[50] < -3.0
    np.testing.assert_allclose(z[50:], np.linspace(0, 2 * np.pi, 100)[50:] - 2 * np.pi, atol=1e-12)


def test_chart_torus(workdir, capsys):
    run(capsys, "generate", "axis-loop", "--axis", "0", "0", "1", "--out", "z.json")
    code, out, _ = run(capsys, "chart", "z.json", "--model", "torus")
    assert code == 0
    assert out.splitlines()[0] == "i,lambda,alpha,phi,disk_x,disk_y"


def test_chart_torus_domain_error(workdir, capsys):
    run(capsys, "generate", "axis-loop", "--axis", "1", "0", "0", "--n", "101", "--out", "x.json")
    code, _, err = run(capsys, "chart", "x.json", "--model", "torus")
    assert code == 5 and "sample 50" in err


def test_flags(workdir, capsys):
    assert run(capsys, "--tol", "bogus=1", "verify")[0] == 2
    assert run(capsys, "--eps", "1.5", "verify")[0] == 2
    run(capsys, "generate", "axis-loop", "--out", "one_turn.json")
    code, out, _ = run(capsys, "classify", "one_turn.json", "--tol", "class_chord=1e-5", "--eps", "0.1")
    assert code == 0 and out.startswith("-1")


def test_verify(workdir, capsys):
    code, out, _ = run(capsys, "verify", "--seed", "3")
    assert code == 0
    assert out.count("[PASS]") >= 5
    assert "identification sign s = -1" in out


def test_verify_json(workdir, capsys):
    code, out, _ = run(capsys, "verify", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["identification_sign"] in (1, -1)
