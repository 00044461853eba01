import json
import subprocess
import sys

import pytest

from exdisc.cli import main


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_grid(capsys):
    assert run(capsys, "grid", "--n", "2")[:2] == (0, '{"points": ["1/4", "3/4"]}\n')
    assert run(capsys, "grid", "--n", "2", "--delta", "0")[1] == '{"points": ["0", "1/2"]}\n'
    code, _, err = run(capsys, "grid", "--n", "2", "--delta", "1/2")
    assert code == 2 and "DeltaOutOfRange" in err


def test_analyze_grid(capsys, tmp_path):
    f = tmp_path / "g3.json"
    f.write_text('{"points": ["1/6", "1/2", "5/6"]}')
    code, out, _ = run(capsys, "analyze", str(f), "--p", "2", "--decimal")
    rep = json.loads(out)
    assert code == 0
    assert (rep["star"], rep["l2_sq"], rep["extreme_star"], rep["extreme_l2_sq_square"]) == ("1/2", "1/12", "1", "1/6")
    assert rep["norms"]["D"]["lp_pow"]["2"]["exact"] == "1/12"
    assert rep["classification"]["kind"] == "centered_grid"


def test_analyze_stdin_and_inline(capsys, monkeypatch):
    code, out, _ = run(capsys, "analyze", "-", stdin='{"points": ["0"]}', monkeypatch=monkeypatch)
    rep = json.loads(out)
    assert code == 0 and rep["star"] == "1" and rep["l2_sq"] == "1/3"
    code, out, _ = run(capsys, "analyze", "--points", "0,3/4", "--psi", "huber")
    assert code == 0 and "psi" in json.loads(out)["norms"]["D"]


def test_analyze_errors(capsys, monkeypatch, tmp_path):
    code, _, err = run(capsys, "analyze", "-", stdin="{bad", monkeypatch=monkeypatch)
    assert code == 2 and "ParseError" in err
    assert run(capsys, "analyze", "--points", "1/2,2")[0] == 2
    assert run(capsys, "analyze", str(tmp_path / "missing.json"))[0] == 3


def test_export(capsys, tmp_path):
    code, out, _ = run(capsys, "export", "--points", "1/2", "--refine", "2")
    assert code == 0 and "1/4,1/2,1/2,0" in out.splitlines()
    code, out, _ = run(capsys, "export", "--points", "0,3/4")
    gaps = [row.split(",")[3] for row in out.splitlines()[1:]]
    positive = [g not in ("0",) and not g.startswith("-") for g in gaps]
    assert any(a and b for a, b in zip(positive, positive[1:]))
    code, _, err = run(capsys, "export", "--points", "0", "-o", str(tmp_path / "no" / "x.csv"))
    assert code == 3
    code, out, _ = run(capsys, "export", "--points", "0", "--which", "Dtilde", "--decimal")
    assert out.splitlines()[0] == "alpha,F,F_grid,gap,alpha_decimal,F_decimal,F_grid_decimal,gap_decimal"


def test_verify(capsys, tmp_path):
    assert run(capsys, "verify", "--check", "thm1", "--trials", "50", "--seed", "3")[0] == 0
    code, out, _ = run(capsys, "verify", "--check", "all", "--trials", "0")
    assert code == 0 and json.loads(out)["violations"] == 0
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--check", "bogus"])
    assert exc.value.code == 2


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "exdisc", "grid", "--n", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout) == {"points": ["1/6", "1/2", "5/6"]}
