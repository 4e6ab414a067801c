import io
import json

import pytest

from ghostsim.cli import main


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def test_params_fig2():
    code, text = run(["params", "fig2"])
    assert code == 0
    vals = kv(text)
    assert float(vals["w2"]) == pytest.approx(1.884e-3, rel=1e-3)
    assert float(vals["w1"]) == pytest.approx(6.28e-4, rel=1e-3)
    assert vals["regime_admissible"] == "true"
    assert float(vals["D"]) == 3.0


def test_time_and_distance_scenarios_agree(tmp_path, fig2):
    k = fig2.kinematics.to_time(fig2.source.hbar, fig2.source.mass)
    body = (tmp_path / "t.cfg")
    text = open(str(fig2.path)).read()
    head, _, tail = text.partition("[kinematics]")
    tail = tail.split("[scan]")[1]
    body.write_text(head + f"[kinematics]\nmode = time\nt0 = {k.t0!r}\nt = {k.t!r}\n[scan]" + tail)
    _, a = run(["params", str(fig2.path)])
    _, b = run(["params", str(body)])
    skip = {"mode", "D"}
    va = {k_: v for k_, v in kv(a).items() if k_ not in skip}
    vb = {k_: v for k_, v in kv(b).items() if k_ not in skip}
    assert va == vb


def test_singular_scenario(tmp_path, capsys):
    p = tmp_path / "s.cfg"
    p.write_text("[source]\nsigma = 0.5\nomega = 1\n[slits]\ny0 = 1\nepsilon = 0.25\n"
                 "[kinematics]\nmode = time\nt0 = 0\nt = 1\n")
    code, _ = run(["params", str(p)])
    assert code == 2
    assert "singular configuration" in capsys.readouterr().err


def test_config_error_exit(tmp_path, capsys):
    p = tmp_path / "s.cfg"
    p.write_text("[source]\nsigma = 1\nomega = 2\nfoo = 3\n")
    assert run(["params", str(p)])[0] == 2
    assert f"{p}:4:" in capsys.readouterr().err
    assert run(["params", "fig2", "--set", "slits.y0=-1"])[0] == 2


def test_scan_csv_sidecar_and_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["scan", "fig2", "-o", str(a)])[0] == 0
    assert run(["scan", "fig2", "-o", str(b)])[0] == 0
    assert a.read_bytes() == b.read_bytes()
    meta = json.loads((tmp_path / "a.csv.json").read_text())
    assert meta["normalization"] > 0
    assert meta["scenario"]["scan"]["count"] == 2001
    code, text = run(["fringe", str(a)])
    assert code == 0
    assert float(kv(text)["fringe_width"]) == pytest.approx(1.884e-3, rel=0.01)


def test_scan_to_stdout_and_overrides():
    code, text = run(["scan", "fig2", "--particle", "1", "--fixed", "0", "--count", "64"])
    assert code == 0
    lines = text.splitlines()
    assert lines[:2] == ["# ghostsim v1", "position_m,density"]
    assert len(lines) == 66
    assert run(["scan", "fig2", "--fixed", "abc"])[0] == 2
    assert run(["scan", "fig2", "--count", "10"])[0] == 2


def test_marginal_fit_unavailable(tmp_path, capsys):
    p = tmp_path / "m.csv"
    assert run(["scan", "fig2", "--fixed", "marginal", "--count", "401", "-o", str(p)])[0] == 0
    assert run(["fringe", str(p)])[0] == 4
    assert "fit unavailable" in capsys.readouterr().err


def test_fringe_malformed_csv(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("# ghostsim v1\nposition_m,density\n0,1\nnope\n")
    assert run(["fringe", str(p)])[0] == 2
    assert ":4:" in capsys.readouterr().err


def test_erasure_command(tmp_path):
    out = tmp_path / "sum.csv"
    code, text = run(["erasure", "fig2", "-o", str(out)])
    assert code == 0
    vals = kv(text)
    assert float(vals["min_conditional_visibility"]) > 0.9
    assert float(vals["summed_visibility"]) < 0.05
    assert float(vals["shift_slope"]) == pytest.approx(-3.0, rel=0.02)
    assert out.exists()
    assert run(["erasure", "fig2", "--y1-span", "0.5"])[0] == 2


def test_oracle_compare_refuses_si(capsys):
    assert run(["oracle-compare", "fig2"])[0] == 3
    assert "closed-form engine" in capsys.readouterr().err


def test_oracle_compare_benchmark(tmp_path):
    dump = tmp_path / "grid.txt"
    code, text = run(["oracle-compare", "benchmark", "--dump", str(dump)])
    assert code == 0
    vals = kv(text)
    assert vals["result"] == "PASS"
    assert float(vals["l2_relative"]) < 1e-3
    assert dump.read_text().startswith("# n1=512 n2=512")


def test_oracle_compare_self():
    code, text = run(["oracle-compare", "signature", "--self"])
    assert code == 0
    assert float(kv(text)["l2_relative"]) < 1e-10


def test_oracle_compare_needs_grid(tmp_path):
    p = tmp_path / "s.cfg"
    p.write_text("[source]\nsigma = 1\nomega = 20\n[slits]\ny0 = 1\nepsilon = 0.25\n"
                 "[kinematics]\nmode = time\nt0 = 0.1\nt = 0.5\n")
    assert run(["oracle-compare", str(p)])[0] == 2


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == 2
