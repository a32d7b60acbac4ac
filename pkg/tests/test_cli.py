import csv
import io
import json
import subprocess
import sys

import pytest

from sphcross.cli import main, parse_range


def run(capsys, *argv):
    assert main(list(argv)) == 0
    return capsys.readouterr().out


def rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_parse_range():
    assert parse_range("7") == [7]
    assert parse_range("4..6") == [4, 5, 6]
    assert parse_range("3,9") == [3, 9]


def test_analytic_k4(capsys):
    out = run(capsys, "analytic", "--graph", "complete", "--n", "4")
    assert out.startswith("# sphcross") and "constants=rsa:" in out
    (r,) = rows(out)
    assert float(r["variance_ours"]) == pytest.approx(0.234375)
    assert float(r["expectation"]) == 0.375


def test_analytic_with_moon_and_bipartite(capsys):
    out = run(capsys, "analytic", "--graph", "bipartite", "--n1", "2..4", "--n2", "3", "--moon")
    rs = rows(out)
    assert len(rs) == 3 and {"variance_moon", "deviation", "sign"} <= set(rs[0])


def test_analytic_rla(capsys):
    (r,) = rows(run(capsys, "analytic", "--graph", "bipartite", "--n1", "2", "--n2", "2", "--layout", "rla"))
    assert float(r["variance_ours"]) == pytest.approx(2 / 9)


def test_deviation_flip_with_published_constants(capsys):
    rs = rows(run(capsys, "deviation", "--complete", "--n", "120..125", "--constants", "published"))
    signs = {int(r["n"]): int(r["sign"]) for r in rs}
    assert signs[122] == 1 and signs[123] == -1


def test_deviation_grid(capsys):
    rs = rows(run(capsys, "deviation", "--bipartite", "--n1", "2..4", "--n2", "2..5"))
    assert len(rs) == 12 and set(rs[0]) == {"n1", "n2", "deviation", "sign"}


def test_integrate_pi12(capsys):
    d = json.loads(run(capsys, "integrate", "--omega", "12", "--tol", "1e-9"))
    assert d["pi"] == pytest.approx(0.018585, abs=5e-7)
    assert abs(d["pi"] - d["closed_form"]) < 1e-9


def test_integrate_nonconvergence_exit_code(capsys):
    assert main(["integrate", "--omega", "03", "--tol", "1e-12", "--max-evals", "10000"]) == 3
    assert "best estimate" in capsys.readouterr().err


def test_flag_errors_exit_2(capsys):
    for argv in (["bogus"], ["analytic", "--graph", "complete"], ["deviation", "--n", "5"],
                 ["integrate", "--omega", "99"], ["analytic", "--n", "x..y"]):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_simulate_is_reproducible(tmp_path, capsys):
    argv = ["simulate", "--graph", "complete", "--n", "5", "--N", "2500", "--seed", "3"]
    a = json.loads(run(capsys, *argv, "--partitions", "1"))
    b = json.loads(run(capsys, *argv, "--partitions", "4"))
    assert a["variance"] == b["variance"] and a["mean"] == b["mean"]
    s1, s2 = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, *argv, "--samples-csv", str(s1))
    run(capsys, *argv, "--samples-csv", str(s2), "--partitions", "3")
    body = lambda p: p.read_text().splitlines()[1:]  # noqa: E731
    assert body(s1) == body(s2)


def test_simulate_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"graph": "bipartite", "n1": 3, "n2": 3, "N": 500, "seed": 2}))
    d = json.loads(run(capsys, "simulate", "--config", str(cfg)))
    assert d["graph"] == "K_{3,3}" and d["N"] == 500
    cfg.write_text(json.dumps({"nonsense": 1}))
    with pytest.raises(SystemExit):
        main(["simulate", "--config", str(cfg)])


def test_simulate_edge_file(tmp_path, capsys):
    f = tmp_path / "g.txt"
    f.write_text("0 1\n2 3\n")
    d = json.loads(run(capsys, "simulate", "--graph", "edges", "--edges", str(f), "--N", "100"))
    assert d["q"] == 1


def test_census(capsys):
    rs = rows(run(capsys, "census", "--graph", "complete", "--n", "10", "--bruteforce"))
    f = {r["omega"]: int(r["f_omega"]) for r in rs}
    assert f["01"] == 151200 and all(r["f_omega"] == r["f_bruteforce"] for r in rs)


def test_estimate_types(capsys, tmp_path):
    out = tmp_path / "t.csv"
    assert main(["estimate-types", "--T", "50", "--seed", "1965", "-o", str(out)]) == 0
    text = out.read_text()
    assert "seed=1965" in text.splitlines()[0]
    assert len(rows(text)) == 9


def test_constants_file(tmp_path, capsys, published):
    p = tmp_path / "k.json"
    p.write_text(published.to_json())
    rs = rows(run(capsys, "deviation", "--complete", "--n", "123", "--constants", str(p)))
    assert rs[0]["sign"] == "-1"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "sphcross", "analytic", "--n", "4", "--constants", "published"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "0.234375" in r.stdout
    r = subprocess.run([sys.executable, "-m", "sphcross", "analytic", "--bad"],
                       capture_output=True, text=True)
    assert r.returncode == 2 and "usage" in r.stderr
