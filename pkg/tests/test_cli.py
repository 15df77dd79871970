import csv
import json
import os
import subprocess
import sys

import pytest

from systolab.cli import EXIT_BUDGET, EXIT_IO, EXIT_OK, EXIT_USAGE, main


def test_roots_single_type(capsys):
    assert main(["roots", "--type", "g", "--rank", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "N(G2) = 2" in out and "12 roots" in out


def test_roots_table_csv(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert main(["roots", "table", "--max-rank", "4", "--out", str(out)]) == EXIT_OK
    rows = list(csv.DictReader(out.open()))
    assert {r["type"] for r in rows} >= {"A4", "B4", "C4", "D4", "E8", "G2"}
    assert all(r["match"] == "true" for r in rows)


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["roots"],
        ["roots", "--type", "E", "--rank", "5"],
        ["roots", "table"],
        ["field", "reg", "--poly", "x^3 + y"],
        ["field", "reg", "--poly", "2x^3 - 1"],
        ["field", "reg", "--poly", "x^3 - 1"],
        ["gamma", "--prime", "9"],
        ["geom", "length", "--eigs", "1,-2,3"],
        ["geom", "length", "--eigs", "a,b"],
        ["sweep", "--primes", "0", "--cache", "c", "--csv", "o"],
        ["bogus"],
    ],
)
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == EXIT_USAGE


def test_field_json(capsys):
    assert main(["field", "reg", "--poly", "x^3 + x^2 - 2x - 1", "--json"]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["disc_field"] == 49 and d["certified"] is True
    assert abs(float(d["regulator"]) - 0.525454682146) < 1e-9


def test_gamma_json(capsys):
    assert main(["gamma", "--prime", "5", "--json"]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["trace"] == 53 and d["minor_sum"] == 678 and d["det"] == 1
    assert d["agrees_with_printed"] is False and d["regularity"]["r_regular"] is True


def test_geom_length(capsys, tmp_path):
    assert main(["geom", "length", "--eigs", "2,1,0.5"]) == EXIT_OK
    v = float(capsys.readouterr().out.split()[0])
    assert abs(v - (12 * 0.6931471805599453**2) ** 0.5) < 1e-12
    cfg = tmp_path / "c.cfg"
    cfg.write_text("metric_c = 2\n")
    assert main(["geom", "length", "--eigs", "2,1,0.5", "--config", str(cfg)]) == EXIT_OK
    bad = tmp_path / "bad.cfg"
    bad.write_text("nope = 1\n")
    assert main(["geom", "length", "--eigs", "2,1,0.5", "--config", str(bad)]) == EXIT_USAGE
    assert main(["geom", "length", "--eigs", "2,1,0.5", "--config", str(tmp_path / "missing")]) == EXIT_IO


def test_sweep_and_plot(tmp_path, capsys):
    cache, out, svg = tmp_path / "c.jsonl", tmp_path / "o.csv", tmp_path / "f.svg"
    js = tmp_path / "o.json"
    argv = ["sweep", "--primes", "4", "--prec", "128", "--cache", str(cache), "--csv", str(out), "--json", str(js)]
    assert main(argv) == EXIT_OK
    assert "4 computed" in capsys.readouterr().err
    assert main(argv) == EXIT_OK
    assert "4 from cache" in capsys.readouterr().err
    assert len(json.loads(js.read_text())) == 4
    assert main(["plot", "--in", str(out), "--out", str(svg), "--x", "disc", "--envelopes"]) == EXIT_OK
    assert "points outside the fitted band: 0" in capsys.readouterr().out
    assert svg.read_text().startswith("<?xml")


def test_io_errors(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["sweep", "--primes", "1", "--prec", "128", "--cache", str(blocker / "c"), "--csv", str(tmp_path / "o")]) == EXIT_IO
    assert main(["plot", "--in", str(tmp_path / "missing.csv"), "--out", str(tmp_path / "x.svg")]) == EXIT_IO


def test_budget_exit_code(monkeypatch, tmp_path):
    import systolab.pipeline as pl

    real = pl.SweepConfig

    def tiny(**kw):
        return real(**{**kw, "unit_budget": 1})

    monkeypatch.setattr(pl, "SweepConfig", tiny)
    argv = ["sweep", "--primes", "1", "--prec", "128", "--cache", str(tmp_path / "c"), "--csv", str(tmp_path / "o")]
    assert main(argv) == EXIT_BUDGET


def test_console_script_and_forced_fallback():
    env = dict(os.environ, SYSTOLAB_PURE_PYTHON="1")
    r = subprocess.run([sys.executable, "-c", "from systolab import kernels; print(kernels.BACKEND)"], env=env, capture_output=True, text=True)
    assert r.stdout.strip() == "python"
    r = subprocess.run([sys.executable, "-m", "systolab.cli", "gamma"], capture_output=True, text=True)
    assert r.returncode == EXIT_USAGE
