import csv
import json
import math

import numpy as np
import pytest

from lossy_witness.cli import (
    ConfigError,
    EXIT_ACCEPTANCE,
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    OUT_DIR_ENV,
    build_config,
    fmt,
    main,
)


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def run_cli(*argv):
    return main([str(a) for a in argv])


class TestConfig:
    def test_defaults(self):
        cfg = build_config("fig1")
        assert len(cfg.values("sigma")) == 12
        assert cfg.values("sigma")[0] == 0.25

    def test_linear_range(self):
        cfg = build_config("fig2", {"Gamma": [0.5, 1.5, 3]})
        assert cfg.values("Gamma") == (0.5, 1.0, 1.5)

    @pytest.mark.parametrize(
        "mode,override",
        [
            ("fig1", {"sigma": 0.0}),
            ("fig2", {"Gamma": [-1, 1, 3]}),
            ("bell-overlap", {"d": 1}),
            ("bell-overlap", {"d": 2.5}),
            ("qudit-witness", {"p": 1.5}),
            ("fig1", {"sigma": [1, 2, 0]}),
            ("fig1", {"sigma": [1, 2]}),
            ("fig1", {"colour": "red"}),
            ("qudit-witness", {"qudit_input": "ghz"}),
            ("nonsense", {}),
        ],
    )
    def test_rejects(self, mode, override):
        with pytest.raises(ConfigError):
            build_config(mode, override)

    def test_fmt(self):
        assert fmt(0.1) == "0.10000000000000001"
        assert fmt(True) == "true"
        assert fmt(3) == "3"
        assert fmt(None) == ""


class TestFig1:
    def test_surface(self, tmp_path):
        out = tmp_path / "fig1.csv"
        assert run_cli("fig1", "--out", out) == EXIT_OK
        rows = read_rows(out)
        assert list(rows[0]) == ["sigma", "Sigma", "purity_input", "purity_output_limit"]
        assert len(rows) == 144
        table = {(float(r["sigma"]), float(r["Sigma"])): r for r in rows}
        for (s, S), r in table.items():
            if s == S:
                assert float(r["purity_input"]) == 1.0
                assert float(r["purity_output_limit"]) == 1.0
        assert float(table[(1.0, 2.0)]["purity_input"]) == pytest.approx(0.8, abs=1e-15)
        # both surfaces fall off moving sigma away from the diagonal
        for key in ("purity_input", "purity_output_limit"):
            line = [float(table[(s, 0.5)][key]) for s in np.arange(2, 13) * 0.25]
            assert np.all(np.diff(line) <= 0)

    def test_raw_file_format(self, tmp_path):
        out = tmp_path / "f.csv"
        run_cli("fig1", "--sigma", "1", "--Sigma", "2", "--out", out)
        raw = out.read_bytes()
        assert b"\r" not in raw
        limit = format(0.5 * (1 / math.cosh(6) ** 2 + 1), ".17g")
        assert raw.decode() == f"sigma,Sigma,purity_input,purity_output_limit\n1,2,0.80000000000000004,{limit}\n"


class TestFig2:
    def test_curve(self, tmp_path):
        out = tmp_path / "fig2.csv"
        assert run_cli("fig2", "--Gamma", 0.01, 4, 400, "--out", out) == EXIT_OK
        rows = read_rows(out)
        gammas = np.array([float(r["Gamma"]) for r in rows])
        extreme = np.array([float(r["purity_extreme"]) for r in rows])
        assert extreme[0] == pytest.approx(1.0, abs=1e-6)
        assert np.all(np.diff(extreme) <= 0)
        assert np.all(extreme[gammas >= 1.5] < 0.501)

    def test_gamma_one_point_five(self, tmp_path):
        out = tmp_path / "fig2.csv"
        run_cli("fig2", "--Gamma", 1.5, "--out", out)
        (row,) = read_rows(out)
        assert float(row["purity_extreme"]) == pytest.approx(0.5 * (1 / np.cosh(4.5) ** 2 + 1), abs=1e-15)
        assert float(row["purity_extreme"]) == pytest.approx(0.50025, abs=1e-5)
        assert float(row["purity_output"]) > float(row["purity_extreme"])


class TestBellOverlap:
    def test_rows(self, tmp_path, capsys):
        out = tmp_path / "b.csv"
        assert run_cli("bell-overlap", "--out", out) == EXIT_OK
        rows = read_rows(out)
        assert rows[0]["d"] == "2" and float(rows[0]["overlap"]) == pytest.approx(1.0, abs=1e-12)
        assert rows[-1]["d"] == "2000" and float(rows[-1]["deviation"]) < 5e-3
        assert "d=2000" in capsys.readouterr().err


class TestWitness:
    def test_cv(self, tmp_path):
        out = tmp_path / "w.csv"
        assert run_cli("witness", "--Gamma", 1, "--out", out) == EXIT_OK
        for r in read_rows(out):
            if r["sigma"] == r["Sigma"]:
                assert r["entangled"] == "false" and float(r["concurrence"]) == 0.0
            else:
                assert r["entangled"] == "true"

    def test_cv_example(self, tmp_path):
        out = tmp_path / "w.csv"
        run_cli("witness", "--mode", "cv-witness", "--sigma", 2, "--Sigma", 0.5, "--Gamma", 1, "--out", out)
        (row,) = read_rows(out)
        assert row["status"] == "ok" and row["entangled"] == "true"

    def test_degenerate_rows_are_kept(self, tmp_path):
        out = tmp_path / "w.csv"
        run_cli("witness", "--sigma", 40, "--Sigma", 40, 41, 2, "--Gamma", 40, "--out", out)
        rows = read_rows(out)
        assert [r["status"] for r in rows] == ["degenerate-projection"] * 2
        assert rows[0]["concurrence"] == ""

    def test_qudit_bell(self, tmp_path):
        out = tmp_path / "q.csv"
        run_cli("witness", "--mode", "qudit-witness", "--qudit-input", "max-entangled", "--d", 2, "--out", out)
        (row,) = read_rows(out)
        assert float(row["concurrence"]) == pytest.approx(1.0, abs=1e-12)

    def test_qudit_random_seeded(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["witness", "--mode", "qudit-witness", "--qudit-input", "random-separable", "--samples", 5]
        run_cli(*args, "--seed", 7, "--out", a)
        run_cli(*args, "--seed", 7, "--out", b)
        assert a.read_bytes() == b.read_bytes()
        assert all(r["entangled"] == "false" for r in read_rows(a))

    def test_isotropic_columns(self, tmp_path):
        out = tmp_path / "q.csv"
        run_cli("witness", "--mode", "qudit-witness", "--d", 3, "--p", 0, 1, 5, "--out", out)
        rows = read_rows(out)
        assert [float(r["p"]) for r in rows] == [0, 0.25, 0.5, 0.75, 1]
        assert rows[-1]["entangled"] == "true"


class TestOracleCheck:
    def test_standard_grid_passes(self, tmp_path):
        out = tmp_path / "o.csv"
        code = run_cli("oracle-check", "--sigma", 0.5, 3, 3, "--Sigma", 0.25, "--Gamma", 0.5, 1, 2, "--out", out)
        assert code == EXIT_OK
        rows = read_rows(out)
        assert all(r["status"] == "ok" and float(r["oracle_deviation"]) < 1e-5 for r in rows)

    def test_coarse_grid_fails(self, tmp_path):
        out = tmp_path / "o.csv"
        code = run_cli("oracle-check", "--sigma", 2, "--Sigma", 0.5, "--Gamma", 1, "--extent-sigmas", 0.5, "--out", out)
        assert code == EXIT_ACCEPTANCE

    def test_equal_widths_noise(self, tmp_path):
        out = tmp_path / "o.csv"
        run_cli("oracle-check", "--sigma", 1.5, "--Sigma", 1.5, "--Gamma", 0.25, 4, 2, "--out", out)
        assert all(float(r["oracle_deviation"]) < 1e-8 for r in read_rows(out))

    def test_grid_too_large_row(self, tmp_path):
        out = tmp_path / "o.csv"
        code = run_cli("oracle-check", "--sigma", 3, "--Sigma", 0.25, "--Gamma", 1, "--points-per-sigma", 64, "--out", out)
        assert code == EXIT_ACCEPTANCE
        assert read_rows(out)[0]["status"] == "grid-too-large"


class TestPlumbing:
    def test_json_config_and_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        out = tmp_path / "fig2.csv"
        cfg.write_text(json.dumps({"mode": "fig2", "Gamma": {"values": [0.5, 1.0]}, "sigma": 3.0, "output_path": str(out)}))
        assert run_cli("fig2", "--config", cfg, "--Sigma", 0.25) == EXIT_OK
        rows = read_rows(out)
        assert [(r["Gamma"], r["sigma"], r["Sigma"]) for r in rows] == [("0.5", "3", "0.25"), ("1", "3", "0.25")]

    def test_mode_mismatch(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"mode": "fig1"}))
        assert run_cli("fig2", "--config", cfg) == EXIT_CONFIG

    def test_bad_json(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{")
        assert run_cli("fig1", "--config", cfg) == EXIT_CONFIG

    def test_missing_config_file(self, tmp_path):
        assert run_cli("fig1", "--config", tmp_path / "nope.json") == EXIT_IO

    def test_invalid_range(self, tmp_path):
        assert run_cli("fig1", "--sigma", -1, "--out", tmp_path / "x.csv") == EXIT_CONFIG
        assert not (tmp_path / "x.csv").exists()

    def test_unwritable(self, tmp_path, capsys):
        bad = tmp_path / "missing" / "x.csv"
        assert run_cli("fig1", "--out", bad) == EXIT_IO
        assert str(bad) in capsys.readouterr().err

    def test_argparse_errors_exit_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["fig1", "--sigma"])
        assert exc.value.code == 2

    def test_env_default_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv(OUT_DIR_ENV, str(tmp_path))
        assert run_cli("fig1", "--sigma", 1, "--Sigma", 1) == EXIT_OK
        assert (tmp_path / "fig1.csv").exists()

    def test_parallel_matches_serial(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli("witness", "--Gamma", 1, 2, 2, "--out", a)
        run_cli("witness", "--Gamma", 1, 2, 2, "--jobs", 3, "--out", b)
        assert a.read_bytes() == b.read_bytes()
