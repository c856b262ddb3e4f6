import json
import subprocess
import sys
from pathlib import Path

import pytest

from fsusy.cli import main, parse_config_file
from fsusy.errors import ConfigError

GOLDEN = Path(__file__).parent / "data" / "golden_report_k3.json"


def write_table(path, k, d):
    # partner energies evaluate f a few levels past the truncation edge
    lines = ["s,n,f"]
    for s in range(k):
        for n in range(-k, d + k + 1):
            lines.append(f"{s},{n},1.0")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class TestParseConfigFile:
    def test_values_comments_and_blanks(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# run settings\n"
            "\n"
            "k = 3\n"
            "d=12\n"
            "tolerance = 1e-9\n"
            "c1 = 0.5\n",
            encoding="utf-8",
        )
        assert parse_config_file(str(cfg)) == {
            "k": "3", "d": "12", "tolerance": "1e-9", "c1": "0.5",
        }

    def test_missing_equals(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("k 3\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="expected key = value"):
            parse_config_file(str(cfg))

    def test_unknown_key(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("order = 3\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="unknown key 'order'"):
            parse_config_file(str(cfg))

    def test_duplicate_key(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("k = 3\nk = 4\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="duplicate key 'k'"):
            parse_config_file(str(cfg))

    def test_missing_file_exits_2(self, tmp_path, capsys):
        assert main(["verify", "--config", str(tmp_path / "absent.cfg")]) == 2
        assert "cannot read config file" in capsys.readouterr().err


def report_tolerance(tmp_path, argv, monkeypatch=None, env=None):
    if monkeypatch is not None and env is not None:
        monkeypatch.setenv("FSUSY_TOLERANCE", env)
    out = tmp_path / "report.json"
    code = main(argv + ["--out_report", str(out)])
    assert code == 0
    return json.loads(out.read_text(encoding="utf-8"))["config"]["tolerance"]


class TestPrecedence:
    BASE = ["verify", "--k", "3", "--d", "12"]

    def test_environment_sets_tolerance(self, tmp_path, monkeypatch):
        tol = report_tolerance(tmp_path, list(self.BASE), monkeypatch, "1e-8")
        assert tol == 1e-8

    def test_file_overrides_environment(self, tmp_path, monkeypatch):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("tolerance = 1e-7\n", encoding="utf-8")
        argv = self.BASE + ["--config", str(cfg)]
        assert report_tolerance(tmp_path, argv, monkeypatch, "1e-8") == 1e-7

    def test_flag_overrides_file(self, tmp_path, monkeypatch):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("tolerance = 1e-7\n", encoding="utf-8")
        argv = self.BASE + ["--config", str(cfg), "--tolerance", "1e-6"]
        assert report_tolerance(tmp_path, argv, monkeypatch, "1e-8") == 1e-6

    def test_file_supplies_required_keys(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("k = 3\nd = 12\n", encoding="utf-8")
        assert main(["verify", "--config", str(cfg)]) == 0
        assert "verdict: pass" in capsys.readouterr().out

    def test_invalid_environment_value_exits_2(self, monkeypatch, capsys):
        monkeypatch.setenv("FSUSY_TOLERANCE", "tight")
        assert main(list(self.BASE)) == 2
        assert "invalid value" in capsys.readouterr().err


class TestSpecSelection:
    def test_sector_constant_flags(self, tmp_path):
        out = tmp_path / "report.json"
        code = main(["verify", "--k", "3", "--d", "12",
                     "--c0", "2.0", "--c1", "0.5", "--out_report", str(out)])
        assert code == 0
        config = json.loads(out.read_text(encoding="utf-8"))["config"]
        assert config["family"] == "constant"
        # unset sectors keep the default weight
        assert config["constants"] == [2.0, 0.5, 1.0]

    def test_sector_constant_out_of_range(self, capsys):
        code = main(["verify", "--k", "2", "--d", "10", "--c5", "1.0"])
        assert code == 2
        assert "outside 0..1" in capsys.readouterr().err

    def test_affine_needs_both_coefficients(self, capsys):
        code = main(["verify", "--k", "3", "--d", "12", "--a", "1.0"])
        assert code == 2
        assert "needs both a and b" in capsys.readouterr().err

    def test_affine_flags_select_family(self, tmp_path):
        out = tmp_path / "report.json"
        code = main(["verify", "--k", "3", "--d", "12",
                     "--a", "0.0", "--b", "1.0", "--out_report", str(out)])
        assert code == 0
        config = json.loads(out.read_text(encoding="utf-8"))["config"]
        assert config["family"] == "affine"
        assert (config["a"], config["b"]) == (0.0, 1.0)

    def test_table_family_from_csv(self, tmp_path):
        table = tmp_path / "structure.csv"
        write_table(table, 2, 10)
        out = tmp_path / "report.json"
        code = main(["verify", "--k", "2", "--d", "10",
                     "--table", str(table), "--out_report", str(out)])
        assert code == 0
        config = json.loads(out.read_text(encoding="utf-8"))["config"]
        assert config["family"] == "table"
        assert config["table_size"] == 2 * (10 + 2 * 2 + 1)

    def test_family_flag_is_validated_by_parser(self, capsys):
        with pytest.raises(SystemExit):
            main(["verify", "--k", "3", "--d", "12", "--family", "bogus"])
        assert "invalid choice" in capsys.readouterr().err


class TestExitCodes:
    def test_passing_run_exits_0(self, capsys):
        assert main(["verify", "--k", "3", "--d", "12"]) == 0
        out = capsys.readouterr().out
        assert "verdict: pass" in out
        assert "[FAIL]" not in out

    def test_invalid_order_exits_2(self, capsys):
        assert main(["verify", "--k", "1", "--d", "12"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_unreachable_tolerance_exits_1(self, capsys):
        code = main(["verify", "--k", "3", "--d", "12", "--tolerance", "1e-18"])
        assert code == 1
        assert "verdict: fail" in capsys.readouterr().out

    def test_spectrum_requires_output_path(self, capsys):
        assert main(["spectrum", "--k", "3", "--d", "8"]) == 2
        assert "out_spectrum" in capsys.readouterr().err

    def test_spectrum_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "spectrum.csv"
        code = main(["spectrum", "--k", "3", "--d", "8",
                     "--out_spectrum", str(out)])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "s,n,energy,replica_s"
        assert len(lines) == 1 + 3 * 8 + 2 * 2 * 8

    def test_dump_requires_output_directory(self, capsys):
        assert main(["dump", "--k", "2", "--d", "6"]) == 2
        assert "out_operators" in capsys.readouterr().err

    def test_dump_writes_matrix_market_files(self, tmp_path, capsys):
        out_dir = tmp_path / "ops"
        code = main(["dump", "--k", "2", "--d", "6",
                     "--out_operators", str(out_dir)])
        assert code == 0
        names = sorted(p.name for p in out_dir.iterdir())
        assert "Xm.mtx" in names
        assert "q2m.mtx" in names
        header = (out_dir / "H.mtx").read_text(encoding="utf-8").splitlines()[0]
        assert header.startswith("%%MatrixMarket")


class TestSweep:
    def test_grid_reports_and_index(self, tmp_path, capsys):
        out_dir = tmp_path / "sweep"
        code = main(["sweep", "--k", "3", "--d", "10",
                     "--a-range", "0", "1", "2", "--b-range", "1", "1", "1",
                     "--out-dir", str(out_dir)])
        assert code == 0
        index = json.loads((out_dir / "index.json").read_text(encoding="utf-8"))
        assert index["k"] == 3 and index["d"] == 10
        assert [p["a"] for p in index["points"]] == [0.0, 1.0]
        for point in index["points"]:
            assert point["verdict"] == "pass"
            assert point["error"] is None
            assert (out_dir / point["path"]).exists()
        assert "2/2 points pass" in capsys.readouterr().out

    def test_failing_point_exits_1(self, tmp_path, capsys):
        out_dir = tmp_path / "sweep"
        code = main(["sweep", "--k", "5", "--d", "10",
                     "--a-range", "0", "0", "1", "--b-range", "1", "1", "1",
                     "--out-dir", str(out_dir)])
        assert code == 1
        index = json.loads((out_dir / "index.json").read_text(encoding="utf-8"))
        assert index["points"][0]["verdict"] == "fail"
        assert "0/1 points pass" in capsys.readouterr().out

    def test_degenerate_point_fails_with_construction_entry(self, tmp_path, capsys):
        out_dir = tmp_path / "sweep"
        code = main(["sweep", "--k", "3", "--d", "10",
                     "--a-range", "0", "0", "1", "--b-range", "-1", "-1", "1",
                     "--out-dir", str(out_dir)])
        assert code == 1
        index = json.loads((out_dir / "index.json").read_text(encoding="utf-8"))
        point = index["points"][0]
        assert point["verdict"] == "fail"
        report = json.loads((out_dir / point["path"]).read_text(encoding="utf-8"))
        assert report["entries"][0]["name"] == "construction.representation"
        assert report["entries"][0]["error"]

    def test_bad_step_count_exits_2(self, tmp_path, capsys):
        code = main(["sweep", "--k", "3", "--d", "10",
                     "--a-range", "0", "1", "0", "--b-range", "1", "1", "1",
                     "--out-dir", str(tmp_path / "sweep")])
        assert code == 2
        assert "step count" in capsys.readouterr().err

    def test_parallel_jobs_match_serial(self, tmp_path):
        serial, parallel = tmp_path / "serial", tmp_path / "parallel"
        argv = ["sweep", "--k", "2", "--d", "8",
                "--a-range", "0", "1", "2", "--b-range", "1", "1", "1"]
        assert main(argv + ["--out-dir", str(serial)]) == 0
        assert main(argv + ["--out-dir", str(parallel), "--jobs", "2"]) == 0
        load = lambda p: json.loads((p / "index.json").read_text(encoding="utf-8"))
        assert load(serial) == load(parallel)


class TestGoldenReport:
    def test_matches_golden_modulo_volatile_fields(self, tmp_path):
        out = tmp_path / "report.json"
        assert main(["verify", "--k", "3", "--d", "12",
                     "--out_report", str(out)]) == 0
        got = json.loads(out.read_text(encoding="utf-8"))
        want = json.loads(GOLDEN.read_text(encoding="utf-8"))
        for volatile in ("generated_at", "version"):
            got.pop(volatile), want.pop(volatile)
        assert got["config"] == want["config"]
        assert got["verdict"] == want["verdict"] == "pass"
        assert len(got["entries"]) == len(want["entries"])
        for g, w in zip(got["entries"], want["entries"]):
            residual = g.pop("residual"), w.pop("residual")
            assert g == w
            # residuals are round-off sized and may drift across BLAS builds
            assert residual[0] == pytest.approx(residual[1], abs=1e-12)


class TestModuleEntryPoint:
    def test_python_dash_m_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "fsusy", "verify", "--k", "2", "--d", "8"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "verdict: pass" in proc.stdout
