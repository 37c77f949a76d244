import json
import math
import subprocess
import sys

import pytest

from phasegrover.cli import main, parse_phase
from phasegrover.collapsed import TWO_PI


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_report(text):
    report = {}
    for line in text.strip().splitlines():
        key, _, value = line.partition("=")
        report[key] = value
    return report


def parse_csv(text):
    lines = [l for l in text.strip().splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    return header, rows


class TestParsePhase:
    @pytest.mark.parametrize(
        "text,value",
        [
            ("pi", math.pi),
            ("PI", math.pi),
            ("pi/2", math.pi / 2),
            ("pi/3", math.pi / 3),
            ("2pi", TWO_PI),
            ("2*pi", TWO_PI),
            ("0.5pi", math.pi / 2),
            ("2pi/4", math.pi / 2),
            ("0", 0.0),
            ("1.25", 1.25),
        ],
    )
    def test_literals(self, text, value):
        assert parse_phase(text) == pytest.approx(value, abs=1e-15)

    def test_out_of_range_values_are_reduced(self):
        assert parse_phase("3pi") == pytest.approx(math.pi, abs=1e-12)
        assert parse_phase("-pi/2") == pytest.approx(1.5 * math.pi, abs=1e-12)
        assert parse_phase("-0.5") == pytest.approx(TWO_PI - 0.5, abs=1e-12)

    @pytest.mark.parametrize("text", ["quux", "pi/", "pi/0x2", "1..5", "", "nan"])
    def test_invalid(self, text):
        with pytest.raises(ValueError):
            parse_phase(text)


class TestRun:
    def test_quarter_density(self, capsys):
        code, out, _ = run_cli(capsys, ["run", "--n", "4", "--t", "1"])
        assert code == 0
        report = parse_report(out)
        assert report["n"] == "4"
        assert report["t"] == "1"
        assert float(report["gamma"]) == pytest.approx(math.pi, abs=1e-12)
        assert float(report["success_probability"]) == pytest.approx(1.0, abs=1e-9)
        assert report["oracle_queries"] == "1"

    def test_non_power_of_two(self, capsys):
        code, out, _ = run_cli(capsys, ["run", "--n", "6", "--t", "3"])
        assert code == 0
        report = parse_report(out)
        assert float(report["gamma"]) == pytest.approx(math.pi / 2, abs=1e-12)
        assert float(report["success_probability"]) == pytest.approx(1.0, abs=1e-9)

    def test_infeasible_exits_2_and_cites_requirement(self, capsys):
        code, _, err = run_cli(capsys, ["run", "--n", "8", "--t", "1"])
        assert code == 2
        assert "N/4" in err

    def test_oracle_file(self, capsys, tmp_path):
        path = tmp_path / "oracle.json"
        path.write_text('{"n": 4, "marked": [2]}')
        code, out, _ = run_cli(capsys, ["run", "--oracle", str(path)])
        assert code == 0
        assert parse_report(out)["t"] == "1"

    @pytest.mark.parametrize("engine", ["statevector", "collapsed", "both"])
    def test_engines(self, capsys, engine):
        code, out, _ = run_cli(
            capsys, ["run", "--n", "16", "--t", "5", "--engine", engine]
        )
        assert code == 0
        report = parse_report(out)
        assert report["engine"] == engine
        assert float(report["success_probability"]) == pytest.approx(1.0, abs=1e-9)

    def test_csv_artifact(self, capsys, tmp_path):
        out_path = tmp_path / "run.csv"
        code, _, _ = run_cli(
            capsys, ["run", "--n", "4", "--t", "2", "--out", str(out_path)]
        )
        assert code == 0
        header, rows = parse_csv(out_path.read_text())
        assert header == ["n", "t", "engine", "gamma", "success_probability", "oracle_queries"]
        assert rows[0]["n"] == "4"
        assert float(rows[0]["gamma"]) == pytest.approx(math.pi / 2, abs=1e-12)

    def test_json_artifact(self, capsys, tmp_path):
        out_path = tmp_path / "run.json"
        code, _, _ = run_cli(
            capsys,
            ["run", "--n", "4", "--t", "2", "--out", str(out_path), "--format", "json"],
        )
        assert code == 0
        doc = json.loads(out_path.read_text())
        assert doc["oracle_queries"] == 1
        assert doc["success_probability"] == pytest.approx(1.0, abs=1e-9)


class TestExitCodes:
    def test_missing_oracle_file(self, capsys):
        code, _, err = run_cli(capsys, ["run", "--oracle", "/nonexistent/oracle.json"])
        assert code == 1
        assert err

    def test_malformed_oracle_file(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{broken")
        code, _, _ = run_cli(capsys, ["run", "--oracle", str(path)])
        assert code == 1

    def test_no_oracle_given(self, capsys):
        code, _, _ = run_cli(capsys, ["run"])
        assert code == 1

    def test_oracle_and_counts_conflict(self, capsys, tmp_path):
        path = tmp_path / "oracle.json"
        path.write_text('{"n": 4, "marked": [0]}')
        code, _, _ = run_cli(capsys, ["run", "--oracle", str(path), "--n", "4"])
        assert code == 1

    def test_zero_marked_count(self, capsys):
        code, _, _ = run_cli(capsys, ["run", "--n", "4", "--t", "0"])
        assert code == 1

    def test_unknown_flag(self, capsys):
        assert main(["run", "--frobnicate"]) == 1

    def test_missing_command(self, capsys):
        assert main([]) == 1

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0

    def test_bad_phase_literal(self, capsys):
        code, _, _ = run_cli(
            capsys, ["trajectory", "--n", "4", "--t", "1", "--beta", "quux"]
        )
        assert code == 1

    def test_bad_grid(self, capsys):
        code, _, _ = run_cli(capsys, ["sweep", "--n", "4", "--t", "1", "--grid", "1"])
        assert code == 1

    def test_verify_max_n_floor(self, capsys):
        code, _, _ = run_cli(capsys, ["verify", "--max-n", "3"])
        assert code == 1

    def test_verify_impossible_tolerance(self, capsys):
        code, out, _ = run_cli(
            capsys, ["verify", "--max-n", "8", "--cases", "20", "--tol", "1e-30"]
        )
        assert code == 3
        assert "FAIL" in out


class TestTrajectory:
    def test_row_zero_is_uniform(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["trajectory", "--n", "4", "--t", "1", "--beta", "pi", "--gamma", "pi",
             "--steps", "2"],
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert len(rows) == 3
        assert rows[0]["step"] == "0"
        assert float(rows[0]["marked_re"]) == pytest.approx(0.5, abs=1e-15)
        assert float(rows[0]["unmarked_re"]) == pytest.approx(0.5, abs=1e-15)

    def test_first_step_is_certain_at_quarter_density(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["trajectory", "--n", "4", "--t", "1", "--steps", "1"],
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[1]["success_probability"]) == pytest.approx(1.0, abs=1e-9)

    def test_closed_form_column_only_for_half_turn(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["trajectory", "--n", "8", "--t", "2", "--steps", "3"],
        )
        header, rows = parse_csv(out)
        assert "closed_form_deviation" in header
        assert all(float(r["closed_form_deviation"]) < 1e-12 for r in rows)

        code, out, _ = run_cli(
            capsys,
            ["trajectory", "--n", "8", "--t", "2", "--steps", "3", "--gamma", "pi/2"],
        )
        header, _ = parse_csv(out)
        assert "closed_form_deviation" not in header

    def test_engines_agree(self, capsys):
        outputs = {}
        for engine in ("collapsed", "statevector"):
            code, out, _ = run_cli(
                capsys,
                ["trajectory", "--n", "12", "--t", "5", "--beta", "1.1",
                 "--gamma", "2.2", "--steps", "6", "--engine", engine],
            )
            assert code == 0
            _, outputs[engine] = parse_csv(out)
        for row_a, row_b in zip(outputs["collapsed"], outputs["statevector"]):
            for key in ("marked_re", "marked_im", "unmarked_re", "unmarked_im"):
                assert float(row_a[key]) == pytest.approx(float(row_b[key]), abs=1e-11)

    def test_json_format(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["trajectory", "--n", "4", "--t", "1", "--steps", "1", "--format", "json"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["n"] == 4
        assert len(doc["rows"]) == 2
        assert doc["rows"][1]["success_probability"] == pytest.approx(1.0, abs=1e-9)

    def test_all_marked_register_is_stationary_in_probability(self, capsys):
        code, out, _ = run_cli(
            capsys, ["trajectory", "--n", "4", "--t", "4", "--steps", "3"]
        )
        assert code == 0
        _, rows = parse_csv(out)
        for row in rows:
            assert float(row["success_probability"]) == pytest.approx(1.0, abs=1e-12)


class TestSweep:
    def test_argmin_hits_a_matched_zero(self, capsys):
        # gamma* = pi for N=8, t=2 lies on any odd grid; residual vanishes
        code, out, _ = run_cli(
            capsys, ["sweep", "--n", "8", "--t", "2", "--grid", "9"]
        )
        assert code == 0
        footer = [l for l in out.splitlines() if l.startswith("#")]
        assert len(footer) == 1
        parts = dict(p.split("=") for p in footer[0][1:].split() if "=" in p)
        gamma_star = math.pi
        spacing = TWO_PI / 8
        beta, gamma = float(parts["beta"]), float(parts["gamma"])
        residual = float(parts["unmarked_residual"])
        # either matched zero (gamma*, gamma*) or its reflection is fine
        hit = min(
            max(abs(beta - gamma_star), abs(gamma - gamma_star)),
            max(abs(beta - (TWO_PI - gamma_star)), abs(gamma - (TWO_PI - gamma_star))),
        )
        assert hit <= spacing + 1e-12
        assert residual < 1e-12

    def test_infeasible_density_floor_is_positive(self, capsys):
        # below quarter density no phase pair empties the unmarked class
        code, out, _ = run_cli(capsys, ["sweep", "--n", "8", "--t", "1", "--grid", "33"])
        assert code == 0
        footer = [l for l in out.splitlines() if l.startswith("#")][0]
        parts = dict(p.split("=") for p in footer[1:].split() if "=" in p)
        assert float(parts["unmarked_residual"]) > 0.01

    def test_zero_oracle_phase_keeps_uniform_success(self, capsys):
        code, out, _ = run_cli(capsys, ["sweep", "--n", "8", "--t", "2", "--grid", "5"])
        assert code == 0
        _, rows = parse_csv(out)
        for row in rows:
            if float(row["gamma"]) == 0.0:
                assert float(row["success_probability"]) == pytest.approx(
                    0.25, abs=1e-12
                )

    def test_row_count_and_header(self, capsys):
        code, out, _ = run_cli(capsys, ["sweep", "--n", "4", "--t", "1", "--grid", "7"])
        header, rows = parse_csv(out)
        assert header == ["beta", "gamma", "unmarked_residual", "success_probability"]
        assert len(rows) == 49

    def test_json_format(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["sweep", "--n", "8", "--t", "2", "--grid", "5", "--format", "json"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["grid"] == 5
        assert len(doc["rows"]) == 25
        assert "unmarked_residual" in doc["argmin"]

    def test_threads_do_not_change_output(self, capsys, tmp_path):
        texts = []
        for threads in ("1", "4"):
            out_path = tmp_path / f"sweep_{threads}.csv"
            code, _, _ = run_cli(
                capsys,
                ["sweep", "--n", "16", "--t", "4", "--grid", "33",
                 "--threads", threads, "--out", str(out_path)],
            )
            assert code == 0
            texts.append(out_path.read_bytes())
        assert texts[0] == texts[1]


class TestConfig:
    def test_config_supplies_defaults(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 4, "t": 1, "engine": "collapsed"}))
        code, out, _ = run_cli(capsys, ["run", "--config", str(cfg)])
        assert code == 0
        report = parse_report(out)
        assert report["engine"] == "collapsed"
        assert report["t"] == "1"

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 4, "t": 2}))
        code, out, _ = run_cli(capsys, ["run", "--config", str(cfg), "--t", "1"])
        assert code == 0
        assert parse_report(out)["t"] == "1"

    def test_unknown_config_key(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 4, "t": 1, "bogus": True}))
        code, _, _ = run_cli(capsys, ["run", "--config", str(cfg)])
        assert code == 1

    def test_config_phase_literals(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            json.dumps({"n": 8, "t": 2, "beta": "pi", "gamma": "pi", "steps": 2})
        )
        code, out, _ = run_cli(capsys, ["trajectory", "--config", str(cfg)])
        assert code == 0
        header, rows = parse_csv(out)
        assert len(rows) == 3
        assert "closed_form_deviation" in header


class TestVerifyCommand:
    def test_passes_and_prints_table(self, capsys):
        code, out, _ = run_cli(
            capsys, ["verify", "--max-n", "12", "--cases", "40"]
        )
        assert code == 0
        assert "unitarity" in out
        assert "all suites passed" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "phasegrover", "run", "--n", "4", "--t", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "success_probability=1" in proc.stdout
