"""Command-line interface: exit codes, formats, file outputs, determinism."""

import csv
import io
import json
import os
import subprocess
import sys

import pytest

from crossvar.cli import main
from goldens import EQUAL_SIZE_DATASETS, EQUAL_SIZE_DECISIONS, EQUAL_SIZE_EXACT_P


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


class TestExitCodes:
    def test_accept_and_reject_both_exit_zero(self, capsys):
        for name in ("ds1", "ds13"):
            code, _, _ = run_cli(capsys, "test", "--dataset", name)
            assert code == 0

    @pytest.mark.parametrize(
        "argv",
        [
            ("test", "--dataset", "nope"),
            ("test", "--dataset", "ds4"),  # unequal sizes, no policy
            ("test",),  # no input at all
            ("test", "--dataset", "ds1", "--x", "whatever"),  # two inputs
            ("dist", "--which", "tstar-quantile", "--p", "1.0", "--n", "5"),
            ("dist", "--which", "tstar-pdf", "--p", "0.5", "--n", "5"),
            ("dist", "--which", "tstar-cdf", "--n", "5"),  # no evaluation point
            ("dist", "--which", "tstar-cdf", "--t", "0.5", "--grid", "0.1,0.2", "--n", "5"),
            ("dist", "--which", "general-cdf", "--t", "0.5", "--n", "5"),  # no sigmas
            ("dist", "--which", "tstar-cdf", "--t", "0.5", "--n", "1"),
            ("power", "--preset", "paper-fig9", "--out", "x"),
            ("power", "--out", "x"),  # manual mode without --n/--sigma
            ("type1", "--preset", "paper-table9", "--out", "x"),
            ("datasets", "--name", "ds99"),
        ],
    )
    def test_usage_errors_exit_two(self, capsys, argv):
        code, _, err = run_cli(capsys, *argv)
        assert code == 2
        assert "error:" in err
        assert not os.path.exists("x")  # a rejected run must not create --out

    def test_degenerate_input_exits_three(self, capsys, tmp_path):
        path = tmp_path / "flat.csv"
        path.write_text("x,y\n1,2\n1,2\n1,2\n")
        code, _, err = run_cli(capsys, "test", "--input", str(path))
        assert code == 3
        assert "error:" in err

    def test_malformed_csv(self, capsys, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,y\n1,2\nfoo,bar\n")
        code, _, _ = run_cli(capsys, "test", "--input", str(bad))
        assert code == 2
        wide = tmp_path / "wide.csv"
        wide.write_text("1,2,3\n4,5,6\n")
        code, _, _ = run_cli(capsys, "test", "--input", str(wide))
        assert code == 2


class TestTestCommand:
    def test_json_shape(self, capsys):
        code, out, _ = run_cli(
            capsys, "test", "--dataset", "ds1", "--format", "json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["manifest"]["command"] == "test"
        assert doc["manifest"]["flags"]["dataset"] == "ds1"
        methods = [t["method"] for t in doc["tests"]]
        assert methods == ["CROSSVAR", "POOLED_T", "F_VARIANCE"]
        assert doc["tests"][0]["p_value"] == pytest.approx(
            EQUAL_SIZE_EXACT_P["ds1"], abs=5e-7
        )

    def test_csv_format_parses(self, capsys):
        code, out, _ = run_cli(capsys, "test", "--dataset", "ds1", "--format", "csv")
        assert code == 0
        rows = parse_csv(out)
        assert [r["method"] for r in rows] == ["CROSSVAR", "POOLED_T", "F_VARIANCE"]
        assert float(rows[0]["statistic"]) == pytest.approx(39.0 / 47.0, abs=1e-12)

    def test_text_rounds_small_p_to_three_places(self, capsys):
        code, out, _ = run_cli(capsys, "test", "--dataset", "ds7")
        assert code == 0
        assert "p=0.000" in out

    def test_table_of_equal_size_datasets(self, capsys):
        # every bundled equal-size pair reproduces its frozen p and decision
        for name in EQUAL_SIZE_DATASETS:
            _, out, _ = run_cli(
                capsys, "test", "--dataset", name, "--alpha", "0.01",
                "--format", "json",
            )
            rec = json.loads(out)["tests"][0]
            assert rec["p_value"] == pytest.approx(EQUAL_SIZE_EXACT_P[name], abs=5e-7)
            assert rec["decision"] == EQUAL_SIZE_DECISIONS[name]

    def test_unequal_variance_warning(self, capsys):
        _, _, err = run_cli(capsys, "test", "--dataset", "ds13")
        assert "F test rejects" in err

    def test_file_inputs(self, capsys, tmp_path):
        xs = tmp_path / "x.txt"
        ys = tmp_path / "y.txt"
        xs.write_text("".join(f"{v}\n" for v in (33, 31, 34, 38, 32, 28)))
        ys.write_text("".join(f"{v}\n" for v in (35, 42, 43, 41)))
        code, out, _ = run_cli(
            capsys, "test", "--x", str(xs), "--y", str(ys),
            "--n-policy", "avg", "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["tests"][0]["p_value"] == pytest.approx(0.008536, abs=5e-7)
        assert doc["manifest"]["input_digests"]  # hashes recorded

    def test_two_column_input(self, capsys, tmp_path):
        path = tmp_path / "pairs.csv"
        rows = zip((5, 7, 5, 3, 5, 3, 3, 9), (8, 1, 4, 6, 6, 4, 1, 2))
        path.write_text("x,y\n" + "".join(f"{a},{b}\n" for a, b in rows))
        code, out, _ = run_cli(
            capsys, "test", "--input", str(path), "--format", "json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["tests"][0]["p_value"] == pytest.approx(
            EQUAL_SIZE_EXACT_P["ds1"], abs=5e-7
        )


class TestDistCommand:
    def test_cdf_golden(self, capsys):
        code, out, _ = run_cli(
            capsys, "dist", "--which", "tstar-cdf", "--t", "0.8298", "--n", "8"
        )
        assert code == 0
        row = parse_csv(out)[0]
        assert float(row["output"]) == pytest.approx(0.4110898158890973, abs=1e-12)
        assert row["method"] == "closed-form"

    def test_quantile_golden(self, capsys):
        _, out, _ = run_cli(
            capsys, "dist", "--which", "tstar-quantile", "--p", "0.05", "--n", "5"
        )
        row = parse_csv(out)[0]
        assert float(row["output"]) == pytest.approx(0.2733115978, abs=1e-9)

    def test_grid_mode(self, capsys):
        _, out, _ = run_cli(
            capsys, "dist", "--which", "tstar-pdf", "--grid", "0.2,0.5,0.9",
            "--n", "5",
        )
        rows = parse_csv(out)
        assert [float(r["input"]) for r in rows] == [0.2, 0.5, 0.9]
        assert all(float(r["output"]) > 0 for r in rows)

    def test_general_cdf_reports_error_estimate(self, capsys):
        code, out, _ = run_cli(
            capsys, "dist", "--which", "general-cdf", "--t", "0.5", "--n", "5",
            "--sigma-x2", "1", "--sigma-y2", "2",
        )
        assert code == 0
        row = parse_csv(out)[0]
        assert float(row["output"]) == pytest.approx(0.23704, abs=5e-5)
        assert row["method"] == "quadrature"
        assert 0 < float(row["error_estimate"]) < 1e-8


class TestDatasetsCommand:
    def test_listing_has_all_fourteen(self, capsys):
        code, out, _ = run_cli(capsys, "datasets")
        assert code == 0
        lines = [l for l in out.splitlines() if l.startswith("ds")]
        assert len(lines) == 14

    def test_raw_dump(self, capsys):
        code, out, _ = run_cli(capsys, "datasets", "--name", "ds1")
        assert code == 0
        assert out.splitlines()[0] == "x,y"
        assert out.splitlines()[1] == "5.0,8.0"


class TestStudyOutputs:
    def test_power_writes_report_bundle(self, capsys, tmp_path):
        out_dir = tmp_path / "run"
        code, out, _ = run_cli(
            capsys, "power", "--n", "5", "--sigma", "1", "--reps", "200",
            "--mu-grid", "0,0.5", "--seed", "7", "--out", str(out_dir),
        )
        assert code == 0
        for suffix in ("power.json", "power.csv", "power_plot.csv", "power.png"):
            assert (out_dir / suffix).exists(), suffix
        doc = json.loads((out_dir / "power.json").read_text())
        assert doc["manifest"]["seed"] == 7
        assert [r["mu_y"] for r in doc["rows"]] == [0.0, 0.5]
        assert 0.0 < doc["threshold"] < 1.0

    def test_power_rerun_is_byte_identical(self, capsys, tmp_path):
        args = ("power", "--n", "5", "--sigma", "1", "--reps", "200",
                "--mu-grid", "0,0.5", "--seed", "7")
        a, b = tmp_path / "a", tmp_path / "b"
        run_cli(capsys, *args, "--out", str(a))
        run_cli(capsys, *args, "--out", str(b))
        for suffix in ("power.json", "power.csv", "power_plot.csv", "power.png"):
            assert (a / suffix).read_bytes() == (b / suffix).read_bytes(), suffix

    def test_worker_count_does_not_change_output_bytes(self, tmp_path):
        # separate interpreters with different pool sizes, above the
        # parallel threshold, must produce identical reports
        results = []
        for workers, sub in (("1", "w1"), ("4", "w4")):
            out_dir = tmp_path / sub
            proc = subprocess.run(
                [sys.executable, "-m", "crossvar.cli", "power", "--n", "5",
                 "--sigma", "1", "--reps", "4500", "--mu-grid", "0",
                 "--seed", "7", "--out", str(out_dir)],
                capture_output=True, text=True,
                env={"PATH": "/usr/bin:/bin", "CROSSVAR_MAX_WORKERS": workers,
                     "MPLBACKEND": "Agg"},
            )
            assert proc.returncode == 0, proc.stderr
            results.append((out_dir / "power.json").read_bytes())
        assert results[0] == results[1]

    def test_type1_writes_report_bundle(self, capsys, tmp_path):
        out_dir = tmp_path / "t1"
        code, _, _ = run_cli(
            capsys, "type1", "--n", "5,25", "--sigma", "1.25", "--mu", "9.2",
            "--reps", "200", "--seed", "11", "--out", str(out_dir),
        )
        assert code == 0
        for suffix in ("type1.json", "type1.csv", "type1_plot.csv", "type1.png"):
            assert (out_dir / suffix).exists(), suffix
        doc = json.loads((out_dir / "type1.json").read_text())
        assert [r["n"] for r in doc["rows"]] == [5, 25]
        assert doc["alphas"] == [0.05, 0.01]
        for row in doc["rows"]:
            assert set(row["rate_crossvar"]) == {"0.05", "0.01"}
            assert row["rate_crossvar"] == row["rate_t"]
