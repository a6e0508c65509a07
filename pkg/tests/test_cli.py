import json
import math
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from qgatesim import cli


def run_cli(*argv):
    return cli.main(list(argv))


def write_table(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


class TestRunCsv:
    def test_columns_and_values(self, tmp_path):
        out = tmp_path / "trace.csv"
        assert run_cli("run", "--n", "3", "--marked", "011", "--output", str(out)) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "iteration,p_marked,entropy_bits"
        assert len(lines) == 4  # header + iterations 0..2
        row1 = lines[2].split(",")
        assert row1[0] == "1"
        assert float(row1[1]) == pytest.approx(25 / 32, abs=1e-12)
        row2 = lines[3].split(",")
        assert float(row2[1]) == pytest.approx(121 / 128, abs=1e-12)

    def test_seventeen_digit_round_trip(self, tmp_path):
        out = tmp_path / "trace.csv"
        run_cli("run", "--n", "4", "--marked", "0110", "--output", str(out))
        for line in out.read_text(encoding="utf-8").splitlines()[1:]:
            _, p, s = line.split(",")
            assert float(p) == float(format(float(p), ".17g"))
            assert len(p.replace("-", "").replace(".", "").replace("e", "")) <= 19

    def test_per_basis_columns(self, tmp_path):
        out = tmp_path / "trace.csv"
        assert run_cli(
            "run", "--n", "2", "--marked", "01", "--per-basis", "--output", str(out)
        ) == 0
        header = out.read_text(encoding="utf-8").splitlines()[0].split(",")
        assert header[:3] == ["iteration", "p_marked", "entropy_bits"]
        assert header[3:] == [f"p_{i:03b}" for i in range(8)]

    def test_stdout_trace_and_stderr_summary(self, capsys):
        assert run_cli("run", "--n", "2", "--marked", "01") == 0
        captured = capsys.readouterr()
        assert captured.out.startswith("iteration,p_marked,entropy_bits")
        assert "answer=01" in captured.err

    def test_summary_to_stdout_with_output_file(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        run_cli("run", "--n", "3", "--marked", "011", "--output", str(out))
        captured = capsys.readouterr()
        assert "answer=011" in captured.out
        assert "iterations=2" in captured.out


class TestRunJson:
    def load_schema(self):
        ref = resources.files("qgatesim") / "schemas" / "trace-v1.schema.json"
        return json.loads(ref.read_text(encoding="utf-8"))

    def test_schema_valid_document(self, tmp_path):
        out = tmp_path / "trace.json"
        assert run_cli(
            "run", "--n", "3", "--marked", "011,101", "--format", "json",
            "--per-basis", "--amplitudes", "--seed", "5", "--output", str(out),
        ) == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        jsonschema.validate(doc, self.load_schema())
        assert doc["schema"] == "qgatesim-trace/1"
        meta = doc["metadata"]
        assert meta["marked"] == ["011", "101"]
        assert meta["seed"] == 5 and meta["rng"] == "numpy-pcg64"
        rec = doc["records"][-1]
        assert set(rec["probabilities"]) == {f"{i:04b}" for i in range(16)}
        assert len(rec["amplitudes"]["0110"]) == 2

    def test_matrix_free_backend_trace(self, tmp_path):
        out = tmp_path / "trace.json"
        assert run_cli(
            "run", "--n", "64", "--marked", "0" * 63 + "1", "--backend", "collapsed",
            "--format", "json", "--output", str(out),
        ) == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        jsonschema.validate(doc, self.load_schema())
        assert doc["metadata"]["backend"] == "collapsed"
        assert doc["summary"]["p_marked"].startswith("0.9999") or doc["summary"][
            "p_marked"
        ].startswith("1")


class TestBackends:
    def test_both_mode_reports_agreement(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        assert run_cli(
            "run", "--n", "8", "--marked", "00001111", "--backend", "both",
            "--output", str(out),
        ) == 0
        captured = capsys.readouterr()
        assert "max_dev_p_marked=" in captured.out
        dev = float(captured.out.split("max_dev_p_marked=")[1].split()[0])
        assert dev < 1e-10

    def test_mismatch_exit_code(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setattr(cli, "BACKEND_AGREE_ATOL", -1.0)
        code = run_cli(
            "run", "--n", "3", "--marked", "011", "--backend", "both",
            "--output", str(tmp_path / "t.csv"),
        )
        assert code == 4
        assert "disagree" in capsys.readouterr().err

    def test_collapsed_rejects_deutsch_jozsa(self, capsys):
        assert run_cli(
            "run", "--n", "2", "--marked", "01", "--algorithm", "deutsch-jozsa",
            "--backend", "collapsed",
        ) == 2


class TestEntropyStopMode:
    def test_summary_reports_stop(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        assert run_cli(
            "run", "--n", "3", "--marked", "011", "--iterations", "entropy-stop",
            "--output", str(out),
        ) == 0
        captured = capsys.readouterr()
        assert "stop_iteration=2" in captured.out
        assert "iterations=2" in captured.out
        # trace keeps the overshoot record that witnessed the minimum
        assert len(out.read_text(encoding="utf-8").splitlines()) == 5

    def test_collapsed_entropy_stop(self, capsys):
        assert run_cli(
            "run", "--n", "10", "--marked", "0" * 10, "--backend", "collapsed",
            "--iterations", "entropy-stop",
        ) == 0
        assert "stop_iteration=25" in capsys.readouterr().err


class TestDeterminism:
    def test_csv_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["run", "--n", "4", "--marked", "0110", "--seed", "9"]
        assert run_cli(*args, "--output", str(a)) == 0
        assert run_cli(*args, "--output", str(b)) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_sample_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sample", "--n", "3", "--marked", "011", "--shots", "500", "--seed", "3"]
        assert run_cli(*args, "--output", str(a)) == 0
        assert run_cli(*args, "--output", str(b)) == 0
        assert a.read_bytes() == b.read_bytes()


class TestConfigErrors:
    def test_missing_oracle(self):
        assert run_cli("run", "--n", "3") == 2

    def test_marked_width_mismatch(self):
        assert run_cli("run", "--n", "3", "--marked", "01") == 2

    def test_inline_and_table_conflict(self, tmp_path, capsys):
        table = write_table(tmp_path, "f.json", {"n": 2, "marked": ["01"]})
        assert run_cli("run", "--n", "2", "--marked", "10", "--table", table) == 2
        assert "conflict" in capsys.readouterr().err

    def test_inline_and_table_agreement_ok(self, tmp_path):
        table = write_table(tmp_path, "f.json", {"n": 2, "marked": ["01"]})
        assert run_cli("run", "--n", "2", "--marked", "01", "--table", table) == 0

    def test_multi_output_table_rejected(self, tmp_path):
        rows = {f"{i:01b}": "00" for i in range(2)}
        table = write_table(tmp_path, "f.json", {"n": 1, "m": 2, "rows": rows})
        assert run_cli("run", "--table", table) == 2

    def test_bad_iterations(self):
        assert run_cli("run", "--n", "2", "--marked", "01", "--iterations", "soon") == 2
        assert run_cli("run", "--n", "2", "--marked", "01", "--iterations", "0") == 2

    def test_amplitudes_need_json(self):
        assert run_cli("run", "--n", "2", "--marked", "01", "--amplitudes") == 2

    def test_sample_rejects_entropy_stop(self):
        assert run_cli(
            "sample", "--n", "2", "--marked", "01", "--shots", "10",
            "--iterations", "entropy-stop",
        ) == 2

    def test_table_file_missing(self):
        assert run_cli("run", "--table", "/nonexistent/f.json") == 2


class TestCapacity:
    def test_dense_cap_exit_code(self, capsys):
        assert run_cli("run", "--n", "5", "--marked", "00000", "--dense-cap", "16") == 3
        assert "collapsed" in capsys.readouterr().err

    def test_large_n_needs_collapsed(self):
        assert run_cli("run", "--n", "14", "--marked", "0" * 14) == 3


class TestDump:
    def test_golden_oracle_blocks(self, tmp_path):
        out = tmp_path / "ops.json"
        assert run_cli("dump", "--n", "2", "--marked", "01", "--output", str(out)) == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        uf = doc["operators"]["uf"]
        assert uf["dim"] == 8
        mat = [[complex(re, im) for re, im in row] for row in uf["entries"]]
        for i in range(8):
            for j in range(8):
                expected = 1.0 if (i == j and i not in (2, 3)) or (i, j) in ((2, 3), (3, 2)) else 0.0
                assert mat[i][j] == expected

    def test_diffusion_entries(self, tmp_path):
        out = tmp_path / "ops.json"
        assert run_cli(
            "dump", "--n", "2", "--marked", "01", "--operator", "diffusion",
            "--output", str(out),
        ) == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        diff = doc["operators"]["diffusion"]
        assert diff["dim"] == 4
        values = {entry[0] for row in diff["entries"] for entry in row}
        assert values == {-0.5, 0.5}

    def test_all_operators_present(self, tmp_path):
        out = tmp_path / "ops.json"
        run_cli("dump", "--n", "2", "--marked", "01", "--output", str(out))
        doc = json.loads(out.read_text(encoding="utf-8"))
        assert set(doc["operators"]) == {"uf", "superposition", "interference", "gate", "diffusion"}
        assert doc["operators"]["gate"]["dim"] == 8

    def test_gate_applies_superposition_and_iteration(self, tmp_path):
        """gate column for |001> holds the one-iteration final state."""
        out = tmp_path / "ops.json"
        run_cli("dump", "--n", "2", "--marked", "01", "--output", str(out))
        doc = json.loads(out.read_text(encoding="utf-8"))
        gate = doc["operators"]["gate"]["entries"]
        col = [complex(*gate[i][1]) for i in range(8)]
        probs = [abs(z) ** 2 for z in col]
        assert probs[2] + probs[3] == pytest.approx(1.0, abs=1e-12)


class TestSample:
    def test_frequency_table(self, tmp_path):
        out = tmp_path / "s.csv"
        assert run_cli(
            "sample", "--n", "3", "--marked", "011", "--shots", "4000",
            "--seed", "11", "--output", str(out),
        ) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "kind,bits,count,frequency"
        rows = [line.split(",") for line in lines[1:]]
        answers = {r[1]: int(r[2]) for r in rows if r[0] == "answer"}
        ancilla = {r[1]: int(r[2]) for r in rows if r[0] == "ancilla"}
        assert answers["011"] > 3600  # ~0.945 of 4000
        assert sum(answers.values()) == 4000
        assert set(ancilla) == {"0", "1"} and sum(ancilla.values()) == 4000

    def test_two_marked_split(self, tmp_path):
        out = tmp_path / "s.json"
        assert run_cli(
            "sample", "--n", "3", "--marked", "011,101", "--iterations", "1",
            "--shots", "2000", "--seed", "2", "--format", "json", "--output", str(out),
        ) == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        assert set(doc["answers"]) == {"011", "101"}
        for bits in ("011", "101"):
            assert abs(doc["answers"][bits]["frequency"] - 0.5) < 0.05
        assert doc["rng"] == "numpy-pcg64"


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "qgatesim.cli", "run", "--n", "2", "--marked", "01"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("iteration,p_marked,entropy_bits")

    def test_usage_error_is_exit_2(self):
        proc = subprocess.run(
            [sys.executable, "-m", "qgatesim.cli", "run", "--backend", "warp"],
            capture_output=True,
        )
        assert proc.returncode == 2
