import csv
import hashlib
import io
import json
import math

import jsonschema
import pytest

from kobalab.cli import load_schema, main

FAST = {
    "verify": ["--samples", "300"],
    "sigma": ["--r-grid", "0.9,0.5", "--samples", "60", "--tol", "0.2"],
    "step": ["--samples", "2"],
    "slimness": ["--k-max", "2", "--samples", "60"],
    "qgeo": ["--samples", "8"],
    "family": ["--samples", "300", "--t-grid", "1:20:20"],
}


def run(tmp_path, argv, name="out"):
    path = tmp_path / name
    code = main(argv + ["--out", str(path)])
    return code, path.read_bytes() if path.exists() else b""


def rows_of(data: bytes):
    return list(csv.DictReader(io.StringIO(data.decode())))


class TestExitCodes:
    @pytest.mark.parametrize("command", sorted(FAST))
    def test_default_ok(self, tmp_path, command):
        code, data = run(tmp_path, [command] + FAST[command])
        assert code == 0 and data

    @pytest.mark.parametrize("argv", [
        ["sigma", "--r-grid", "0.5:oops"],
        ["sigma", "--r-grid", "1.5"],
        ["family", "--t-grid", "5,1"],
        ["slimness", "--k-max", "0"],
        ["qgeo", "--r", "0.4"],
        ["nonsense"],
        ["step", "--format", "xml"],
        ["verify", "--self-test", "unknown=1"],
    ])
    def test_bad_config(self, tmp_path, argv, capsys):
        code, _ = run(tmp_path, argv)
        assert code == 2

    @pytest.mark.parametrize("argv", [
        ["verify", "--samples", "300", "--self-test", "theta-error=1e-6"],
        ["sigma", "--r-grid", "0.5", "--samples", "60", "--tol", "0.2", "--self-test", "sigma-scale=1.5"],
        ["qgeo", "--samples", "8", "--height", "3"],
        ["family", "--beta", "0.5", "--samples", "300", "--t-grid", "1:5:5",
         "--self-test", "theta-error=1e-6"],
    ])
    def test_fault_injection(self, tmp_path, argv, capsys):
        code, data = run(tmp_path, argv)
        assert code == 1 and data
        assert "FAIL" in capsys.readouterr().err

    def test_version(self, capsys):
        assert main(["--version"]) == 0


class TestOutput:
    @pytest.mark.parametrize("fmt", ["csv", "json"])
    @pytest.mark.parametrize("command", ["verify", "step", "family"])
    def test_byte_deterministic(self, tmp_path, command, fmt):
        argv = [command, "--format", fmt] + FAST[command]
        _, first = run(tmp_path, argv, "a")
        _, second = run(tmp_path, argv, "b")
        assert hashlib.sha256(first).digest() == hashlib.sha256(second).digest()

    @pytest.mark.parametrize("command", sorted(FAST))
    def test_json_schema(self, tmp_path, command):
        _, data = run(tmp_path, [command, "--format", "json"] + FAST[command])
        doc = json.loads(data)
        jsonschema.validate(doc, load_schema())
        assert doc["metadata"]["command"] == command and doc["metadata"]["wall_time"] is None
        assert doc["status"]["ok"]

    def test_wall_time_opt_in(self, tmp_path):
        _, data = run(tmp_path, ["step", "--format", "json", "--wall-time"] + FAST["step"])
        doc = json.loads(data)
        jsonschema.validate(doc, load_schema())
        assert doc["metadata"]["wall_time"] > 0

    def test_failure_in_json(self, tmp_path):
        _, data = run(tmp_path, ["verify", "--format", "json", "--samples", "300",
                                 "--self-test", "theta-error=1e-6"])
        doc = json.loads(data)
        jsonschema.validate(doc, load_schema())
        assert not doc["status"]["ok"] and any("semimodel" in f for f in doc["status"]["failures"])

    def test_csv_precision(self, tmp_path):
        _, data = run(tmp_path, ["sigma"] + FAST["sigma"])
        rows = rows_of(data)
        assert list(rows[0]) == ["r", "beta", "sigma_closed", "sigma_brute", "M", "R", "rel_error"]
        assert [float(r["r"]) for r in rows] == [0.5, 0.9]
        assert float(rows[0]["sigma_closed"]) == math.sqrt(15)
        assert rows[0]["sigma_closed"] == format(math.sqrt(15), ".17g")

    def test_complex_columns(self, tmp_path):
        _, data = run(tmp_path, ["step"] + FAST["step"])
        rows = rows_of(data)
        assert {"z0_re", "z0_im", "w0_re", "w0_im"} <= set(rows[0])
        assert float(rows[0]["step_limit"]) < 1e-8
        assert float(rows[1]["abs_error"]) < 1e-6


class TestCommands:
    def test_step_zero_rotation(self, tmp_path):
        code, data = run(tmp_path, ["step", "--theta", "0"] + FAST["step"])
        assert code == 0
        assert all(float(r["step_limit"]) < 1e-7 for r in rows_of(data))

    def test_seed_changes_margins_not_verdict(self, tmp_path):
        _, a = run(tmp_path, ["verify", "--samples", "300", "--seed", "1"], "a")
        _, b = run(tmp_path, ["verify", "--samples", "300", "--seed", "2"], "b")
        ra, rb = rows_of(a), rows_of(b)
        assert [r["pass"] for r in ra] == [r["pass"] for r in rb]
        assert [r["worst"] for r in ra] != [r["worst"] for r in rb]

    def test_family_reduction(self, tmp_path):
        code, data = run(tmp_path, ["family", "--beta", "1"] + FAST["family"])
        row = rows_of(data)[0]
        assert code == 0 and float(row["cayley_reduction_defect"]) <= 1e-10
        assert float(row["direction_deviation"]) == 0

    def test_slimness_rows(self, tmp_path):
        _, data = run(tmp_path, ["slimness", "--format", "json"] + FAST["slimness"])
        doc = json.loads(data)
        bidisc = [r["lower_bound"] for r in doc["rows"] if r["ambient"] == "bidisc"]
        assert len(bidisc) == 2 and bidisc[1] > bidisc[0]
        assert doc["metadata"]["summary"]["ball_pullback_max"] < 0.1

    def test_qgeo_rows(self, tmp_path):
        _, data = run(tmp_path, ["qgeo"] + FAST["qgeo"])
        rows = rows_of(data)
        assert len(rows) == 6 and all(r["certified"] == "true" for r in rows)

    def test_stdout(self, capsys):
        assert main(["step"] + FAST["step"]) == 0
        assert capsys.readouterr().out.startswith("z0_re,")
