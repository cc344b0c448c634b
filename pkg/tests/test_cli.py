import csv
import json

import pytest

from hermite_sobolev import cli
from hermite_sobolev.verify import ExperimentReport


def run(*argv):
    return cli.main(list(argv))


class TestUsage:
    def test_missing_command(self, capsys):
        assert run() == 2

    def test_unknown_experiment(self, capsys):
        assert run("verify", "--experiment", "nope") == 2
        assert "--experiment" in capsys.readouterr().err

    def test_missing_required_flag(self, capsys):
        assert run("verify", "--experiment", "kernel-domination", "--a", "0.25") == 2
        assert "--d" in capsys.readouterr().err

    def test_bad_range(self, capsys):
        assert run("kernel-scan", "--a", "0.5", "--x-range", "1:0:0.1") == 2

    def test_bad_env_seed(self, monkeypatch, capsys):
        monkeypatch.setenv("HOK_SEED", "abc")
        assert run("norms") == 2
        assert "HOK_SEED" in capsys.readouterr().err

    def test_verify_needs_one_mode(self, tmp_path, capsys):
        assert run("verify", "--out", str(tmp_path)) == 2


class TestVerify:
    def test_pass_and_byte_identical(self, tmp_path, capsys):
        args = ["verify", "--experiment", "norm-equivalence", "--k", "1", "--p", "2", "--seed", "4"]
        assert run(*args, "--out", str(tmp_path / "a")) == 0
        assert run(*args, "--out", str(tmp_path / "b")) == 0
        name = "norm-equivalence-k1-p2.report.json"
        first = (tmp_path / "a" / name).read_bytes()
        assert first == (tmp_path / "b" / name).read_bytes()
        assert json.loads(first)["params"]["seed"] == 4
        assert (tmp_path / "a" / "norm-equivalence-k1-p2.details.csv").exists()
        assert "PASS norm-equivalence-k1-p2" in capsys.readouterr().out

    def test_failure_exit_code(self, tmp_path, capsys):
        # an impossibly tight drift tolerance fails the check
        code = run("verify", "--experiment", "norm-equivalence", "--k", "1", "--p", "2", "--tol", "1e-9",
                   "--out", str(tmp_path))
        assert code == 1

    def test_env_seed_overrides(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("HOK_SEED", "7")
        run("verify", "--experiment", "decay-property", "--seed", "1", "--out", str(tmp_path))
        data = json.loads(next(tmp_path.glob("*.report.json")).read_text())
        assert data["params"]["seed"] == 7


class TestOtherCommands:
    def test_kernel_scan_columns(self, tmp_path, capsys):
        assert run("kernel-scan", "--a", "0.5", "--d", "1", "--x-range", "-1:1:0.5", "--out", str(tmp_path)) == 0
        rows = list(csv.reader((tmp_path / "kernel-scan-a0.5-d1.csv").open()))
        assert rows[0] == ["x", "y", "K_a", "Phi_a", "ratio"]
        assert len(rows) == 1 + 5 * 4
        x, y, k, phi, ratio = map(float, rows[1])
        assert ratio == pytest.approx(k / phi)

    def test_transform_stdout(self, capsys):
        assert run("transform", "--function", "gaussian", "--N", "4") == 0
        out = capsys.readouterr().out
        coeffs = json.loads(out.splitlines()[0])
        assert coeffs["d"] == 1
        assert "x,f,partial_sum" in out

    def test_norms_deterministic(self, capsys):
        run("norms", "--seed", "2")
        first = capsys.readouterr().out
        run("norms", "--seed", "2")
        assert capsys.readouterr().out == first
        assert json.loads(first)["seed"] == 2


class TestReportIndex:
    def test_empty_dir(self, tmp_path, capsys):
        assert run("report-index", str(tmp_path)) == 0
        index = json.loads((tmp_path / "index.json").read_text())
        assert index["count"] == 0 and index["passed"] is True

    def test_one_failed(self, tmp_path, capsys):
        for name, ok in (("alpha", True), ("beta", False)):
            r = ExperimentReport(name, {"a": 0.5, "d": 1}, 1.0, ok)
            (tmp_path / f"{name}.report.json").write_text(r.to_json())
        (tmp_path / "broken.report.json").write_text("{not json")
        assert run("report-index", str(tmp_path)) == 1
        index = json.loads((tmp_path / "index.json").read_text())
        assert index["passed"] is False and index["failed"] == ["beta"]
        assert index["skipped"] == 1
        assert index["constants"][0] == {"experiment": "alpha", "a": 0.5, "d": 1, "p": None, "q": None,
                                         "empirical_constant": 1.0}
        assert "skipped 1" in capsys.readouterr().err

    def test_not_a_directory(self, tmp_path, capsys):
        assert run("report-index", str(tmp_path / "missing")) == 2
