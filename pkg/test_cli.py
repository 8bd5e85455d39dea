"""
End-to-end tests for the trace-rearrange command line.
"""

import json

import numpy as np
import pytest

from trace_rearrange.config_manager import ConfigManager
from trace_rearrange.main import EXIT_DEFECT, EXIT_EVIDENCE, EXIT_OK, EXIT_USAGE, main, parse_dims
from trace_rearrange.errors import ConfigError
from trace_rearrange.matrix_io import save_matrix
from trace_rearrange.reporter import RunManifest


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({
        "reporting": {"output_dir": str(tmp_path / "out")},
        "log_level": "WARNING",
    }))
    return str(path)


def run(config_file, *argv):
    return main(["--config", config_file, *argv])


def read_ndjson(path):
    with open(path, "r", encoding="utf-8") as f:
        return [json.loads(line) for line in f]


class TestRegistry:
    def test_lists_all_entries(self, config_file, capsys):
        assert run(config_file, "registry") == EXIT_OK
        entries = json.loads(capsys.readouterr().out)
        assert len(entries) == 16

    def test_single_entry(self, config_file, capsys):
        assert run(config_file, "registry", "--id", "conjecture1") == EXIT_OK
        assert json.loads(capsys.readouterr().out)["inequality_id"] == "conjecture1"

    def test_unknown_entry(self, config_file, capsys):
        assert run(config_file, "registry", "--id", "nope") == EXIT_USAGE
        assert "UnknownInequality" in capsys.readouterr().err


class TestEval:
    def test_holds(self, config_file, tmp_path, capsys):
        a = save_matrix(np.diag([2.0, 1.0]), str(tmp_path / "a.json"))
        b = save_matrix(np.diag([1.0, 0.0]), str(tmp_path / "b.json"))
        assert run(config_file, "eval", "conjecture1", "--A", a, "--B", b, "--p", "1.5") == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["slack"] == pytest.approx(0.0, abs=1e-12)
        assert report["verdict"] != "violated"
        assert report["params"] == {"p": 1.5}

    def test_writes_report_and_manifest(self, config_file, tmp_path):
        a = save_matrix(np.diag([1.0, 2.0]), str(tmp_path / "a.json"))
        b = save_matrix(np.diag([1.0, 0.0]), str(tmp_path / "b.json"))
        out = tmp_path / "report.json"
        assert run(config_file, "eval", "conjecture1", "--A", a, "--B", b, "--p", "1.5",
                   "--out", str(out)) == EXIT_OK
        assert json.loads(out.read_text())["slack"] == pytest.approx(0.2891290, abs=1e-6)
        manifest = RunManifest.from_dict(json.loads((tmp_path / "report.manifest.json").read_text()))
        assert manifest.command == "eval"
        assert manifest.overrides["p"] == "1.5"

    def test_non_hermitian_input(self, config_file, tmp_path, capsys):
        a = save_matrix(np.array([[1.0, 1.0], [0.0, 1.0]]), str(tmp_path / "a.json"))
        b = save_matrix(np.eye(2), str(tmp_path / "b.json"))
        assert run(config_file, "eval", "lemma_otherway", "--A", a, "--B", b, "--p", "1.5") == EXIT_USAGE
        assert "NotHermitian" in capsys.readouterr().err

    def test_missing_parameter(self, config_file, tmp_path, capsys):
        a = save_matrix(np.eye(2), str(tmp_path / "a.json"))
        assert run(config_file, "eval", "conjecture1", "--A", a, "--B", a) == EXIT_USAGE
        assert "BadSpec" in capsys.readouterr().err

    def test_missing_file(self, config_file, tmp_path, capsys):
        assert run(config_file, "eval", "conjecture1", "--A", str(tmp_path / "none.json"),
                   "--B", str(tmp_path / "none.json"), "--p", "1.5") == EXIT_USAGE
        assert "MatrixFormatError" in capsys.readouterr().err


class TestVerify:
    def test_non_integer_s_rejected_before_output(self, config_file, tmp_path, capsys):
        out = tmp_path / "v.ndjson"
        assert run(config_file, "verify", "updown2", "--s", "1.5", "--samples", "2",
                   "--out", str(out)) == EXIT_USAGE
        assert "NonIntegerS" in capsys.readouterr().err
        assert not out.exists()

    def test_hanner_p2(self, config_file, tmp_path, capsys):
        out = tmp_path / "v.ndjson"
        assert run(config_file, "verify", "hanner-matrix", "--p", "2", "--samples", "4", "--dims", "2..3",
                   "--out", str(out)) == EXIT_OK
        records = read_ndjson(out)
        assert [r["type"] for r in records] == ["check", "check", "check", "suite", "summary"]
        assert records[-1]["exit_code"] == 0
        assert records[0]["params"] == {"p": [2.0]}
        manifest = json.loads((tmp_path / "v.manifest.json").read_text())
        assert manifest["command"] == "verify"
        assert manifest["overrides"]["suite"] == "hanner-matrix"
        assert manifest["effective_config"]["verify_settings"]["dims"] == [2, 3]
        assert "hanner-matrix: ok" in capsys.readouterr().out

    def test_default_results_path(self, config_file, tmp_path):
        assert run(config_file, "verify", "monotone", "--samples", "2") == EXIT_OK
        assert (tmp_path / "out" / "verify_monotone.ndjson").exists()

    def test_results_are_reproducible(self, config_file, tmp_path):
        first, second = tmp_path / "a.ndjson", tmp_path / "b.ndjson"
        for out in (first, second):
            assert run(config_file, "verify", "lemma-otherway", "--samples", "3", "--dims", "2,3",
                       "--seed", "9", "--out", str(out)) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    def test_unknown_suite(self, config_file, capsys):
        assert run(config_file, "verify", "nope") == EXIT_USAGE
        assert "ConfigError" in capsys.readouterr().err

    def test_bad_dims(self, config_file):
        assert run(config_file, "verify", "monotone", "--dims", "2..x") == EXIT_USAGE


class TestHunt:
    def test_planted_violation(self, config_file, tmp_path, capsys):
        hunt_file = tmp_path / "hunt.yaml"
        hunt_file.write_text(
            "inequality_id: rev_probe\n"
            "ensemble_kind: psd\n"
            "param_grid:\n  s: [2.0]\n"
            "dims: [3]\n"
            "restarts: 25\n"
            "steps_per_restart: 6\n"
            "seed: 7\n"
            "enforce_domain: false\n"
        )
        out = tmp_path / "hunt.json"
        code = run(config_file, "hunt", "--config", str(hunt_file), "--restarts", "3", "--out", str(out))
        assert code == EXIT_EVIDENCE
        record = json.loads(out.read_text())
        assert record["violations"] > 0
        assert record["config"]["restarts"] == 3
        assert "wall_time" not in record
        assert "restart 3/3" in capsys.readouterr().out
        assert (tmp_path / "out" / "hunts.ndjson").exists()

    def test_missing_hunt_config(self, config_file, tmp_path, capsys):
        assert run(config_file, "hunt", "--config", str(tmp_path / "none.yaml")) == EXIT_USAGE
        assert "ConfigError" in capsys.readouterr().err

    def _planted_record(self, config_file, tmp_path):
        hunt_file = tmp_path / "hunt.yaml"
        hunt_file.write_text(
            "inequality_id: rev_probe\nensemble_kind: psd\nparam_grid:\n  s: [2.0]\n"
            "dims: [3]\nrestarts: 3\nsteps_per_restart: 6\nseed: 7\nenforce_domain: false\n"
        )
        out = tmp_path / "hunt.json"
        assert run(config_file, "hunt", "--config", str(hunt_file), "--out", str(out)) == EXIT_EVIDENCE
        return out

    def test_replay_stored_record(self, config_file, tmp_path, capsys):
        out = self._planted_record(config_file, tmp_path)
        capsys.readouterr()
        assert run(config_file, "hunt", "--replay", str(out)) == EXIT_EVIDENCE
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] == "violated"
        stored = json.loads(out.read_text())["best_report"]["relative_slack"]
        assert report["relative_slack"] == pytest.approx(stored, abs=1e-12)

    def test_replay_tolerance_comes_from_config(self, config_file, tmp_path):
        out = self._planted_record(config_file, tmp_path)
        record = json.loads(out.read_text())
        record["best_report"]["relative_slack"] += 1e-9
        out.write_text(json.dumps(record))
        assert run(config_file, "hunt", "--replay", str(out)) == EXIT_DEFECT

        loose = tmp_path / "loose.json"
        loose.write_text(json.dumps({"tolerances": {"replay": 1e-6}, "log_level": "WARNING"}))
        assert main(["--config", str(loose), "hunt", "--replay", str(out)]) == EXIT_EVIDENCE

    def test_replay_missing_record(self, config_file, tmp_path, capsys):
        assert run(config_file, "hunt", "--replay", str(tmp_path / "none.json")) == EXIT_USAGE
        assert "ConfigError" in capsys.readouterr().err

    def test_config_and_replay_are_exclusive(self, config_file, tmp_path):
        assert run(config_file, "hunt", "--config", "a.yaml", "--replay", "b.json") == EXIT_USAGE


class TestGlobalOptions:
    def test_create_config(self, tmp_path, capsys):
        target = tmp_path / "cfg" / "config.json"
        assert main(["--create-config", str(target)]) == EXIT_OK
        config = ConfigManager(str(target)).load()
        assert config.verify.samples == 500
        assert str(target) in capsys.readouterr().out

    def test_no_command(self, config_file):
        assert run(config_file) == EXIT_USAGE

    def test_usage_error_exits_3(self, config_file, capsys):
        assert run(config_file, "verify") == EXIT_USAGE
        assert "ConfigError: usage" in capsys.readouterr().err

    def test_bad_config_file(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"verfy": {}}))
        assert main(["--config", str(path), "registry"]) == EXIT_USAGE
        assert "verfy" in capsys.readouterr().err


@pytest.mark.parametrize("text,expected", [("2..4", [2, 3, 4]), ("3", [3]), ("2,5", [2, 5])])
def test_parse_dims(text, expected):
    assert parse_dims(text) == expected


@pytest.mark.parametrize("text", ["0..2", "a", ""])
def test_parse_dims_rejects(text):
    with pytest.raises(ConfigError):
        parse_dims(text)
