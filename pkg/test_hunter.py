"""
Tests for the randomized counterexample search and witness replay.
"""

import copy
import json

import pytest

from trace_rearrange.errors import (
    ConfigError,
    CorruptWitness,
    IncompatibleEnsemble,
    ReplayMismatch,
    UnknownInequality,
)
from trace_rearrange.hunter import HuntConfig, Hunter, hunt, load_record, replay, verify_replay
from trace_rearrange.records import HuntRecord
from trace_rearrange.reporter import json_safe


def planted(**overrides):
    data = dict(inequality_id="rev_probe", ensemble_kind="psd", param_grid={"s": [2.0]},
                dims=[3], restarts=4, steps_per_restart=8, seed=7, enforce_domain=False)
    data.update(overrides)
    return HuntConfig.from_dict(data)


@pytest.fixture(scope="module")
def planted_record():
    return hunt(planted())


class TestPlantedTarget:
    def test_finds_violation(self, planted_record):
        assert planted_record.violations > 0
        assert planted_record.best_report.violated
        assert planted_record.proved_violations == 0

    def test_trial_count(self, planted_record):
        assert planted_record.trials == 4 * (8 + 1)

    def test_replay_reproduces_slack(self, planted_record):
        again = replay(planted_record)
        assert again.slack == pytest.approx(planted_record.best_report.slack, abs=1e-12)
        assert again.violated

    def test_replay_after_json_round_trip(self, planted_record):
        text = json.dumps(json_safe(planted_record.to_dict()), allow_nan=False)
        restored = HuntRecord.from_dict(json.loads(text))
        assert replay(restored).slack == pytest.approx(planted_record.best_report.slack, abs=1e-12)

    def test_verify_replay_accepts_stored_record(self, planted_record):
        again = verify_replay(planted_record)
        assert again.violated

    def test_verify_replay_detects_drift(self, planted_record):
        drifted = copy.deepcopy(planted_record)
        drifted.best_report.relative_slack += 1e-9
        with pytest.raises(ReplayMismatch):
            verify_replay(drifted)
        assert verify_replay(drifted, tolerance=1e-6).violated

    def test_load_record(self, planted_record, tmp_path):
        path = tmp_path / "record.json"
        path.write_text(json.dumps(json_safe(planted_record.to_dict()), allow_nan=False))
        restored = load_record(str(path))
        assert restored.best_report.relative_slack == planted_record.best_report.relative_slack
        assert (restored.trials, restored.violations) == (planted_record.trials, planted_record.violations)

    def test_load_record_errors(self, tmp_path):
        with pytest.raises(ConfigError):
            load_record(str(tmp_path / "none.json"))
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"trials": 3}))
        with pytest.raises(CorruptWitness):
            load_record(str(path))

    def test_provenance(self, planted_record):
        witness = planted_record.best_report.witness
        assert witness["provenance"] == planted_record.provenance
        assert witness["ensemble"]["stream"] == planted_record.provenance["restart"]
        assert planted_record.best_report.seed == 7

    def test_edited_witness_changes_slack(self, planted_record):
        edited = copy.deepcopy(planted_record)
        entry = edited.best_report.witness["inputs"]["A"]["entries"][0][0]
        entry[0] += 0.5
        assert replay(edited).slack != pytest.approx(planted_record.best_report.slack, abs=1e-12)

    def test_workers_do_not_change_result(self, planted_record):
        parallel = hunt(planted(workers=2))
        assert parallel.best_report.to_dict() == planted_record.best_report.to_dict()
        assert parallel.violations == planted_record.violations
        assert parallel.provenance == planted_record.provenance

    def test_progress_callback(self):
        seen = []
        hunt(planted(restarts=2, steps_per_restart=1), progress=lambda d, t, r: seen.append((d, t, r.restart)))
        assert seen == [(1, 2, 0), (2, 2, 1)]


def test_proved_inequality_has_no_violations():
    record = hunt(HuntConfig.from_dict(dict(
        inequality_id="updown1", ensemble_kind="psd", param_grid={"r": [0.5, 1.0], "s": [1.5, 2.0]},
        dims=[2, 3], restarts=3, steps_per_restart=5, seed=3)))
    assert record.violations == 0
    assert record.best_report.relative_slack >= -1e-9


def test_descent_never_increases_best_slack():
    hunter = Hunter(planted(steps_per_restart=10))
    history = hunter.run_restart(1).history
    assert all(b <= a for a, b in zip(history, history[1:]))


class TestConfig:
    def test_incompatible_kind(self):
        cfg = HuntConfig.from_dict(dict(inequality_id="lemma_otherway", ensemble_kind="general_complex",
                                        param_grid={"p": [1.5]}, dims=[2]))
        with pytest.raises(IncompatibleEnsemble):
            hunt(cfg)

    def test_unknown_inequality(self):
        cfg = HuntConfig.from_dict(dict(inequality_id="nope", param_grid={"p": [1.5]}, dims=[2]))
        with pytest.raises(UnknownInequality):
            hunt(cfg)

    def test_grid_must_match_params(self):
        cfg = HuntConfig.from_dict(dict(inequality_id="updown1", ensemble_kind="psd",
                                        param_grid={"r": [1.0]}, dims=[2]))
        with pytest.raises(ConfigError):
            hunt(cfg)

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            planted(bogus=1)

    @pytest.mark.parametrize("overrides", [
        {"dims": []},
        {"restarts": 0},
        {"shrink_factor": 1.5},
        {"ensemble_kind": "nope"},
        {"param_grid": {"s": []}},
        {"tolerance": 0.0},
    ])
    def test_invalid_values(self, overrides):
        with pytest.raises(ConfigError):
            planted(**overrides)

    def test_missing_required(self):
        with pytest.raises(ConfigError):
            HuntConfig.from_dict({"inequality_id": "rev_probe", "dims": [2]})

    def test_defaults_fill_omitted_fields(self):
        cfg = HuntConfig.from_dict({"inequality_id": "rev_probe", "param_grid": {"s": [0.75]}, "dims": [2]},
                                   defaults={"restarts": 9, "tolerance": 1e-6})
        assert cfg.restarts == 9
        assert cfg.tolerance == 1e-6

    def test_load_yaml(self, tmp_path):
        path = tmp_path / "hunt.yaml"
        path.write_text("inequality_id: rev_probe\nparam_grid:\n  s: [0.75]\ndims: [2, 3]\n")
        cfg = HuntConfig.load(str(path))
        assert cfg.dims == [2, 3]
        assert cfg.grid_points() == [{"s": 0.75}]

    def test_load_unreadable(self, tmp_path):
        with pytest.raises(ConfigError):
            HuntConfig.load(str(tmp_path / "missing.yaml"))

    def test_grid_points_sorted_product(self):
        cfg = HuntConfig.from_dict(dict(inequality_id="updown1", param_grid={"s": [1.0, 2.0], "r": [0.5]},
                                        dims=[2]))
        assert cfg.grid_points() == [{"r": 0.5, "s": 1.0}, {"r": 0.5, "s": 2.0}]
