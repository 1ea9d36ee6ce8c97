"""End-to-end tests of the command-line interface."""

import json

import numpy as np
import pytest

from decoupled_bandits.cli import main
from decoupled_bandits.environments import load_reward_matrix


ENV_SPEC = {
    "variant": "iid_gap", "k": 3, "T": 300, "seed": 5,
    "good_arms": [0], "gap": 0.3, "means": [0.8, 0.5, 0.2],
}


def experiment_config(out_dir=None):
    return {
        "env": ENV_SPEC,
        "algorithms": [
            {"name": "decoupled", "overrides": {"mu": 3.0}},
            {"name": "greedy_decoupled"},
        ],
        "repetitions": 2,
        "base_seed": 99,
        "out_dir": out_dir,
        "emit": {"trajectories": True, "half_norms": True},
    }


class TestRun:
    def test_missing_config_exits_1(self, capsys):
        code = main(["run", "--config", "does-not-exist.json"])
        assert code == 1
        err = capsys.readouterr().err
        assert "does-not-exist.json" in err
        assert json.loads(err.strip())["kind"] == "validation"

    def test_run_writes_outputs(self, tmp_path, capsys):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(experiment_config(str(tmp_path / "out"))))
        assert main(["run", "--config", str(cfg_path)]) == 0
        out = capsys.readouterr().out
        assert "final average reward" in out
        for name in ("reward_curves.csv", "counts_decoupled.csv",
                     "regret.json", "summary.json", "env.csv"):
            assert (tmp_path / "out" / name).exists()

    def test_quiet_suppresses_stdout_but_writes(self, tmp_path, capsys):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(experiment_config(str(tmp_path / "out"))))
        assert main(["run", "--config", str(cfg_path), "--quiet"]) == 0
        assert capsys.readouterr().out == ""
        assert (tmp_path / "out" / "reward_curves.csv").exists()

    def test_seed_override_changes_outputs(self, tmp_path):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(experiment_config(str(tmp_path / "a"))))
        assert main(["run", "--config", str(cfg_path), "--quiet"]) == 0
        assert main(["run", "--config", str(cfg_path), "--quiet",
                     "--out-dir", str(tmp_path / "b"), "--seed", "12345"]) == 0
        a = (tmp_path / "a" / "trajectory_decoupled_rep0.csv").read_bytes()
        b = (tmp_path / "b" / "trajectory_decoupled_rep0.csv").read_bytes()
        assert a != b

    def test_invalid_config_schema_exits_1(self, tmp_path, capsys):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps({"algorithms": [], "repetitions": 1}))
        assert main(["run", "--config", str(cfg_path)]) == 1

    def test_runtime_error_exits_2(self, tmp_path, capsys):
        blocker = tmp_path / "blocked"
        blocker.write_text("a file where the out dir must go")
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(experiment_config(str(blocker))))
        assert main(["run", "--config", str(cfg_path), "--quiet"]) == 2
        assert json.loads(capsys.readouterr().err.strip())["kind"] == "runtime"


class TestGenEnv:
    def test_gen_env_and_load(self, tmp_path):
        spec_path = tmp_path / "env.json"
        spec_path.write_text(json.dumps(ENV_SPEC))
        out = tmp_path / "matrix.csv"
        assert main(["gen-env", "--spec", str(spec_path), "--out", str(out), "--quiet"]) == 0
        matrix = load_reward_matrix(out)
        assert (matrix.k, matrix.T) == (3, 300)
        meta = json.loads((tmp_path / "matrix.meta.json").read_text())
        assert meta["spec"]["variant"] == "iid_gap"

    def test_seed_override(self, tmp_path):
        spec_path = tmp_path / "env.json"
        spec_path.write_text(json.dumps(ENV_SPEC))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["gen-env", "--spec", str(spec_path), "--out", str(a), "--quiet"]) == 0
        assert main(["gen-env", "--spec", str(spec_path), "--out", str(b),
                     "--seed", "77", "--quiet"]) == 0
        assert a.read_bytes() != b.read_bytes()

    def test_bad_spec_exits_1(self, tmp_path):
        spec_path = tmp_path / "env.json"
        spec_path.write_text(json.dumps({"variant": "uwb", "k": 3, "T": 10, "seed": 1}))
        assert main(["gen-env", "--spec", str(spec_path),
                     "--out", str(tmp_path / "m.csv")]) == 1


class TestRegret:
    def test_round_trip_via_files(self, tmp_path, capsys):
        # gen-env, run with trajectories, then regret on the emitted files
        spec_path = tmp_path / "env.json"
        spec_path.write_text(json.dumps(ENV_SPEC))
        matrix_path = tmp_path / "matrix.csv"
        assert main(["gen-env", "--spec", str(spec_path),
                     "--out", str(matrix_path), "--quiet"]) == 0

        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(experiment_config(str(tmp_path / "out"))))
        assert main(["run", "--config", str(cfg_path), "--quiet"]) == 0

        # env.csv written by the runner equals the gen-env matrix (same spec)
        assert (tmp_path / "out" / "env.csv").read_bytes() == matrix_path.read_bytes()

        report_path = tmp_path / "report.json"
        code = main(["regret",
                     "--matrix", str(matrix_path),
                     "--trajectory", str(tmp_path / "out" / "trajectory_decoupled_rep0.csv"),
                     "--segments", "2",
                     "--out", str(report_path)])
        assert code == 0
        report = json.loads(report_path.read_text())
        assert "static_regret" in report
        assert "2" in report["switching_regret"]
        # cross-check against the runner's regret.json (repetition 0)
        regret = json.loads((tmp_path / "out" / "regret.json").read_text())
        want = regret["algorithms"]["decoupled"]["static_per_rep"][0]
        assert report["static_regret"] == pytest.approx(want, abs=1e-6)

    def test_stdout_report(self, tmp_path, capsys):
        spec_path = tmp_path / "env.json"
        spec_path.write_text(json.dumps(ENV_SPEC))
        matrix_path = tmp_path / "matrix.csv"
        main(["gen-env", "--spec", str(spec_path), "--out", str(matrix_path), "--quiet"])
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(experiment_config(str(tmp_path / "out"))))
        main(["run", "--config", str(cfg_path), "--quiet"])
        capsys.readouterr()
        code = main(["regret", "--matrix", str(matrix_path),
                     "--trajectory", str(tmp_path / "out" / "trajectory_greedy_decoupled_rep1.csv")])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert "best_fixed_arm" in report

    def test_missing_inputs_exit_1(self, tmp_path):
        assert main(["regret", "--matrix", str(tmp_path / "nope.csv"),
                     "--trajectory", str(tmp_path / "nope2.csv")]) == 1


class TestParser:
    def test_no_command_exits_nonzero(self, capsys):
        assert main([]) == 1
        capsys.readouterr()

    def test_unknown_command_exits_nonzero(self, capsys):
        assert main(["frobnicate"]) == 1
        capsys.readouterr()
