"""Tests for the experiment runner: seeding, determinism, outputs."""

import json

import numpy as np
import pytest

from decoupled_bandits.environments import EnvSpec
from decoupled_bandits.runner import (
    AlgorithmSpec,
    EmitFlags,
    ExperimentConfig,
    derive_seed,
    load_trajectory_csv,
    make_learner,
    run_experiment,
    write_trajectory_csv,
)


def small_config(**kw):
    base = dict(
        env=EnvSpec(variant="iid_gap", k=3, T=300, seed=7,
                    good_arms=(0,), gap=0.3, means=(0.8, 0.5, 0.2)),
        algorithms=(AlgorithmSpec("decoupled", overrides={"mu": 3.0}),
                    AlgorithmSpec("round_robin")),
        repetitions=3,
        base_seed=1234,
        emit=EmitFlags(half_norms=True, trajectories=True),
        regret_segments=(2,),
    )
    base.update(kw)
    return ExperimentConfig(**base)


def read_bytes(directory):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir())
            if p.name != "summary.json"}  # summary carries wall-clock times


class TestConfig:
    def test_unknown_algorithm_rejected_before_run(self):
        with pytest.raises(ValueError, match="unknown algorithm"):
            ExperimentConfig.from_dict({
                "env": {"variant": "iid_gap", "k": 3, "T": 10, "seed": 1,
                        "good_arms": [0], "gap": 0.3, "means": [0.8, 0.4, 0.2]},
                "algorithms": [{"name": "mystery"}],
                "repetitions": 1,
                "base_seed": 1,
            })

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            small_config(algorithms=(AlgorithmSpec("exp3"), AlgorithmSpec("exp3"))).validate()

    def test_unknown_override_rejected(self):
        with pytest.raises(ValueError, match="overrides"):
            small_config(algorithms=(AlgorithmSpec("exp3", overrides={"mu": 2}),)).validate()

    def test_round_trip_dict(self):
        cfg = small_config()
        again = ExperimentConfig.from_dict(cfg.to_dict())
        assert again.to_dict() == cfg.to_dict()

    def test_missing_required_field(self):
        with pytest.raises(ValueError, match="missing required"):
            ExperimentConfig.from_dict({"algorithms": [], "repetitions": 1, "base_seed": 0})


class TestSeedDerivation:
    def test_documented_hash(self):
        import hashlib
        want = int.from_bytes(hashlib.sha256(b"42:exp3:3").digest()[:8], "little")
        assert derive_seed(42, "exp3", 3) == want

    def test_distinct(self):
        seeds = {derive_seed(1, a, r) for a in ("x", "y") for r in range(50)}
        assert len(seeds) == 100


class TestMakeLearner:
    def test_defaults(self):
        learner = make_learner(AlgorithmSpec("decoupled"), k=4, T=5000)
        exponent = min(1.0, max(0.0, 4 / 3 - np.log(5000) / (3 * np.log(4))))
        assert learner.params.mu == pytest.approx(4.0 ** exponent)

    def test_all_registry_names(self):
        for name in ("decoupled", "decoupled_switching", "decoupled_doubling",
                     "exp3", "exp3p", "round_robin", "greedy_decoupled"):
            make_learner(AlgorithmSpec(name), k=4, T=5000)


class TestRunExperiment:
    def test_byte_identical_reruns(self, tmp_path):
        cfg = small_config()
        run_experiment(cfg, out_dir=tmp_path / "a")
        run_experiment(cfg, out_dir=tmp_path / "b")
        a, b = read_bytes(tmp_path / "a"), read_bytes(tmp_path / "b")
        assert a.keys() == b.keys()
        for name in a:
            assert a[name] == b[name], f"{name} differs between reruns"

    def test_seed_isolation_when_removing_algorithms(self, tmp_path):
        both = small_config()
        only = small_config(algorithms=(AlgorithmSpec("decoupled", overrides={"mu": 3.0}),))
        run_experiment(both, out_dir=tmp_path / "both")
        run_experiment(only, out_dir=tmp_path / "only")
        for name in ("counts_decoupled.csv", "trajectory_decoupled_rep0.csv",
                     "trajectory_decoupled_rep2.csv"):
            assert (tmp_path / "both" / name).read_bytes() == \
                (tmp_path / "only" / name).read_bytes()

    def test_average_reward_curve_definition(self, tmp_path):
        cfg = small_config(repetitions=1)
        result = run_experiment(cfg, out_dir=tmp_path)
        traj = load_trajectory_csv(tmp_path / "trajectory_decoupled_rep0.csv", k=3)
        want = np.cumsum(traj.rewards_accrued) / np.arange(1, traj.T + 1)
        lines = (tmp_path / "reward_curves.csv").read_text().strip().splitlines()
        rows = [l.split(",") for l in lines[1:] if l.split(",")[1] == "decoupled"]
        got = np.array([float(r[2]) for r in rows])
        np.testing.assert_allclose(got, want, atol=1e-9)

    def test_infeasible_algorithm_skipped_not_fatal(self, tmp_path):
        cfg = small_config(algorithms=(
            AlgorithmSpec("decoupled", label="too_greedy", overrides={"mu": 1.0}),
            AlgorithmSpec("round_robin"),
        ))
        # mu=1 at T=300, k=3 is infeasible (smallest admissible horizon is
        # 630); the runner records the error and finishes round_robin
        result = run_experiment(cfg, out_dir=tmp_path)
        assert "too_greedy" in result.errors
        assert "horizon too small" in result.errors["too_greedy"]
        assert "round_robin" in result.stats
        assert (tmp_path / "counts_round_robin.csv").exists()
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert "too_greedy" in summary["errors"]

    def test_regret_json_contents(self, tmp_path):
        run_experiment(small_config(), out_dir=tmp_path)
        regret = json.loads((tmp_path / "regret.json").read_text())
        entry = regret["algorithms"]["decoupled"]
        assert len(entry["static_per_rep"]) == 3
        assert "2" in entry["switching"]
        # switching comparator can only beat the fixed-arm comparator
        assert entry["switching"]["2"]["mean"] >= entry["static_mean"] - 1e-9

    def test_redraw_env_per_rep(self, tmp_path):
        cfg = small_config(redraw_env_per_rep=True,
                           emit=EmitFlags(trajectories=True, env=False))
        result = run_experiment(cfg, out_dir=tmp_path)
        assert "decoupled" in result.stats
        assert not (tmp_path / "env.csv").exists()

    def test_aggregation_is_order_independent(self):
        # repetition r's trajectory depends only on (base_seed, label, r)
        from decoupled_bandits.core import Rng
        from decoupled_bandits.environments import generate
        from decoupled_bandits.runner import run_one
        cfg = small_config()
        gt = generate(cfg.env)
        spec = cfg.algorithms[0]
        direct = {}
        for rep in (2, 0, 1):  # deliberately out of order
            learner = make_learner(spec, cfg.env.k, cfg.env.T)
            direct[rep] = run_one(learner, gt, Rng(derive_seed(cfg.base_seed, spec.display, rep)))
        result = run_experiment(cfg)
        for rep in range(3):
            np.testing.assert_array_equal(
                result.stats["decoupled"].trajectories[rep].choices,
                direct[rep].choices)

    def test_half_norm_curves_emitted(self, tmp_path):
        run_experiment(small_config(), out_dir=tmp_path)
        lines = (tmp_path / "half_norms.csv").read_text().strip().splitlines()
        assert lines[0] == "t,algo,mean,std"
        # round robin plays one-hot distributions: half-norm exactly 1
        rr = [l for l in lines[1:] if l.split(",")[1] == "round_robin"]
        assert all(float(l.split(",")[2]) == 1.0 for l in rr)


class TestTrajectoryCsv:
    def test_round_trip(self, tmp_path):
        cfg = small_config(repetitions=1)
        result = run_experiment(cfg)
        traj = result.stats["decoupled"].trajectories[0]
        path = tmp_path / "traj.csv"
        write_trajectory_csv(path, traj)
        back = load_trajectory_csv(path, k=3)
        np.testing.assert_array_equal(back.choices, traj.choices)
        np.testing.assert_array_equal(back.queries, traj.queries)
        np.testing.assert_allclose(back.half_norms, traj.half_norms, atol=1e-8)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n")
        with pytest.raises(ValueError, match="header"):
            load_trajectory_csv(path, k=2)
