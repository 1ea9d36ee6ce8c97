"""Experiment orchestration: config, seeding, repetitions, CSV/JSON output.

The protocol mirrors the channel-selection study: one reward matrix is
generated per experiment (a single realization) and every (algorithm,
repetition) pair runs against that same matrix, with only the algorithms'
internal randomness varying across repetitions.  An opt-in flag redraws
the environment per repetition for robustness studies.

Seeding: repetition r of algorithm label a runs with
``sha256("{base_seed}:{a}:{r}")`` truncated to 64 bits, so adding or
removing algorithms from a config never perturbs the draws of the others.

Output schemas (all floats with 9 significant digits):
  reward_curves.csv   t, algo, mean, std        (mean/std over repetitions
                                                 of cumulative reward / t)
  half_norms.csv      t, algo, mean, std
  counts_<label>.csv  t, choose_arm_i..., query_arm_i...  (means over reps)
  trajectory_<label>_rep<r>.csv  t, chosen, queried, reward, half_norm
  regret.json, summary.json
  env.csv / env.meta.json        (the shared matrix, full precision)
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .algorithms import (
    DecoupledBandit,
    DoublingDecoupledBandit,
    Exp3,
    Exp3P,
    GreedyDecoupled,
    HorizonTooSmallError,
    RoundRobin,
    SwitchingDecoupledBandit,
    derive_params,
    select_mu,
)
from .core import Rng
from .environments import EnvSpec, GroundTruth, generate, save_ground_truth
from .metrics import (
    Trajectory,
    count_curves,
    static_regret,
    switching_regret,
    write_count_curves_csv,
)

__all__ = [
    "ALGORITHM_NAMES",
    "AlgorithmSpec",
    "EmitFlags",
    "ExperimentConfig",
    "AlgoStats",
    "RunResult",
    "derive_seed",
    "make_learner",
    "run_one",
    "run_experiment",
    "write_trajectory_csv",
    "load_trajectory_csv",
]

ALGORITHM_NAMES = (
    "decoupled",
    "decoupled_switching",
    "decoupled_doubling",
    "exp3",
    "exp3p",
    "round_robin",
    "greedy_decoupled",
)

_KNOWN_OVERRIDES = {
    "decoupled": {"mu", "delta", "queries_per_round"},
    "decoupled_switching": {"mu", "delta", "S", "queries_per_round"},
    "decoupled_doubling": {"initial_v", "delta", "inner_variant", "S", "queries_per_round"},
    "exp3": set(),
    "exp3p": {"delta"},
    "round_robin": set(),
    "greedy_decoupled": set(),
}


@dataclass(frozen=True)
class AlgorithmSpec:
    """One algorithm entry of a config: registry name, display label and
    parameter overrides (defaults fill anything omitted)."""

    name: str
    label: Optional[str] = None
    overrides: dict = field(default_factory=dict)

    @property
    def display(self) -> str:
        return self.label or self.name

    def to_dict(self) -> dict:
        d = {"name": self.name}
        if self.label:
            d["label"] = self.label
        if self.overrides:
            d["overrides"] = dict(self.overrides)
        return d

    @classmethod
    def from_dict(cls, d) -> "AlgorithmSpec":
        if isinstance(d, str):
            return cls(name=d)
        extra = set(d) - {"name", "label", "overrides"}
        if extra:
            raise ValueError(f"unknown algorithm spec fields: {sorted(extra)}")
        return cls(name=d["name"], label=d.get("label"), overrides=dict(d.get("overrides", {})))


@dataclass(frozen=True)
class EmitFlags:
    reward_curves: bool = True
    count_curves: bool = True
    regret: bool = True
    half_norms: bool = False
    trajectories: bool = False
    env: bool = True

    def to_dict(self) -> dict:
        return {
            "reward_curves": self.reward_curves,
            "count_curves": self.count_curves,
            "regret": self.regret,
            "half_norms": self.half_norms,
            "trajectories": self.trajectories,
            "env": self.env,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EmitFlags":
        extra = set(d) - set(cls().to_dict())
        if extra:
            raise ValueError(f"unknown emit flags: {sorted(extra)}")
        return cls(**d)


@dataclass(frozen=True)
class ExperimentConfig:
    env: EnvSpec
    algorithms: tuple[AlgorithmSpec, ...]
    repetitions: int
    base_seed: int
    out_dir: Optional[str] = None
    emit: EmitFlags = EmitFlags()
    redraw_env_per_rep: bool = False
    regret_segments: tuple[int, ...] = ()
    schema_version: int = 1

    def validate(self) -> None:
        if self.schema_version != 1:
            raise ValueError(f"unsupported config schema_version {self.schema_version}")
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")
        labels = [a.display for a in self.algorithms]
        if not labels:
            raise ValueError("config lists no algorithms")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate algorithm labels: {labels}")
        for a in self.algorithms:
            if a.name not in ALGORITHM_NAMES:
                raise ValueError(
                    f"unknown algorithm {a.name!r}; registered: {', '.join(ALGORITHM_NAMES)}"
                )
            extra = set(a.overrides) - _KNOWN_OVERRIDES[a.name]
            if extra:
                raise ValueError(f"algorithm {a.display!r}: unknown overrides {sorted(extra)}")
        for s in self.regret_segments:
            if not 1 <= int(s) <= self.env.T:
                raise ValueError(f"regret segment count {s} outside [1, T]")

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "env": self.env.to_dict(),
            "algorithms": [a.to_dict() for a in self.algorithms],
            "repetitions": self.repetitions,
            "base_seed": self.base_seed,
            "out_dir": self.out_dir,
            "emit": self.emit.to_dict(),
            "redraw_env_per_rep": self.redraw_env_per_rep,
            "regret_segments": list(self.regret_segments),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        extra = set(d) - {"schema_version", "env", "algorithms", "repetitions",
                          "base_seed", "out_dir", "emit", "redraw_env_per_rep",
                          "regret_segments"}
        if extra:
            raise ValueError(f"unknown config fields: {sorted(extra)}")
        for required in ("env", "algorithms", "repetitions", "base_seed"):
            if required not in d:
                raise ValueError(f"config is missing required field {required!r}")
        cfg = cls(
            env=EnvSpec.from_dict(d["env"]),
            algorithms=tuple(AlgorithmSpec.from_dict(a) for a in d["algorithms"]),
            repetitions=int(d["repetitions"]),
            base_seed=int(d["base_seed"]),
            out_dir=d.get("out_dir"),
            emit=EmitFlags.from_dict(d.get("emit", {})),
            redraw_env_per_rep=bool(d.get("redraw_env_per_rep", False)),
            regret_segments=tuple(int(s) for s in d.get("regret_segments", ())),
            schema_version=int(d.get("schema_version", 1)),
        )
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"config file not found: {path}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ValueError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)


def derive_seed(base_seed: int, label: str, rep: int) -> int:
    """Documented hash: sha256 of '{base_seed}:{label}:{rep}', first 8
    bytes little-endian."""
    digest = hashlib.sha256(f"{base_seed}:{label}:{rep}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def make_learner(spec: AlgorithmSpec, k: int, T: int):
    """Instantiate a registered learner with defaults filled in.

    Decoupled variants default to mu = select_mu(k, T) and delta = 0.1;
    the switching variant defaults to S = 2 and the doubling wrapper to an
    initial guess v = 1.
    """
    ov = spec.overrides
    if spec.name == "decoupled":
        params = derive_params(
            ov.get("mu", select_mu(k, T)), ov.get("delta", 0.1), T, k,
            S=1, variant="decoupled",
            queries_per_round=int(ov.get("queries_per_round", 1)),
        )
        return DecoupledBandit(params)
    if spec.name == "decoupled_switching":
        params = derive_params(
            ov.get("mu", select_mu(k, T)), ov.get("delta", 0.1), T, k,
            S=int(ov.get("S", 2)), variant="switching",
            queries_per_round=int(ov.get("queries_per_round", 1)),
        )
        return SwitchingDecoupledBandit(params)
    if spec.name == "decoupled_doubling":
        return DoublingDecoupledBandit(
            initial_v=float(ov.get("initial_v", 1.0)),
            delta=ov.get("delta", 0.1), T=T, k=k,
            inner_variant=ov.get("inner_variant", "decoupled"),
            S=int(ov.get("S", 1)),
            queries_per_round=int(ov.get("queries_per_round", 1)),
        )
    if spec.name == "exp3":
        return Exp3(k, T)
    if spec.name == "exp3p":
        return Exp3P(k, T, delta=ov.get("delta", 0.1))
    if spec.name == "round_robin":
        return RoundRobin(k, T)
    if spec.name == "greedy_decoupled":
        return GreedyDecoupled(k, T)
    raise ValueError(f"unknown algorithm {spec.name!r}")


def run_one(learner, gt: GroundTruth, rng: Rng) -> Trajectory:
    """Run one learner for the full horizon against one matrix."""
    values = gt.matrix.values
    k, T = gt.matrix.k, gt.matrix.T

    def oracle(t: int, arm: int) -> float:
        return values[arm, t - 1]

    c = getattr(learner, "params", None)
    c = c.queries_per_round if c is not None else 1
    choices = np.empty(T, dtype=np.int64)
    queries = np.empty((T, c), dtype=np.int64)
    accrued = np.empty(T)
    half_norms = np.empty(T)
    for t in range(1, T + 1):
        dec = learner.step(t, oracle, rng)
        choices[t - 1] = dec.chosen
        queries[t - 1] = dec.queried
        accrued[t - 1] = values[dec.chosen, t - 1]
        s = float(np.sqrt(dec.action_dist.entries).sum())
        half_norms[t - 1] = s * s
    restarts = tuple(getattr(learner, "restarts", ()))
    return Trajectory(k=k, choices=choices, queries=queries,
                      rewards_accrued=accrued, half_norms=half_norms,
                      restarts=restarts)


@dataclass
class AlgoStats:
    """Aggregated results of one algorithm across repetitions."""

    spec: AlgorithmSpec
    trajectories: list[Trajectory]
    mean_curve: np.ndarray
    std_curve: np.ndarray
    mean_half_norm_curve: np.ndarray
    std_half_norm_curve: np.ndarray
    mean_choose_counts: np.ndarray
    mean_query_counts: np.ndarray
    static_regrets: np.ndarray
    best_fixed_arms: list[int]
    switching_regrets: dict[int, np.ndarray]
    restarts: list[tuple[int, ...]]
    wall_clock: float

    @property
    def final_mean(self) -> float:
        return float(self.mean_curve[-1])


@dataclass
class RunResult:
    config: ExperimentConfig
    ground_truth: GroundTruth
    stats: dict[str, AlgoStats]
    errors: dict[str, str]
    out_dir: Optional[Path]


def _sample_std(stack: np.ndarray) -> np.ndarray:
    if stack.shape[0] < 2:
        return np.zeros(stack.shape[1])
    return stack.std(axis=0, ddof=1)


def _run_algorithm(config: ExperimentConfig, spec: AlgorithmSpec,
                   gt: GroundTruth) -> AlgoStats:
    k, T = config.env.k, config.env.T
    started = time.perf_counter()
    trajectories = []
    for rep in range(config.repetitions):
        if config.redraw_env_per_rep:
            rep_spec = replace(config.env, seed=derive_seed(config.env.seed, "env", rep))
            gt_rep = generate(rep_spec)
        else:
            gt_rep = gt
        learner = make_learner(spec, k, T)
        rng = Rng(derive_seed(config.base_seed, spec.display, rep))
        trajectories.append((run_one(learner, gt_rep, rng), gt_rep))

    t_axis = np.arange(1, T + 1, dtype=np.float64)
    curves = np.stack([np.cumsum(tr.rewards_accrued) / t_axis for tr, _ in trajectories])
    half_curves = np.stack([tr.half_norms for tr, _ in trajectories])
    statics, bests = [], []
    switch: dict[int, list[float]] = {int(s): [] for s in config.regret_segments}
    choose_sum = np.zeros((k, T))
    query_sum = np.zeros((k, T))
    for tr, gt_rep in trajectories:
        r, b = static_regret(gt_rep.matrix, tr)
        statics.append(r)
        bests.append(b)
        for s in switch:
            switch[s].append(switching_regret(gt_rep.matrix, tr, s)[0])
        ch, qu = count_curves(tr)
        choose_sum += ch
        query_sum += qu
    reps = config.repetitions
    return AlgoStats(
        spec=spec,
        trajectories=[tr for tr, _ in trajectories],
        mean_curve=curves.mean(axis=0),
        std_curve=_sample_std(curves),
        mean_half_norm_curve=half_curves.mean(axis=0),
        std_half_norm_curve=_sample_std(half_curves),
        mean_choose_counts=choose_sum / reps,
        mean_query_counts=query_sum / reps,
        static_regrets=np.asarray(statics),
        best_fixed_arms=bests,
        switching_regrets={s: np.asarray(v) for s, v in switch.items()},
        restarts=[tr.restarts for tr, _ in trajectories],
        wall_clock=time.perf_counter() - started,
    )


def _write_grouped_curve_csv(path: Path, stats: dict[str, AlgoStats],
                             curve: str) -> None:
    lines = ["t,algo,mean,std"]
    for label, st in stats.items():
        mean = getattr(st, f"mean_{curve}")
        std = getattr(st, f"std_{curve}")
        for t in range(mean.shape[0]):
            lines.append(f"{t + 1},{label},{mean[t]:.9g},{std[t]:.9g}")
    path.write_text("\n".join(lines) + "\n")


def write_trajectory_csv(path, traj: Trajectory) -> None:
    lines = ["t,chosen,queried,reward,half_norm"]
    for t in range(traj.T):
        queried = ";".join(str(int(j)) for j in traj.queries[t])
        lines.append(
            f"{t + 1},{int(traj.choices[t])},{queried},"
            f"{traj.rewards_accrued[t]:.9g},{traj.half_norms[t]:.9g}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def load_trajectory_csv(path, k: int) -> Trajectory:
    path = Path(path)
    lines = path.read_text().strip().splitlines()
    if not lines or lines[0] != "t,chosen,queried,reward,half_norm":
        raise ValueError(f"{path}: expected trajectory header 't,chosen,queried,reward,half_norm'")
    choices, queries, rewards, half = [], [], [], []
    for i, line in enumerate(lines[1:]):
        parts = line.split(",")
        if len(parts) != 5:
            raise ValueError(f"{path}: row {i + 2} has {len(parts)} fields, expected 5")
        if int(parts[0]) != i + 1:
            raise ValueError(f"{path}: rows must be ordered t = 1..T")
        choices.append(int(parts[1]))
        queries.append([int(x) for x in parts[2].split(";")])
        rewards.append(float(parts[3]))
        half.append(float(parts[4]))
    return Trajectory(k=k, choices=np.asarray(choices), queries=np.asarray(queries),
                      rewards_accrued=np.asarray(rewards), half_norms=np.asarray(half))


def run_experiment(config: ExperimentConfig, out_dir=None, quiet: bool = True) -> RunResult:
    """Run every (algorithm, repetition) pair and write the emitted files.

    Infeasible parameters (horizon too small for a mu choice) are recorded
    per algorithm without aborting the others.  Fully deterministic under
    (config, base_seed): reruns produce byte-identical files.
    """
    config.validate()
    target = out_dir or config.out_dir
    out_path: Optional[Path] = None
    if target is not None:
        out_path = Path(target)
        out_path.mkdir(parents=True, exist_ok=True)

    gt = generate(config.env)
    stats: dict[str, AlgoStats] = {}
    errors: dict[str, str] = {}
    for spec in config.algorithms:
        try:
            make_learner(spec, config.env.k, config.env.T)
        except HorizonTooSmallError as exc:
            errors[spec.display] = str(exc)
            if not quiet:
                print(f"[skip] {spec.display}: {exc}")
            continue
        stats[spec.display] = _run_algorithm(config, spec, gt)
        if not quiet:
            st = stats[spec.display]
            print(f"[done] {spec.display}: final avg reward {st.final_mean:.4f} "
                  f"({st.wall_clock:.1f}s)")

    result = RunResult(config=config, ground_truth=gt, stats=stats,
                       errors=errors, out_dir=out_path)
    if out_path is not None:
        _write_outputs(result)
    return result


def _write_outputs(result: RunResult) -> None:
    config = result.config
    out = result.out_dir
    emit = config.emit
    if emit.env and not config.redraw_env_per_rep:
        save_ground_truth(result.ground_truth, out / "env.csv")
    if emit.reward_curves and result.stats:
        _write_grouped_curve_csv(out / "reward_curves.csv", result.stats, "curve")
    if emit.half_norms and result.stats:
        _write_grouped_curve_csv(out / "half_norms.csv", result.stats, "half_norm_curve")
    if emit.count_curves:
        for label, st in result.stats.items():
            write_count_curves_csv(out / f"counts_{label}.csv",
                                   st.mean_choose_counts, st.mean_query_counts)
    if emit.trajectories:
        for label, st in result.stats.items():
            for rep, tr in enumerate(st.trajectories):
                write_trajectory_csv(out / f"trajectory_{label}_rep{rep}.csv", tr)
    if emit.regret:
        regret: dict[str, dict] = {}
        for label, st in result.stats.items():
            per_rep = [float(x) for x in st.static_regrets]
            entry = {
                "static_mean": float(st.static_regrets.mean()),
                "static_std": float(st.static_regrets.std(ddof=1)) if len(per_rep) > 1 else 0.0,
                "static_per_rep": per_rep,
                "best_fixed_arm": st.best_fixed_arms[0]
                if len(set(st.best_fixed_arms)) == 1 else st.best_fixed_arms,
                "switching": {
                    str(s): {
                        "mean": float(v.mean()),
                        "std": float(v.std(ddof=1)) if len(v) > 1 else 0.0,
                        "per_rep": [float(x) for x in v],
                    }
                    for s, v in sorted(st.switching_regrets.items())
                },
            }
            regret[label] = entry
        (out / "regret.json").write_text(
            json.dumps({"schema_version": 1, "algorithms": regret},
                       indent=2, sort_keys=True) + "\n")

    summary = {
        "schema_version": 1,
        "config": config.to_dict(),
        "errors": result.errors,
        "switch_times": list(result.ground_truth.switch_times),
        "algorithms": {
            label: {
                "final_avg_reward_mean": st.final_mean,
                "final_avg_reward_std": float(st.std_curve[-1]),
                "wall_clock_seconds": round(st.wall_clock, 3),
                "restarts": [list(r) for r in st.restarts],
            }
            for label, st in result.stats.items()
        },
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
