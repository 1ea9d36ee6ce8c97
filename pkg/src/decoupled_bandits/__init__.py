"""Decoupled exploration/exploitation bandits.

A library and experiment harness for adversarial multi-armed bandits in
which the exploited arm and the queried (observed) arm are chosen
separately each round.  The decoupled learners query with probability
proportional to the square root of the action probabilities, which
minimizes the importance-weighting variance; baselines (EXP3, EXP3.P,
round robin, greedy with uniform queries), piecewise-stationary reward
environments, regret oracles and a reproducible experiment runner round
out the package.
"""

from .core import (
    ProbVector,
    RewardMatrix,
    Rng,
    half_norm,
    query_distribution,
    sample_categorical,
)
from .algorithms import (
    DecoupledBandit,
    DecoupledParams,
    DoublingDecoupledBandit,
    Exp3,
    Exp3P,
    GreedyDecoupled,
    HorizonTooSmallError,
    RoundDecision,
    RoundRobin,
    SwitchingDecoupledBandit,
    derive_params,
    estimate_rewards,
    select_mu,
)
from .environments import (
    EnvSpec,
    GroundTruth,
    gen_iid_gap,
    gen_thm5_switching,
    gen_uwb,
    generate,
    load_reward_matrix,
    query_oracle,
    save_ground_truth,
)
from .metrics import (
    RegretReport,
    Trajectory,
    count_curves,
    empirical_P,
    static_regret,
    switching_regret,
)
from .runner import (
    ALGORITHM_NAMES,
    AlgorithmSpec,
    EmitFlags,
    ExperimentConfig,
    RunResult,
    derive_seed,
    make_learner,
    run_experiment,
    run_one,
)

__version__ = "0.1.0"

__all__ = [
    "ProbVector", "RewardMatrix", "Rng",
    "half_norm", "query_distribution", "sample_categorical",
    "DecoupledParams", "HorizonTooSmallError", "RoundDecision",
    "derive_params", "select_mu", "estimate_rewards",
    "DecoupledBandit", "SwitchingDecoupledBandit", "DoublingDecoupledBandit",
    "Exp3", "Exp3P", "RoundRobin", "GreedyDecoupled",
    "EnvSpec", "GroundTruth", "generate",
    "gen_iid_gap", "gen_thm5_switching", "gen_uwb",
    "query_oracle", "save_ground_truth", "load_reward_matrix",
    "Trajectory", "RegretReport",
    "static_regret", "switching_regret", "empirical_P", "count_curves",
    "ALGORITHM_NAMES", "AlgorithmSpec", "EmitFlags", "ExperimentConfig",
    "RunResult", "derive_seed", "make_learner", "run_one", "run_experiment",
]
