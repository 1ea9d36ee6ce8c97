"""A compact run of the channel-selection comparison.

Ten channels, one of them "good" (high-mean truncated Gaussian) with its
identity redrawn at exponential switching times, the rest noisy.  Compares
the decoupled learner against EXP3, EXP3.P, round robin and the greedy
fixed-query baseline on a shared reward realization, averaged over
repetitions.

This is a scaled-down version (T=4000, 10 repetitions) of the shipped
config at configs/uwb_reference.json; run that one through the CLI for the
full 50-repetition experiment:

    decoupled-bandits run --config configs/uwb_reference.json
"""

import math
import tempfile
from pathlib import Path

from decoupled_bandits import (
    AlgorithmSpec,
    EmitFlags,
    EnvSpec,
    ExperimentConfig,
    run_experiment,
)

config = ExperimentConfig(
    env=EnvSpec(variant="uwb", k=10, T=4000, seed=20263, switch_rate=1 / 320,
                noisy_uniform_range=(0.0, 3.0), noisy_gauss_mean_range=(0.0, 3.0)),
    algorithms=(
        AlgorithmSpec("decoupled", overrides={"mu": math.sqrt(10), "delta": 0.3}),
        AlgorithmSpec("exp3"),
        AlgorithmSpec("exp3p", overrides={"delta": 0.3}),
        AlgorithmSpec("round_robin"),
        AlgorithmSpec("greedy_decoupled"),
    ),
    repetitions=10,
    base_seed=777,
    emit=EmitFlags(half_norms=True),
)

out = Path(tempfile.mkdtemp(prefix="uwb_demo_"))
result = run_experiment(config, out_dir=out, quiet=False)

print(f"\nswitch times: {result.ground_truth.switch_times}")
print("\nfinal average reward (mean +/- std over repetitions):")
for label, st in sorted(result.stats.items(), key=lambda kv: -kv[1].final_mean):
    print(f"  {label:18s} {st.final_mean:.4f} +/- {st.std_curve[-1]:.4f}")
print(f"\nCSV outputs written to {out}")
print("plot them with the frontend tool:")
print(f"  node frontend/dist/plot.js reward --in {out} --out reward.svg")
print(f"  node frontend/dist/plot.js counts --in {out} --file counts_decoupled.csv "
      f"--arms 0,5 --out counts.svg")
