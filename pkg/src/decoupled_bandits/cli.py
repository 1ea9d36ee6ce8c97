"""Command-line interface.

    decoupled-bandits run --config experiment.json [--seed N] [--out-dir D] [--quiet]
    decoupled-bandits gen-env --spec env.json --out matrix.csv [--seed N] [--quiet]
    decoupled-bandits regret --matrix matrix.csv --trajectory traj.csv
                             [--segments S] [--out report.json] [--quiet]

Exit codes: 0 success, 1 validation error (bad flags, missing or malformed
files, unknown algorithms), 2 runtime error.  Errors are reported as a
single JSON line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .environments import EnvSpec, generate, load_reward_matrix, save_ground_truth
from .metrics import RegretReport, static_regret, switching_regret
from .runner import ExperimentConfig, load_trajectory_csv, run_experiment

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decoupled-bandits",
        description="Decoupled-bandit experiment harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("--config", required=True, help="experiment config JSON")
    p_run.add_argument("--seed", type=int, default=None, help="override base_seed")
    p_run.add_argument("--out-dir", default=None, help="override output directory")
    p_run.add_argument("--quiet", action="store_true", help="suppress stdout")

    p_gen = sub.add_parser("gen-env", help="generate a reward matrix from an env spec")
    p_gen.add_argument("--spec", required=True, help="environment spec JSON")
    p_gen.add_argument("--out", required=True, help="output matrix CSV path")
    p_gen.add_argument("--seed", type=int, default=None, help="override spec seed")
    p_gen.add_argument("--quiet", action="store_true", help="suppress stdout")

    p_reg = sub.add_parser("regret", help="compute regret of a trajectory")
    p_reg.add_argument("--matrix", required=True, help="matrix CSV (gen-env format)")
    p_reg.add_argument("--trajectory", required=True, help="trajectory CSV")
    p_reg.add_argument("--segments", type=int, default=None,
                       help="also report S-segment switching regret")
    p_reg.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    p_reg.add_argument("--quiet", action="store_true", help="suppress stdout")
    return parser


def _cmd_run(args) -> int:
    config = ExperimentConfig.from_json(args.config)
    if args.seed is not None:
        config = replace(config, base_seed=args.seed)
    result = run_experiment(config, out_dir=args.out_dir, quiet=args.quiet)
    if not args.quiet:
        for label, st in result.stats.items():
            print(f"{label}: final average reward {st.final_mean:.6g}")
        for label, msg in result.errors.items():
            print(f"{label}: skipped ({msg})")
    return 0


def _cmd_gen_env(args) -> int:
    spec_path = Path(args.spec)
    if not spec_path.exists():
        raise FileNotFoundError(f"env spec not found: {spec_path}")
    try:
        spec = EnvSpec.from_dict(json.loads(spec_path.read_text()))
    except json.JSONDecodeError as exc:
        raise ValueError(f"env spec {spec_path} is not valid JSON: {exc}") from exc
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    gt = generate(spec)
    save_ground_truth(gt, args.out)
    if not args.quiet:
        print(f"wrote {gt.matrix.k}x{gt.matrix.T} matrix to {args.out}")
    return 0


def _cmd_regret(args) -> int:
    matrix_path = Path(args.matrix)
    traj_path = Path(args.trajectory)
    for p in (matrix_path, traj_path):
        if not p.exists():
            raise FileNotFoundError(f"input not found: {p}")
    matrix = load_reward_matrix(matrix_path)
    traj = load_trajectory_csv(traj_path, k=matrix.k)
    sreg, best = static_regret(matrix, traj)
    switching: dict[int, float] = {}
    segmentation: dict[int, tuple] = {}
    if args.segments is not None:
        value, seg = switching_regret(matrix, traj, args.segments)
        switching[args.segments] = value
        segmentation[args.segments] = seg
    report = RegretReport(static_regret=sreg, best_fixed_arm=best,
                          switching_regret=switching, best_segmentation=segmentation)
    payload = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(payload)
    elif not args.quiet:
        sys.stdout.write(payload)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed a usage message
        return 1 if exc.code not in (0, None) else 0
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "gen-env":
            return _cmd_gen_env(args)
        return _cmd_regret(args)
    except (ValueError, FileNotFoundError) as exc:
        print(json.dumps({"error": str(exc), "kind": "validation"}), file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(json.dumps({"error": str(exc), "kind": "runtime"}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
