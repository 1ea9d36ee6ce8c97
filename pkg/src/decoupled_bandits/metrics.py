"""Regret computation, half-norm statistics and count curves.

The switching (S-segment) comparator is computed by dynamic programming
over (segment count, round, last arm) in O(S * T * k) time, which a test
suite checks exactly against exhaustive enumeration on small instances.
Regret of decoupled learners is always measured on the chosen arms; the
queried arms carry information only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import RewardMatrix

__all__ = [
    "Trajectory",
    "RegretReport",
    "static_regret",
    "switching_regret",
    "empirical_P",
    "count_curves",
    "write_count_curves_csv",
]

_NEG = -np.inf


@dataclass(frozen=True)
class Trajectory:
    """Per-round record of one run.

    ``queries`` has one row per round with ``c`` entries (the i.i.d. query
    draws of that round).  ``half_norms`` holds the non-uniformity measure
    of the action distribution each round and therefore lies in [1, k].
    ``restarts`` lists rounds after which a doubling restart fired.
    """

    k: int
    choices: np.ndarray
    queries: np.ndarray
    rewards_accrued: np.ndarray
    half_norms: np.ndarray
    restarts: tuple[int, ...] = ()

    def __post_init__(self):
        choices = np.asarray(self.choices, dtype=np.int64)
        queries = np.asarray(self.queries, dtype=np.int64)
        if queries.ndim == 1:
            queries = queries[:, None]
        rewards = np.asarray(self.rewards_accrued, dtype=np.float64)
        half = np.asarray(self.half_norms, dtype=np.float64)
        T = choices.shape[0]
        if not (queries.shape[0] == rewards.shape[0] == half.shape[0] == T):
            raise ValueError("trajectory fields must all have length T")
        if T and (half.min() < 1.0 - 1e-9 or half.max() > self.k + 1e-9):
            raise ValueError("half-norm entries must lie in [1, k]")
        for name, arr in (("choices", choices), ("queries", queries),
                          ("rewards_accrued", rewards), ("half_norms", half)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def T(self) -> int:
        return self.choices.shape[0]

    @property
    def queries_per_round(self) -> int:
        return self.queries.shape[1]


@dataclass(frozen=True)
class RegretReport:
    """Static and S-segment regret of a trajectory against one matrix."""

    static_regret: float
    best_fixed_arm: int
    switching_regret: dict[int, float] = field(default_factory=dict)
    best_segmentation: dict[int, tuple[tuple[int, int], ...]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "static_regret": self.static_regret,
            "best_fixed_arm": self.best_fixed_arm,
            "switching_regret": {str(s): v for s, v in sorted(self.switching_regret.items())},
            "best_segmentation": {
                str(s): [[int(a), int(b)] for a, b in seg]
                for s, seg in sorted(self.best_segmentation.items())
            },
        }


def _check_dims(matrix: RewardMatrix, traj: Trajectory) -> None:
    if traj.T != matrix.T or traj.k != matrix.k:
        raise ValueError(
            f"dimension mismatch: matrix is {matrix.k}x{matrix.T}, "
            f"trajectory is {traj.k}x{traj.T}"
        )
    if traj.T and (traj.choices.min() < 0 or traj.choices.max() >= matrix.k):
        raise ValueError("trajectory chooses arms outside the matrix")


def _accrued(matrix: RewardMatrix, traj: Trajectory) -> float:
    return float(np.cumsum(matrix.values[traj.choices, np.arange(traj.T)])[-1]) if traj.T else 0.0


def static_regret(matrix: RewardMatrix, traj: Trajectory) -> tuple[float, int]:
    """Best fixed arm's cumulative reward minus the learner's.

    Row totals accumulate left to right (cumsum order) so the result agrees
    exactly with the S = 1 dynamic program.  Ties go to the lowest index.
    """
    _check_dims(matrix, traj)
    totals = np.cumsum(matrix.values, axis=1)[:, -1]
    best = int(np.argmax(totals))
    return float(totals[best]) - _accrued(matrix, traj), best


def switching_regret(matrix: RewardMatrix, traj: Trajectory, S: int) -> tuple[float, tuple[tuple[int, int], ...]]:
    """Regret against the best contiguous S-segmentation with per-segment arms.

    Dynamic program over f[s][i] = best comparator value for rounds 1..t
    using s segments with the last segment playing arm i:

        f[s][i](t) = g_i(t) + max( f[s][i](t-1),  max_j f[s-1][j](t-1) )

    O(S*T*k) time.  Tie-breaking is deterministic: continuing the current
    segment wins over opening a new one (earliest boundary), and the lowest
    arm index wins inside every argmax.  Returns (regret, segmentation) with
    the segmentation as ((start_round, arm), ...) using 1-based rounds.
    """
    _check_dims(matrix, traj)
    T, k = matrix.T, matrix.k
    if not 1 <= S <= T:
        raise ValueError(f"segment count S={S} outside [1, {T}]")
    g = matrix.values

    f = np.full((S + 1, k), _NEG)
    started_new = np.zeros((T + 1, S + 1, k), dtype=bool)
    start_arm = np.zeros((T + 1, S + 1), dtype=np.int32)
    for t in range(1, T + 1):
        col = g[:, t - 1]
        new_f = np.full((S + 1, k), _NEG)
        for s in range(min(S, t), 0, -1):
            cont = f[s]
            if s == 1:
                start_val = 0.0 if t == 1 else _NEG
                prev_arm = 0
            else:
                prev = f[s - 1]
                prev_arm = int(np.argmax(prev))
                start_val = prev[prev_arm]
            # prefer continuing on ties: only a strictly better start opens
            # a new segment
            open_new = start_val > cont
            new_f[s] = col + np.where(open_new, start_val, cont)
            started_new[t, s] = open_new
            start_arm[t, s] = prev_arm
        f = new_f

    best_arm = int(np.argmax(f[S]))
    comparator = float(f[S, best_arm])

    segments: list[tuple[int, int]] = []
    s, i = S, best_arm
    t = T
    while t >= 1:
        if started_new[t, s, i]:
            segments.append((t, int(i)))
            i = int(start_arm[t, s])
            s -= 1
        t -= 1
    segments.reverse()

    return comparator - _accrued(matrix, traj), tuple(segments)


def empirical_P(trajectories: Sequence[Trajectory], v: float) -> float:
    """Fraction of trajectories whose time-averaged half-norm strictly
    exceeds v (strict, matching the defining tail probability)."""
    if not trajectories:
        raise ValueError("empirical_P needs at least one trajectory")
    if not 1.0 <= v <= trajectories[0].k:
        raise ValueError(f"v must lie in [1, k], got {v}")
    T = trajectories[0].T
    if any(tr.T != T for tr in trajectories):
        raise ValueError("all trajectories must share the same horizon")
    means = np.array([tr.half_norms.mean() for tr in trajectories])
    return float(np.mean(means > v))


def count_curves(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative per-arm choose and query counts over time (two k x T
    tables).  At round t the choose column sums to t and the query column
    to c*t."""
    T, k = traj.T, traj.k
    choose_ind = np.zeros((k, T))
    choose_ind[traj.choices, np.arange(T)] = 1.0
    query_ind = np.zeros((k, T))
    for c in range(traj.queries.shape[1]):
        np.add.at(query_ind, (traj.queries[:, c], np.arange(T)), 1.0)
    return np.cumsum(choose_ind, axis=1), np.cumsum(query_ind, axis=1)


def write_count_curves_csv(path, choose: np.ndarray, query: np.ndarray) -> None:
    """Write count curves as ``t, choose_arm_0.., query_arm_0..`` rows.

    Accepts fractional counts (averages over repetitions)."""
    choose = np.asarray(choose, dtype=np.float64)
    query = np.asarray(query, dtype=np.float64)
    if choose.shape != query.shape:
        raise ValueError("choose and query tables must have the same shape")
    k, T = choose.shape
    header = ("t,"
              + ",".join(f"choose_arm_{j}" for j in range(k)) + ","
              + ",".join(f"query_arm_{j}" for j in range(k)))
    lines = [header]
    for t in range(T):
        cells = [str(t + 1)]
        cells += [f"{choose[j, t]:.9g}" for j in range(k)]
        cells += [f"{query[j, t]:.9g}" for j in range(k)]
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")
