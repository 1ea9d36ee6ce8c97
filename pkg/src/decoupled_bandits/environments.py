"""Reward-matrix generators for the simulated settings.

All environments are oblivious: the full k x T reward table is drawn up
front, before any learner acts, and querying a cell never perturbs it.
Three families are provided:

* ``iid_gap`` -- i.i.d. Bernoulli arms where a "good" subset beats every
  other arm in expectation by at least a fixed gap.
* ``thm5_switching`` -- the randomized two-phase construction: one arm is
  Bernoulli(1/2) throughout, a random arm jumps from Bernoulli(0.3) to
  Bernoulli(0.7) at a random shift round (with probability 1/2 no shift
  happens at all), everything else stays at Bernoulli(0.3).
* ``uwb`` -- a loaded channel-selection scenario: one "good" channel with
  a high-mean truncated Gaussian, k-1 noisy channels alternating between
  uniform and truncated-Gaussian laws, all parameters redrawn at
  exponentially spaced switching epochs.  Raw rewards live in
  [0, reward_ceiling] and are stored normalized to [0, 1].

Matrices serialize to a CSV (header ``t,arm_0,...,arm_{k-1}``, one row per
round, normalized values) plus a JSON sidecar with the spec, seed, switch
times, best-arm schedule and raw scale.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.stats import truncnorm

from .core import RewardMatrix, Rng

__all__ = [
    "EnvSpec",
    "GroundTruth",
    "generate",
    "gen_iid_gap",
    "gen_thm5_switching",
    "gen_uwb",
    "query_oracle",
    "save_ground_truth",
    "load_reward_matrix",
    "load_metadata",
    "metadata_path",
]

THM5_GAP = 0.2  # fixed Bernoulli gap of the two-phase construction

_VARIANTS = ("iid_gap", "thm5_switching", "uwb")


@dataclass(frozen=True)
class EnvSpec:
    """Declarative description of a reward environment.

    Only the fields relevant to ``variant`` are consulted; the uwb
    parameter ranges have defaults but every one of them can be overridden
    from a config.
    """

    variant: str
    k: int
    T: int
    seed: int
    # iid_gap
    good_arms: Optional[tuple[int, ...]] = None
    gap: Optional[float] = None
    means: Optional[tuple[float, ...]] = None
    # uwb
    switch_rate: Optional[float] = None
    reward_ceiling: float = 6.0
    noisy_uniform_range: tuple[float, float] = (0.0, 6.0)
    noisy_gauss_mean_range: tuple[float, float] = (0.0, 6.0)
    good_gauss_mean_range: tuple[float, float] = (3.0, 6.0)
    gauss_std_range: tuple[float, float] = (0.5, 2.0)

    def to_dict(self) -> dict:
        d = {"variant": self.variant, "k": self.k, "T": self.T, "seed": self.seed}
        if self.variant == "iid_gap":
            d["good_arms"] = list(self.good_arms or ())
            d["gap"] = self.gap
            if self.means is not None:
                d["means"] = list(self.means)
        elif self.variant == "uwb":
            d["switch_rate"] = self.switch_rate
            d["reward_ceiling"] = self.reward_ceiling
            d["noisy_uniform_range"] = list(self.noisy_uniform_range)
            d["noisy_gauss_mean_range"] = list(self.noisy_gauss_mean_range)
            d["good_gauss_mean_range"] = list(self.good_gauss_mean_range)
            d["gauss_std_range"] = list(self.gauss_std_range)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EnvSpec":
        kwargs = dict(d)
        for key in ("good_arms", "means", "noisy_uniform_range",
                    "noisy_gauss_mean_range", "good_gauss_mean_range",
                    "gauss_std_range"):
            if key in kwargs and kwargs[key] is not None:
                kwargs[key] = tuple(kwargs[key])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ValueError(f"bad environment spec: {exc}") from exc


@dataclass(frozen=True)
class GroundTruth:
    """A realized environment: the committed matrix plus its metadata."""

    spec: EnvSpec
    matrix: RewardMatrix
    raw_scale: float
    switch_times: tuple[int, ...]
    best_arm_schedule: tuple[tuple[int, int], ...]


def _validate_common(spec: EnvSpec) -> None:
    if spec.variant not in _VARIANTS:
        raise ValueError(f"unknown environment variant {spec.variant!r}")
    if spec.k < 2:
        raise ValueError(f"need k >= 2 arms, got {spec.k}")
    if spec.T < 1:
        raise ValueError(f"need T >= 1 rounds, got {spec.T}")


def generate(spec: EnvSpec) -> GroundTruth:
    """Draw the full reward table for ``spec`` (pure function of the spec,
    including its seed)."""
    _validate_common(spec)
    if spec.variant == "iid_gap":
        return gen_iid_gap(spec)
    if spec.variant == "thm5_switching":
        return gen_thm5_switching(spec)
    return gen_uwb(spec)


def gen_iid_gap(spec: EnvSpec) -> GroundTruth:
    """I.i.d. Bernoulli arms with a good subset separated by >= gap.

    If per-arm means are not given, good means are drawn uniformly from
    [gap, 1] and the remaining means uniformly from [0, min(good) - gap]
    (good arms in ascending index order first, then the rest).
    """
    _validate_common(spec)
    if not spec.good_arms:
        raise ValueError("iid_gap requires a nonempty good_arms set")
    good = tuple(sorted(set(int(a) for a in spec.good_arms)))
    if good[0] < 0 or good[-1] >= spec.k:
        raise ValueError(f"good_arms out of range [0, {spec.k})")
    if len(good) >= spec.k:
        raise ValueError("good_arms must leave at least one other arm")
    if spec.gap is None or not 0.0 < spec.gap < 1.0:
        raise ValueError(f"gap must lie in (0, 1), got {spec.gap}")
    gap = float(spec.gap)
    rng = Rng(spec.seed)

    if spec.means is not None:
        means = np.asarray(spec.means, dtype=np.float64)
        if means.shape != (spec.k,):
            raise ValueError(f"means must have length k={spec.k}")
        if means.min() < 0.0 or means.max() > 1.0:
            raise ValueError("means must lie in [0, 1]")
        others = [j for j in range(spec.k) if j not in good]
        min_good = means[list(good)].min()
        max_other = means[others].max()
        if min_good - max_other < gap - 1e-9:
            raise ValueError(
                f"gap violated: min good mean {min_good:g} minus max other "
                f"mean {max_other:g} is below gap {gap:g}"
            )
    else:
        means = np.empty(spec.k)
        for j in good:
            means[j] = rng.uniform(gap, 1.0)
        ceiling = means[list(good)].min() - gap
        for j in range(spec.k):
            if j not in good:
                means[j] = rng.uniform(0.0, ceiling)

    values = rng.bernoulli_matrix(means, spec.T)
    best = int(np.argmax(means))
    return GroundTruth(
        spec=spec,
        matrix=RewardMatrix(values),
        raw_scale=1.0,
        switch_times=(),
        best_arm_schedule=((1, best),),
    )


def gen_thm5_switching(spec: EnvSpec) -> GroundTruth:
    """Randomized two-phase Bernoulli construction (gap 0.2, k >= 3).

    Draw order (fixed for reproducibility): the shifting arm a uniform on
    {1, ..., k-1}, then the shift round t0 with Pr(t0 = T) = 1/2 and
    Pr(t0 = t) = 1/(2(T-1)) for each t < T, then the reward table.  Arm 0
    is Bernoulli(1/2) throughout; arm a is Bernoulli(0.3) up to and
    including round t0 and Bernoulli(0.7) after; all other arms are
    Bernoulli(0.3).  When t0 = T no shift ever materializes.
    """
    _validate_common(spec)
    if spec.k < 3:
        raise ValueError(f"thm5_switching needs k >= 3, got {spec.k}")
    if spec.T < 2:
        raise ValueError(f"thm5_switching needs T >= 2, got {spec.T}")
    rng = Rng(spec.seed)
    a = rng.integers(1, spec.k)
    t0 = spec.T if rng.random() < 0.5 else rng.integers(1, spec.T)

    means = np.full((spec.k, spec.T), 0.5 - THM5_GAP)
    means[0, :] = 0.5
    if t0 < spec.T:
        means[a, t0:] = 0.5 + THM5_GAP  # columns t0..T-1 are rounds t0+1..T
    u = rng.random(spec.k * spec.T).reshape(spec.k, spec.T)
    values = (u < means).astype(np.float64)

    if t0 < spec.T:
        switch_times = (t0 + 1,)
        schedule = ((1, 0), (t0 + 1, a))
    else:
        switch_times = ()
        schedule = ((1, 0),)
    return GroundTruth(
        spec=spec,
        matrix=RewardMatrix(values),
        raw_scale=1.0,
        switch_times=switch_times,
        best_arm_schedule=schedule,
    )


def _truncated_gaussian(rng: Rng, mean: float, std: float, lo: float, hi: float,
                        n: int, max_attempts: int = 10**6) -> np.ndarray:
    """Rejection sampling: redraw until inside [lo, hi], hard attempt cap."""
    out = np.empty(n)
    filled = 0
    attempts = 0
    while filled < n:
        batch = max(2 * (n - filled), 16)
        if attempts + batch > max_attempts:
            batch = max_attempts - attempts
            if batch <= 0:
                raise RuntimeError(
                    f"truncated Gaussian rejection exceeded {max_attempts} attempts "
                    f"(mean={mean:g}, std={std:g}, range=[{lo:g}, {hi:g}])"
                )
        draws = rng.normal(mean, std, batch)
        attempts += batch
        accepted = draws[(draws >= lo) & (draws <= hi)]
        take = min(len(accepted), n - filled)
        out[filled:filled + take] = accepted[:take]
        filled += take
    return out


def _truncated_gaussian_mean(mean: float, std: float, lo: float, hi: float) -> float:
    a = (lo - mean) / std
    b = (hi - mean) / std
    return float(truncnorm.mean(a, b, loc=mean, scale=std))


def gen_uwb(spec: EnvSpec) -> GroundTruth:
    """Loaded channel environment with exponentially spaced parameter redraws.

    Epoch lengths are i.i.d. Exponential with rate ``switch_rate``, rounded
    up to at least one round and truncated at T.  Per epoch: the good
    channel index is redrawn uniformly; the good channel emits a truncated
    Gaussian with mean drawn from ``good_gauss_mean_range``; each other
    channel alternates across epochs between Uniform(lo, hi) with endpoints
    drawn from ``noisy_uniform_range`` (sorted) and a truncated Gaussian
    with mean from ``noisy_gauss_mean_range``.  All stds come from
    ``gauss_std_range`` and all raw values are truncated to
    [0, reward_ceiling], then stored divided by the ceiling.

    The best-arm schedule records the per-epoch argmax of the generating
    distributions' expected values (which may differ from the designated
    good channel when a noisy law happens to land higher).
    """
    _validate_common(spec)
    if spec.switch_rate is None or spec.switch_rate <= 0.0:
        raise ValueError(f"uwb needs switch_rate > 0, got {spec.switch_rate}")
    ceiling = float(spec.reward_ceiling)
    if ceiling <= 0.0:
        raise ValueError(f"reward_ceiling must be positive, got {ceiling}")
    for name in ("noisy_uniform_range", "noisy_gauss_mean_range",
                 "good_gauss_mean_range", "gauss_std_range"):
        lo, hi = getattr(spec, name)
        if not (lo <= hi):
            raise ValueError(f"{name} must be ordered, got ({lo}, {hi})")
    if spec.gauss_std_range[0] <= 0.0:
        raise ValueError("gauss_std_range must be strictly positive")

    rng = Rng(spec.seed)
    scale = 1.0 / spec.switch_rate
    starts = [0]
    while starts[-1] < spec.T:
        length = max(1, math.ceil(rng.exponential(scale)))
        starts.append(min(spec.T, starts[-1] + length))
    bounds = starts  # 0 = b_0 < b_1 < ... < b_E = T, epoch e covers [b_e, b_e+1)

    values = np.empty((spec.k, spec.T))
    schedule = []
    for e in range(len(bounds) - 1):
        a, b = bounds[e], bounds[e + 1]
        n = b - a
        good = rng.integers(0, spec.k)
        expected = np.empty(spec.k)
        for j in range(spec.k):
            if j == good:
                mean = rng.uniform(*spec.good_gauss_mean_range)
                std = rng.uniform(*spec.gauss_std_range)
                values[j, a:b] = _truncated_gaussian(rng, mean, std, 0.0, ceiling, n)
                expected[j] = _truncated_gaussian_mean(mean, std, 0.0, ceiling)
            elif (e + j) % 2 == 0:
                lo, hi = sorted((rng.uniform(*spec.noisy_uniform_range),
                                 rng.uniform(*spec.noisy_uniform_range)))
                values[j, a:b] = rng.uniform(lo, hi, n)
                expected[j] = 0.5 * (lo + hi)
            else:
                mean = rng.uniform(*spec.noisy_gauss_mean_range)
                std = rng.uniform(*spec.gauss_std_range)
                values[j, a:b] = _truncated_gaussian(rng, mean, std, 0.0, ceiling, n)
                expected[j] = _truncated_gaussian_mean(mean, std, 0.0, ceiling)
        schedule.append((a + 1, int(np.argmax(expected))))

    switch_times = tuple(b + 1 for b in bounds[1:-1])
    return GroundTruth(
        spec=spec,
        matrix=RewardMatrix(values / ceiling),
        raw_scale=ceiling,
        switch_times=switch_times,
        best_arm_schedule=tuple(schedule),
    )


def query_oracle(gt: GroundTruth, t: int, arm: int) -> float:
    """Reveal the committed reward of ``arm`` at round ``t`` (1-based).

    A pure lookup: repeated queries return the identical value, and the
    chosen arm accrues from the same cell whether or not it is observed.
    """
    if not 1 <= t <= gt.matrix.T:
        raise ValueError(f"round {t} outside [1, {gt.matrix.T}]")
    if not 0 <= arm < gt.matrix.k:
        raise ValueError(f"arm {arm} outside [0, {gt.matrix.k})")
    return float(gt.matrix.values[arm, t - 1])


def metadata_path(csv_path) -> Path:
    return Path(csv_path).with_suffix("").with_suffix(".meta.json")


def save_ground_truth(gt: GroundTruth, csv_path) -> None:
    """Write the matrix CSV and its JSON sidecar (``<stem>.meta.json``).

    Values are emitted with shortest round-trip float formatting, so
    loading the CSV back reproduces the matrix bit for bit.
    """
    csv_path = Path(csv_path)
    k, T = gt.matrix.k, gt.matrix.T
    header = "t," + ",".join(f"arm_{j}" for j in range(k))
    lines = [header]
    vals = gt.matrix.values
    for t in range(T):
        lines.append(str(t + 1) + "," + ",".join(repr(float(vals[j, t])) for j in range(k)))
    csv_path.write_text("\n".join(lines) + "\n")

    meta = {
        "schema_version": 1,
        "spec": gt.spec.to_dict(),
        "seed": gt.spec.seed,
        "raw_scale": gt.raw_scale,
        "switch_times": list(gt.switch_times),
        "best_arm_schedule": [[int(s), int(a)] for s, a in gt.best_arm_schedule],
    }
    metadata_path(csv_path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def load_reward_matrix(csv_path) -> RewardMatrix:
    """Read a matrix CSV written by :func:`save_ground_truth`."""
    csv_path = Path(csv_path)
    lines = csv_path.read_text().strip().splitlines()
    if not lines:
        raise ValueError(f"{csv_path}: empty matrix file")
    header = lines[0].split(",")
    if header[0] != "t" or any(h != f"arm_{j}" for j, h in enumerate(header[1:])):
        raise ValueError(f"{csv_path}: unexpected header {lines[0]!r}")
    k = len(header) - 1
    T = len(lines) - 1
    values = np.empty((k, T))
    for i, line in enumerate(lines[1:]):
        parts = line.split(",")
        if len(parts) != k + 1:
            raise ValueError(f"{csv_path}: row {i + 2} has {len(parts)} fields, expected {k + 1}")
        if int(parts[0]) != i + 1:
            raise ValueError(f"{csv_path}: rows must be ordered t = 1..T")
        values[:, i] = [float(x) for x in parts[1:]]
    return RewardMatrix(values)


def load_metadata(csv_path) -> dict:
    return json.loads(metadata_path(csv_path).read_text())
