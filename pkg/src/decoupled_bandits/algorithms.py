"""Learner policies: decoupled exponential weights and the baselines.

The decoupled learners choose the exploited arm from an exponential-weights
action distribution while directing their single reward query through the
square-root-proportional law from :func:`core.query_distribution`.  Reward
estimates are importance weighted with an additive optimism bonus ``beta``
that yields high-probability (not merely in-expectation) behaviour.

Baselines for comparative experiments: EXP3 and EXP3.P (standard coupled
bandits, Auer, Cesa-Bianchi, Freund and Schapire, SIAM J. Comput. 2002),
a reward-oblivious round robin, and a greedy policy with uniform cyclic
queries (the fixed-query-distribution regime).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .core import ProbVector, Rng, half_norm, query_distribution, sample_categorical

__all__ = [
    "DecoupledParams",
    "HorizonTooSmallError",
    "RoundDecision",
    "derive_params",
    "select_mu",
    "estimate_rewards",
    "DecoupledBandit",
    "SwitchingDecoupledBandit",
    "DoublingDecoupledBandit",
    "Exp3",
    "Exp3P",
    "RoundRobin",
    "GreedyDecoupled",
]

QueryOracle = Callable[[int, int], float]


def _mixture_with_floor(w_normalized: np.ndarray, gamma: float, k: int) -> ProbVector:
    """(1 - gamma) * w + gamma / k as an exact-floor ProbVector.

    The dominant entry absorbs the float rounding of the sum so that the
    total is exactly 1.0 and construction never renormalizes, which keeps
    min_j p_j >= gamma / k exact (a contract the learners' tests check
    bit-for-bit)."""
    p = (1.0 - gamma) * w_normalized + gamma / k
    for _ in range(4):
        err = 1.0 - p.sum()
        if err == 0.0:
            break
        p[np.argmax(p)] += err
    return ProbVector(p)


class HorizonTooSmallError(ValueError):
    """Raised when the derived exploration rate is infeasible (gamma >= 1
    or (1 + beta)^2 > 2).  Rejecting beats clamping: silently shrinking
    gamma would invalidate the guarantees the caller believes they run
    under.  ``min_horizon`` names the smallest admissible T."""

    def __init__(self, message: str, min_horizon: int) -> None:
        super().__init__(message)
        self.min_horizon = min_horizon


@dataclass(frozen=True)
class DecoupledParams:
    """Derived step-size bundle shared by the decoupled learners.

    ``eta`` is the learning rate, ``beta`` the optimism bonus, ``gamma``
    the exploration floor mass, ``alpha`` the uniform weight-sharing rate
    (0 for the non-switching learner, 1/T for the switching one).
    """

    mu: float
    delta: float
    T: int
    k: int
    S: int
    eta: float
    beta: float
    gamma: float
    alpha: float
    queries_per_round: int = 1


def _feasible(mu: float, delta: float, T: int, k: int, S: int) -> tuple[float, float, float, bool]:
    eta = math.sqrt(S / (mu * T))
    beta = 2.0 * eta * math.sqrt(6.0 * math.log(3.0 * k / delta))
    gamma = eta * eta * (1.0 + beta) ** 2 * k * k
    ok = gamma < 1.0 and (1.0 + beta) ** 2 <= 2.0
    return eta, beta, gamma, ok


def _minimal_horizon(mu: float, delta: float, k: int, S: int) -> int:
    """Smallest T making the parameters feasible; both conditions are
    monotone in T, so bisection applies."""
    hi = 1
    while not _feasible(mu, delta, hi, k, S)[3]:
        hi *= 2
        if hi > 2**62:
            raise RuntimeError("no feasible horizon found")
    lo = max(1, hi // 2)
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(mu, delta, mid, k, S)[3]:
            hi = mid
        else:
            lo = mid + 1
    return hi


def derive_params(
    mu: float,
    delta: float,
    T: int,
    k: int,
    S: int = 1,
    variant: str = "decoupled",
    queries_per_round: int = 1,
) -> DecoupledParams:
    """Derive (eta, beta, gamma, alpha) from the input parameters.

    variant "decoupled": eta = 1/sqrt(mu*T), alpha = 0, S must be 1.
    variant "switching": eta = sqrt(S/(mu*T)), alpha = 1/T.

    Raises :class:`HorizonTooSmallError` when gamma >= 1 or
    (1+beta)^2 > 2, i.e. the horizon is too small for the chosen mu.
    """
    if variant not in ("decoupled", "switching"):
        raise ValueError(f"unknown variant {variant!r}")
    if not k >= 2:
        raise ValueError(f"need k >= 2 arms, got {k}")
    if not 1.0 <= mu <= k:
        raise ValueError(f"mu must lie in [1, k], got {mu}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if T < 1:
        raise ValueError(f"horizon must be >= 1, got {T}")
    if S < 1:
        raise ValueError(f"segment count must be >= 1, got {S}")
    if variant == "decoupled" and S != 1:
        raise ValueError("the non-switching learner uses S = 1")
    if queries_per_round < 1:
        raise ValueError(f"queries_per_round must be >= 1, got {queries_per_round}")

    eta, beta, gamma, ok = _feasible(mu, delta, T, k, S)
    if not ok:
        t_min = _minimal_horizon(mu, delta, k, S)
        raise HorizonTooSmallError(
            f"horizon too small: T={T} gives gamma={gamma:.6g}, (1+beta)^2="
            f"{(1 + beta) ** 2:.6g}; smallest admissible T for mu={mu:g}, "
            f"delta={delta:g}, k={k}, S={S} is {t_min}",
            t_min,
        )
    alpha = 1.0 / T if variant == "switching" else 0.0
    return DecoupledParams(
        mu=float(mu), delta=float(delta), T=int(T), k=int(k), S=int(S),
        eta=eta, beta=beta, gamma=gamma, alpha=alpha,
        queries_per_round=int(queries_per_round),
    )


def select_mu(k: int, T: int) -> float:
    """Step-size parameter k**min{1, max{0, 4/3 - log_k(T)/3}}.

    Interpolates between mu = k at T = k and mu = 1 once T >= k**4; always
    in [1, k].
    """
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    if T < 2:
        raise ValueError(f"need T >= 2, got {T}")
    exponent = min(1.0, max(0.0, 4.0 / 3.0 - math.log(T) / (3.0 * math.log(k))))
    return float(k) ** exponent


def estimate_rewards(
    queried: Sequence[int],
    observed: Mapping[int, float],
    q: ProbVector,
    beta: float,
) -> np.ndarray:
    """Importance-weighted reward estimates with optimism bonus.

    For a single query j_t:  ghat_j = (g_j * 1[j_t = j] + beta) / q_j.
    For c > 1 queries the indicator is replaced by count_j / c, i.e. the
    average of c independent single-query estimators, which preserves
    unbiasedness of the reward part: E[ghat_j] = g_j + beta / q_j.
    """
    q_arr = q.entries if isinstance(q, ProbVector) else ProbVector(q).entries
    if q_arr.min() <= 0.0:
        raise ValueError("query distribution must be strictly positive")
    c = len(queried)
    if c < 1:
        raise ValueError("at least one query per round")
    k = q_arr.shape[0]
    ghat = np.full(k, float(beta))
    for j in queried:
        if not 0 <= j < k:
            raise ValueError(f"queried arm {j} out of range")
        if j not in observed:
            raise ValueError(f"no observed reward for queried arm {j}")
        g = float(observed[j])
        if not 0.0 <= g <= 1.0:
            raise ValueError(f"observed reward {g!r} outside [0, 1]")
        ghat[j] += g / c
    return ghat / q_arr


@dataclass(frozen=True)
class RoundDecision:
    """Record of one round: exploited arm, queried arm(s), and the two
    distributions they were drawn from."""

    chosen: int
    queried: tuple[int, ...]
    action_dist: ProbVector
    query_dist: ProbVector


class DecoupledBandit:
    """Exponential weights with decoupled square-root-proportional queries.

    Weights are stored as log-weights and rebased after every update, so
    arbitrarily long runs with adversarial rewards cannot overflow.  The
    action distribution mixes in a gamma/k floor; the query distribution
    does not (the floor already guarantees the positivity it needs).
    """

    variant = "decoupled"

    def __init__(self, params: DecoupledParams) -> None:
        self.params = params
        self.log_weights = np.zeros(params.k)
        self.rounds_played = 0
        self.cumulative_half_norm = 0.0

    def action_distribution(self) -> ProbVector:
        lw = self.log_weights - self.log_weights.max()
        w = np.exp(lw)
        return _mixture_with_floor(w / w.sum(), self.params.gamma, self.params.k)

    def _apply_update(self, increments: np.ndarray) -> None:
        self.log_weights = self.log_weights + increments
        self.log_weights -= self.log_weights.max()

    def step(self, t: int, oracle: QueryOracle, rng: Rng) -> RoundDecision:
        """Play round t: sample the exploited and queried arms, observe the
        queried rewards only, and update the weights."""
        par = self.params
        if self.rounds_played >= par.T:
            raise RuntimeError(f"horizon exhausted after {par.T} rounds")
        p = self.action_distribution()
        q = query_distribution(p)
        chosen = sample_categorical(p, rng)
        queried = tuple(sample_categorical(q, rng) for _ in range(par.queries_per_round))
        observed: dict[int, float] = {}
        for j in queried:
            if j not in observed:
                g = float(oracle(t, j))
                if not 0.0 <= g <= 1.0:
                    raise ValueError(f"oracle returned reward {g!r} outside [0, 1]")
                observed[j] = g
        ghat = estimate_rewards(queried, observed, q, par.beta)
        self._apply_update(par.eta * ghat)
        self.rounds_played += 1
        self.cumulative_half_norm += half_norm(p)
        return RoundDecision(chosen=chosen, queried=queried, action_dist=p, query_dist=q)


class SwitchingDecoupledBandit(DecoupledBandit):
    """Decoupled learner for piecewise-stationary rewards.

    Identical to :class:`DecoupledBandit` except the weight update adds a
    uniform share (e * alpha / k) * sum_l w_l(t) to every arm, keeping all
    weights bounded away from zero relative to the total so the learner can
    re-concentrate quickly after the best arm changes.  With alpha = 0 the
    update (and hence the trajectory for a fixed seed) reduces exactly to
    the non-switching learner's.
    """

    variant = "switching"

    def _apply_update(self, increments: np.ndarray) -> None:
        alpha = self.params.alpha
        if alpha == 0.0:
            super()._apply_update(increments)
            return
        old = self.log_weights
        m = old.max()
        log_total = m + math.log(np.exp(old - m).sum())
        # log of (e * alpha / k) * sum_l w_l(t); log-sum-exp with
        # max-subtraction keeps this finite for any weight scale
        log_share = 1.0 + math.log(alpha / self.params.k) + log_total
        self.log_weights = np.logaddexp(old + increments, log_share)
        self.log_weights -= self.log_weights.max()


class DoublingDecoupledBandit:
    """Guess-and-double wrapper for picking the step-size parameter online.

    Runs the inner decoupled learner with mu = v.  Whenever the cumulative
    half-norm since the last restart exceeds T * v, doubles v (capped at k,
    where the budget can never be exceeded again), re-derives parameters
    and resets the weights.  Restart rounds are recorded; the choices made
    across restarts form a single horizon-length trajectory.
    """

    variant = "doubling"

    def __init__(
        self,
        initial_v: float,
        delta: float,
        T: int,
        k: int,
        inner_variant: str = "decoupled",
        S: int = 1,
        queries_per_round: int = 1,
    ) -> None:
        if not 1.0 <= initial_v <= k:
            raise ValueError(f"initial guess v must lie in [1, k], got {initial_v}")
        self.delta = delta
        self.T = T
        self.k = k
        self.inner_variant = inner_variant
        self.S = S
        self.queries_per_round = queries_per_round
        self.v = float(initial_v)
        self.restarts: list[int] = []
        self.rounds_played = 0
        self._inner = self._fresh_inner()

    def _fresh_inner(self) -> DecoupledBandit:
        params = derive_params(
            self.v, self.delta, self.T, self.k, S=self.S,
            variant=self.inner_variant, queries_per_round=self.queries_per_round,
        )
        cls = SwitchingDecoupledBandit if self.inner_variant == "switching" else DecoupledBandit
        return cls(params)

    @property
    def params(self) -> DecoupledParams:
        return self._inner.params

    def action_distribution(self) -> ProbVector:
        return self._inner.action_distribution()

    def step(self, t: int, oracle: QueryOracle, rng: Rng) -> RoundDecision:
        if self.rounds_played >= self.T:
            raise RuntimeError(f"horizon exhausted after {self.T} rounds")
        decision = self._inner.step(t, oracle, rng)
        self.rounds_played += 1
        if self._inner.cumulative_half_norm > self.T * self.v and self.v < self.k:
            self.restarts.append(t)
            self.v = min(2.0 * self.v, float(self.k))
            self._inner = self._fresh_inner()
        return decision


def _one_hot(index: int, k: int) -> ProbVector:
    arr = np.zeros(k)
    arr[index] = 1.0
    return ProbVector(arr)


class Exp3(object):
    """EXP3 with importance-weighted estimates and known horizon.

    Coupled feedback: only the chosen arm's reward is observed.  Constants
    follow Auer et al. 2002, Corollary 3.2 with the trivial upper bound
    g <= T on the best cumulative reward:
        gamma = min{1, sqrt(k ln k / ((e - 1) T))},
        w_i <- w_i * exp((gamma / k) * g_i / p_i) on the chosen arm.
    """

    variant = "exp3"

    def __init__(self, k: int, T: int) -> None:
        if k < 1 or T < 1:
            raise ValueError("need k >= 1 and T >= 1")
        self.k = k
        self.T = T
        self.gamma = min(1.0, math.sqrt(k * math.log(max(k, 2)) / ((math.e - 1.0) * T)))
        self.log_weights = np.zeros(k)
        self.rounds_played = 0

    def action_distribution(self) -> ProbVector:
        w = np.exp(self.log_weights - self.log_weights.max())
        return _mixture_with_floor(w / w.sum(), self.gamma, self.k)

    def step(self, t: int, oracle: QueryOracle, rng: Rng) -> RoundDecision:
        if self.rounds_played >= self.T:
            raise RuntimeError(f"horizon exhausted after {self.T} rounds")
        p = self.action_distribution()
        chosen = sample_categorical(p, rng)
        g = float(oracle(t, chosen))
        if not 0.0 <= g <= 1.0:
            raise ValueError(f"reward {g!r} outside [0, 1]")
        self.log_weights[chosen] += (self.gamma / self.k) * (g / p[chosen])
        self.log_weights -= self.log_weights.max()
        self.rounds_played += 1
        return RoundDecision(chosen=chosen, queried=(chosen,), action_dist=p, query_dist=p)


class Exp3P(object):
    """EXP3.P, the high-probability variant of EXP3.

    Coupled feedback.  Constants follow Auer et al. 2002, Theorem 6.3 with
    the Corollary 6.5 choices for a confidence level delta:
        exploration_bonus = 2 * sqrt(ln(k T / delta)),
        gamma = min{3/5, 2 * sqrt(3 k ln k / (5 T))},
        w_j <- w_j * exp((gamma / 3k) * (ghat_j + bonus / (p_j sqrt(kT)))).
    The equal initial weights are kept at 1 (the published positive initial
    value only rescales all weights uniformly, which leaves p unchanged).
    """

    variant = "exp3p"

    def __init__(self, k: int, T: int, delta: float = 0.1) -> None:
        if k < 1 or T < 1:
            raise ValueError("need k >= 1 and T >= 1")
        if not 0.0 < delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {delta}")
        self.k = k
        self.T = T
        self.delta = delta
        self.gamma = min(0.6, 2.0 * math.sqrt(3.0 * k * math.log(max(k, 2)) / (5.0 * T)))
        self.bonus = 2.0 * math.sqrt(math.log(k * T / delta))
        self.log_weights = np.zeros(k)
        self.rounds_played = 0

    def action_distribution(self) -> ProbVector:
        w = np.exp(self.log_weights - self.log_weights.max())
        return _mixture_with_floor(w / w.sum(), self.gamma, self.k)

    def step(self, t: int, oracle: QueryOracle, rng: Rng) -> RoundDecision:
        if self.rounds_played >= self.T:
            raise RuntimeError(f"horizon exhausted after {self.T} rounds")
        p = self.action_distribution()
        chosen = sample_categorical(p, rng)
        g = float(oracle(t, chosen))
        if not 0.0 <= g <= 1.0:
            raise ValueError(f"reward {g!r} outside [0, 1]")
        ghat = np.zeros(self.k)
        ghat[chosen] = g / p[chosen]
        inner = ghat + self.bonus / (p.entries * math.sqrt(self.k * self.T))
        self.log_weights = self.log_weights + (self.gamma / (3.0 * self.k)) * inner
        self.log_weights -= self.log_weights.max()
        self.rounds_played += 1
        return RoundDecision(chosen=chosen, queried=(chosen,), action_dist=p, query_dist=p)


class RoundRobin(object):
    """Cycles through the arms in fixed order 0, 1, ..., k-1, 0, ...

    Entirely reward-oblivious; the per-round decision records the played
    arm as both chosen and queried.
    """

    variant = "round_robin"

    def __init__(self, k: int, T: int) -> None:
        if k < 1:
            raise ValueError("need k >= 1")
        self.k = k
        self.T = T
        self.rounds_played = 0

    def step(self, t: int, oracle: QueryOracle, rng: Rng) -> RoundDecision:
        arm = self.rounds_played % self.k
        self.rounds_played += 1
        dist = _one_hot(arm, self.k)
        return RoundDecision(chosen=arm, queried=(arm,), action_dist=dist, query_dist=dist)


class GreedyDecoupled(object):
    """Uniform cyclic queries, greedy choices on empirical means.

    The query sequence is the fixed cycle t mod k regardless of rewards
    (the fixed-query-distribution regime); the chosen arm is the argmax of
    per-arm empirical average queried reward, ties broken by lowest index,
    with never-queried arms counting as mean 0.
    """

    variant = "greedy_decoupled"

    def __init__(self, k: int, T: int) -> None:
        if k < 1:
            raise ValueError("need k >= 1")
        self.k = k
        self.T = T
        self.rounds_played = 0
        self._sums = np.zeros(k)
        self._counts = np.zeros(k)

    def empirical_means(self) -> np.ndarray:
        return np.where(self._counts > 0, self._sums / np.maximum(self._counts, 1.0), 0.0)

    def step(self, t: int, oracle: QueryOracle, rng: Rng) -> RoundDecision:
        chosen = int(np.argmax(self.empirical_means()))
        queried = self.rounds_played % self.k
        g = float(oracle(t, queried))
        if not 0.0 <= g <= 1.0:
            raise ValueError(f"reward {g!r} outside [0, 1]")
        self._sums[queried] += g
        self._counts[queried] += 1
        self.rounds_played += 1
        return RoundDecision(
            chosen=chosen,
            queried=(queried,),
            action_dist=_one_hot(chosen, self.k),
            query_dist=_one_hot(queried, self.k),
        )
