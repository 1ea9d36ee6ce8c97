"""Simplex primitives and deterministic random sampling.

Everything downstream (learners, environments, the experiment runner) is
built on three small pieces:

* :class:`Rng` -- a counter-based SplitMix64 generator.  The algorithm is
  fixed and documented here so that a given seed reproduces the exact same
  draw sequence on any platform and in any language that reimplements it.
* :class:`ProbVector` -- a validated point on the probability simplex,
  used both for action distributions and query distributions.
* :func:`half_norm` / :func:`query_distribution` -- the non-uniformity
  measure (sum of square roots, squared) and the square-root-proportional
  query law that minimises the importance-weighting variance sum p_j/q_j.
"""

from __future__ import annotations

from typing import Optional, Union

import numpy as np

__all__ = [
    "Rng",
    "ProbVector",
    "RewardMatrix",
    "half_norm",
    "query_distribution",
    "sample_categorical",
]

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB
# float64 has 53 mantissa bits; top 53 bits of the output word map to [0, 1)
_INV_2_53 = 2.0 ** -53


def _finalize_int(z: int) -> int:
    """SplitMix64 output function on a Python int (mod 2^64)."""
    z = ((z ^ (z >> 30)) * _MUL1) & _MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & _MASK64
    return z ^ (z >> 31)


def _finalize_array(z: np.ndarray) -> np.ndarray:
    """SplitMix64 output function, vectorized over uint64 (wraps silently)."""
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MUL1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MUL2)
    return z ^ (z >> np.uint64(31))


class Rng:
    """Deterministic counter-based PRNG (SplitMix64).

    The i-th 64-bit output word is ``finalize(seed + i * golden_gamma)``
    where ``finalize`` is the standard SplitMix64 xor-shift-multiply mixer.
    Because outputs depend only on the seed and a draw counter, scalar and
    vectorized draws produce identical streams, and replays are bit-stable.

    Not cryptographic; statistically adequate for Monte Carlo at the scales
    used here (SplitMix64 passes BigCrush).

    Single-owner: one instance per concurrent run, never shared.
    """

    __slots__ = ("seed", "_counter")

    def __init__(self, seed: int) -> None:
        self.seed = int(seed) & _MASK64
        self._counter = 0

    def _next_words(self, n: int) -> np.ndarray:
        idx = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        return _finalize_array(np.uint64(self.seed) + idx * np.uint64(_GAMMA))

    def _next_word(self) -> int:
        self._counter += 1
        return _finalize_int((self.seed + self._counter * _GAMMA) & _MASK64)

    def random(self, n: Optional[int] = None) -> Union[float, np.ndarray]:
        """Uniform float64 in [0, 1): top 53 bits of the next word(s)."""
        if n is None:
            return (self._next_word() >> 11) * _INV_2_53
        return (self._next_words(int(n)) >> np.uint64(11)).astype(np.float64) * _INV_2_53

    def integers(self, low: int, high: int, n: Optional[int] = None):
        """Uniform integer(s) in [low, high) via floor(u * span).

        Exact for span << 2^53, which covers every use in this package
        (arm counts and horizons).
        """
        if high <= low:
            raise ValueError(f"empty integer range [{low}, {high})")
        span = high - low
        u = self.random(n)
        if n is None:
            return low + int(u * span)
        return low + np.floor(u * span).astype(np.int64)

    def uniform(self, low: float, high: float, n: Optional[int] = None):
        return low + (high - low) * self.random(n)

    def exponential(self, scale: float, n: Optional[int] = None):
        """Exponential with mean ``scale`` by inverse CDF, -scale*log(1-u)."""
        u = self.random(n)
        return -scale * np.log1p(-u) if n is not None else -scale * float(np.log1p(-u))

    def normal(self, mean: float = 0.0, std: float = 1.0, n: Optional[int] = None):
        """Gaussian draws via Box-Muller.

        Words are consumed in pairs (u1, u2), yielding the interleaved pair
        (r cos theta, r sin theta); a draw of size n consumes 2*ceil(n/2)
        words.  The construction is prefix-consistent: the first values of a
        large draw equal those of a smaller draw from the same stream state.
        """
        scalar = n is None
        m = 1 if scalar else int(n)
        pairs = (m + 1) // 2
        words = self.random(2 * pairs)
        u1 = np.maximum(words[0::2], 1e-300)
        u2 = words[1::2]
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * np.pi * u2
        z = np.empty(2 * pairs)
        z[0::2] = r * np.cos(theta)
        z[1::2] = r * np.sin(theta)
        z = mean + std * z[:m]
        return float(z[0]) if scalar else z

    def bernoulli_matrix(self, means: np.ndarray, T: int) -> np.ndarray:
        """k x T matrix of independent Bernoulli(means[j]) rows."""
        means = np.asarray(means, dtype=np.float64)
        k = means.shape[0]
        u = self.random(k * T).reshape(k, T)
        return (u < means[:, None]).astype(np.float64)


class ProbVector:
    """A point on the probability simplex.

    Entries must be nonnegative and sum to 1 within 1e-9; the constructor
    then renormalizes exactly (divides by the sum) so downstream arithmetic
    sees an exact simplex.  Renormalization happens only here, never
    silently mid-computation, so drift surfaces early as a construction
    error.  The stored array is read-only.
    """

    SUM_TOL = 1e-9

    __slots__ = ("entries",)

    def __init__(self, entries) -> None:
        arr = np.asarray(entries, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] < 1:
            raise ValueError("probability vector must be 1-D and nonempty")
        if not np.all(np.isfinite(arr)):
            raise ValueError("probability vector has non-finite entries")
        if arr.min() < 0.0:
            raise ValueError(f"negative probability entry: {arr.min()!r}")
        total = float(arr.sum())
        if abs(total - 1.0) > self.SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, expected 1 within {self.SUM_TOL}")
        arr = arr / total
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ProbVector is immutable")

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    def __len__(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, i: int) -> float:
        return float(self.entries[i])

    def __repr__(self) -> str:
        return f"ProbVector({np.array2string(self.entries, precision=6)})"


class RewardMatrix:
    """Pre-committed k x T reward table with every value in [0, 1].

    Row j holds the (normalized) reward sequence of arm j.  The table is
    fixed before any learner acts and looking up a value never perturbs it.
    """

    __slots__ = ("values", "k", "T")

    def __init__(self, values) -> None:
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("reward matrix must be 2-D (arms x rounds)")
        if arr.shape[0] < 2 or arr.shape[1] < 1:
            raise ValueError(f"reward matrix needs k >= 2 arms and T >= 1 rounds, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("reward matrix has non-finite entries")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("reward values must lie in [0, 1] after normalization")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "k", arr.shape[0])
        object.__setattr__(self, "T", arr.shape[1])

    def __setattr__(self, name, value):
        raise AttributeError("RewardMatrix is immutable")


def _as_simplex(p) -> np.ndarray:
    if isinstance(p, ProbVector):
        return p.entries
    return ProbVector(p).entries


def half_norm(p) -> float:
    """Non-uniformity measure ``(sum_j sqrt(p_j))**2``.

    Always in [1, k]: k for the uniform distribution, 1 for a unit vector,
    smaller the more concentrated the distribution.
    """
    arr = _as_simplex(p)
    s = float(np.sqrt(arr).sum())
    return s * s


def query_distribution(p) -> ProbVector:
    """Query law proportional to the square root of the action law.

    q_j = sqrt(p_j) / sum_l sqrt(p_l).  Among all query distributions this
    one minimizes the variance proxy sum_j p_j / q_j, whose minimum equals
    ``half_norm(p)`` exactly.  Requires every p_j > 0 (downstream the
    gamma/k exploration floor guarantees this); a zero entry means the
    floor was violated upstream.
    """
    arr = _as_simplex(p)
    if arr.min() <= 0.0:
        raise ValueError("query_distribution requires strictly positive probabilities")
    sq = np.sqrt(arr)
    return ProbVector(sq / sq.sum())


def sample_categorical(p, rng: Rng) -> int:
    """Draw an index from ``p`` by inverse CDF over cumulative sums.

    The final bucket absorbs any residual rounding mass, so the result is
    always a valid index and replays are bit-stable for a given seed.
    """
    arr = _as_simplex(p)
    cdf = np.cumsum(arr)
    idx = int(np.searchsorted(cdf, rng.random(), side="right"))
    return min(idx, arr.shape[0] - 1)
