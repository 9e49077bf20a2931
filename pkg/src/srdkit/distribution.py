"""Null distributions of SRD scores and the permutation-test verdicts.

A solution's score is judged against the distribution of scores of random
rankings.  Six generators cover the common modeling choices for ties
(options 'n', 'r', 't', 'p', 'd', 'f'); small inputs can be enumerated
exactly.  The 5% and 95% points of the distribution (XX1 and XX19) split
the unit interval into significant similarity, indistinguishability from
random, and significant dissimilarity (reverse ranking).
"""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import DataTable, SrdError, fractional_ranks, max_srd, tie_probability

OPTIONS = ("n", "r", "t", "p", "d", "f")

EXACT_MAX_N = 10

_CHUNK = 1 << 16  # samples per RNG sub-stream; fixed so worker count cannot matter


class CrrnVerdict(enum.Enum):
    """Outcome of comparing a normalized SRD score with XX1/XX19."""

    SIGNIFICANT_SIMILAR = "SignificantSimilar"
    NOT_DISTINGUISHABLE = "NotDistinguishable"
    SIGNIFICANT_DISSIMILAR = "SignificantDissimilar"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Thresholds:
    """Quantile summary of an SRD distribution.

    xx1 is the largest support value with at most 5% of the mass at or
    below it; xx19 the smallest with at most 5% at or above it.  q1,
    median, and q3 are the smallest support values whose cumulative mass
    reaches 25%, 50%, and 75%.
    """

    xx1: float
    q1: float
    median: float
    q3: float
    xx19: float
    mean: float
    std_dev: float


@dataclass(frozen=True)
class SrdDistribution:
    """Attainable normalized SRD values with their relative frequencies.

    ``support`` is strictly increasing and every entry is a multiple of
    0.5/max_srd(n_objects).  ``sample_count`` holds the Monte-Carlo sample
    size, or the number of enumerated permutations when ``exact``.
    """

    support: np.ndarray
    frequency: np.ndarray
    thresholds: Thresholds
    option: str
    n_objects: int
    sample_count: int
    seed: int | None = None
    tie_prob: float | None = None
    exact: bool = False

    def __post_init__(self) -> None:
        support = np.asarray(self.support, dtype=float)
        frequency = np.asarray(self.frequency, dtype=float)
        if support.size == 0:
            raise SrdError("distribution support must not be empty")
        if support.shape != frequency.shape:
            raise SrdError("support and frequency lengths differ")
        if np.any(np.diff(support) <= 0):
            raise SrdError("distribution support must be strictly increasing")
        if np.any(frequency < 0) or abs(frequency.sum() - 1.0) > 1e-9:
            raise SrdError("frequencies must be nonnegative and sum to 1")
        f = max_srd(self.n_objects)
        if f:
            grid = support * (2 * f)
            if not np.allclose(grid, np.rint(grid), atol=1e-6):
                raise SrdError(
                    f"support values must be multiples of 0.5/{f} for n={self.n_objects}"
                )
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "frequency", frequency)
        support.flags.writeable = False
        frequency.flags.writeable = False


def random_tied_ranking(n: int, tie_prob: float, rng: np.random.Generator) -> np.ndarray:
    """Draw a random ranking of n objects with the given tie frequency.

    Each of the n-1 boundaries between consecutive sorted positions is
    independently merged with probability ``tie_prob``; merged groups share
    their mean rank, and the resulting multiset of ranks is assigned to the
    positions by a uniform random permutation.  tie_prob 0 gives a uniform
    permutation, tie_prob 1 a constant vector.
    """
    if n < 1:
        raise SrdError("n must be at least 1")
    if not 0.0 <= tie_prob <= 1.0:
        raise SrdError("tie probability must lie in [0, 1]")
    return _tied_batch(n, np.full(1, float(tie_prob)), rng)[0]


def _perm_batch(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """size random permutations of ranks 1..n, one per row."""
    return np.argsort(rng.random((size, n)), axis=1) + 1.0


def _tied_batch(n: int, tie_probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One random tied ranking per row; row i uses tie probability tie_probs[i]."""
    size = tie_probs.shape[0]
    if n == 1:
        return np.ones((size, 1))
    idx = np.arange(n)
    merge = rng.random((size, n - 1)) < tie_probs[:, None]
    starts_group = np.ones((size, n), dtype=bool)
    starts_group[:, 1:] = ~merge
    # Mean rank of the group covering sorted positions a..b is (a+b)/2 + 1
    # (0-based); propagate each group's first and last position to its members.
    first = np.maximum.accumulate(np.where(starts_group, idx, 0), axis=1)
    ends_group = np.ones((size, n), dtype=bool)
    ends_group[:, :-1] = starts_group[:, 1:]
    last = np.minimum.accumulate(
        np.where(ends_group, idx, n - 1)[:, ::-1], axis=1
    )[:, ::-1]
    sorted_ranks = (first + last) / 2.0 + 1.0
    perm = np.argsort(rng.random((size, n)), axis=1)
    return np.take_along_axis(sorted_ranks, perm, axis=1)


def _doubled_srd_counts(solution: np.ndarray, reference: np.ndarray,
                        n_bins: int) -> np.ndarray:
    """Histogram of 2*raw SRD for a batch; rank sums of halves are exact."""
    raw2 = np.rint(np.abs(solution - reference).sum(axis=1) * 2.0).astype(np.int64)
    return np.bincount(raw2, minlength=n_bins)


def _chunk_counts(option: str, n: int, size: int, seed_seq: np.random.SeedSequence,
                  ref_ranks: np.ndarray | None, tie_probs: np.ndarray,
                  n_bins: int) -> np.ndarray:
    """Counts contributed by one RNG sub-stream of ``size`` samples."""
    rng = np.random.default_rng(seed_seq)
    if option == "n":
        sol = _perm_batch(n, size, rng)
        ref = ref_ranks[None, :]
    elif option == "r":
        sol = _perm_batch(n, size, rng)
        ref = _perm_batch(n, size, rng)
    elif option == "t":
        sol = _tied_batch(n, np.broadcast_to(tie_probs, (size,)), rng)
        ref = _tied_batch(n, np.broadcast_to(tie_probs, (size,)), rng)
    elif option == "d":
        donors = rng.integers(0, tie_probs.shape[0], size=size)
        sol = _tied_batch(n, tie_probs[donors], rng)
        ref = ref_ranks[None, :]
    else:  # 'p' and 'f': tied solutions against the fixed reference
        sol = _tied_batch(n, np.broadcast_to(tie_probs, (size,)), rng)
        ref = ref_ranks[None, :]
    return _doubled_srd_counts(sol, ref, n_bins)


def generate_distribution(table: DataTable, option: str = "f",
                          tie_prob: float | None = None,
                          samples: int = 1_000_000,
                          seed: int | None = None,
                          workers: int = 1) -> SrdDistribution:
    """Simulate the null distribution of normalized SRD scores.

    Option semantics:
      'n'  tie-free random solutions against the table's fixed reference;
      'r'  two independent tie-free random rankings per sample;
      't'  solution and reference both drawn with tie frequency ``tie_prob``;
      'p'  tied solution (``tie_prob``) against the fixed reference;
      'd'  per sample, a solution column is picked uniformly at random and
           lends its tie frequency; reference fixed;
      'f'  solutions mimic the reference column's tie frequency (default);
           reference fixed.

    The run is split into fixed-size sub-streams seeded from ``seed``, so
    results are bit-identical for any ``workers`` count.
    """
    if option not in OPTIONS:
        raise SrdError(f"unknown distribution option {option!r}")
    if option in ("t", "p"):
        if tie_prob is None:
            raise SrdError(f"option {option!r} requires a tie probability")
        if not 0.0 <= tie_prob <= 1.0:
            raise SrdError("tie probability must lie in [0, 1]")
    elif tie_prob is not None:
        raise SrdError("tie_prob only applies to options 't' and 'p'")
    n = table.n_rows
    if n < 2:
        raise SrdError("distribution generation needs at least two rows")
    if samples < 1:
        raise SrdError("sample count must be positive")
    if workers < 1:
        raise SrdError("worker count must be positive")

    ref_label = table.reference_label
    ref_ranks = fractional_ranks(table.column(ref_label))
    if option in ("t", "p"):
        tie_probs = np.full(1, float(tie_prob))
    elif option == "f":
        tie_probs = np.full(1, tie_probability(table.column(ref_label)))
    elif option == "d":
        sol_cols = [c for c in table.col_labels if c != ref_label]
        if not sol_cols:
            raise SrdError("option 'd' needs at least one solution column")
        tie_probs = np.array([tie_probability(table.column(c)) for c in sol_cols])
    else:
        tie_probs = np.zeros(1)

    f = max_srd(n)
    n_bins = 2 * f + 1
    n_chunks = (samples + _CHUNK - 1) // _CHUNK
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    sizes = [min(_CHUNK, samples - i * _CHUNK) for i in range(n_chunks)]

    def run(i: int) -> np.ndarray:
        return _chunk_counts(option, n, sizes[i], children[i], ref_ranks,
                             tie_probs, n_bins)

    if workers == 1:
        counts = sum(run(i) for i in range(n_chunks))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = sum(pool.map(run, range(n_chunks)))

    return _build_distribution(counts, samples, f, option=option, n_objects=n,
                               seed=seed, tie_prob=tie_prob, exact=False)


def exact_distribution(n: int, reference=None) -> SrdDistribution:
    """Enumerate every tie-free solution permutation against a fixed reference.

    The reference is a rank column (the identity ranking when omitted);
    probabilities are exact counts over all n! permutations.  Capped at
    n = 10, beyond which enumeration stops being desk-scale.
    """
    if not 2 <= n <= EXACT_MAX_N:
        raise SrdError(f"exact enumeration supports 2 <= n <= {EXACT_MAX_N}")
    if reference is None:
        ref2 = 2 * np.arange(1, n + 1, dtype=np.int64)
    else:
        ref = np.asarray(reference, dtype=float)
        if ref.shape != (n,):
            raise SrdError(f"reference rank column must have length {n}")
        ref2 = np.rint(ref * 2.0).astype(np.int64)
        if np.any(ref2 != ref * 2.0) or ref2.sum() != n * (n + 1):
            raise SrdError("reference must be a fractional rank column")
    f = max_srd(n)
    counts = np.zeros(2 * f + 1, dtype=np.int64)
    perms = itertools.permutations(range(2, 2 * n + 1, 2))  # doubled ranks
    while True:
        chunk = np.array(list(itertools.islice(perms, 200_000)), dtype=np.int64)
        if chunk.size == 0:
            break
        raw2 = np.abs(chunk - ref2[None, :]).sum(axis=1)
        counts += np.bincount(raw2, minlength=counts.size)
    total = math.factorial(n)
    return _build_distribution(counts, total, f, option="exact", n_objects=n,
                               seed=None, tie_prob=None, exact=True)


def _build_distribution(counts: np.ndarray, total: int, f: int, **meta) -> SrdDistribution:
    observed = np.nonzero(counts)[0]
    support = observed / (2.0 * f) if f else np.zeros(observed.size)
    frequency = counts[observed] / total
    thresholds = _thresholds_from_counts(support, counts[observed], total, f)
    return SrdDistribution(support=support, frequency=frequency,
                           thresholds=thresholds, sample_count=total, **meta)


def _thresholds_from_counts(support: np.ndarray, counts: np.ndarray, total: int,
                            f: int) -> Thresholds:
    """Quantiles by exact integer comparison, immune to float cumsum noise."""
    cum = np.cumsum(counts)
    upper = np.cumsum(counts[::-1])[::-1]  # mass at or above each support point
    step = 0.5 / f if f else 1.0

    low = np.nonzero(20 * cum <= total)[0]
    xx1 = support[low[-1]] if low.size else support[0] - step
    high = np.nonzero(20 * upper <= total)[0]
    xx19 = support[high[0]] if high.size else support[-1] + step

    def quantile(num: int, den: int) -> float:
        return support[np.nonzero(den * cum >= num * total)[0][0]]

    freq = counts / total
    mean = float(np.sum(support * freq))
    var = float(np.sum((support - mean) ** 2 * freq))
    return Thresholds(
        xx1=float(xx1),
        q1=float(quantile(1, 4)),
        median=float(quantile(1, 2)),
        q3=float(quantile(3, 4)),
        xx19=float(xx19),
        mean=mean,
        std_dev=math.sqrt(max(var, 0.0)),
    )


def extract_thresholds(dist: SrdDistribution) -> Thresholds:
    """Recompute the threshold record from a distribution's support and mass."""
    if dist.support.size == 0:
        raise SrdError("distribution support must not be empty")
    counts = np.rint(dist.frequency * dist.sample_count).astype(np.int64)
    f = max_srd(dist.n_objects)
    if np.all(np.abs(counts - dist.frequency * dist.sample_count) < 1e-6):
        return _thresholds_from_counts(dist.support, counts, int(counts.sum()), f)
    # Frequencies that are not sample fractions: fall back to float cumsums.
    scale = 10**12
    counts = np.rint(dist.frequency * scale).astype(np.int64)
    return _thresholds_from_counts(dist.support, counts, int(counts.sum()), f)


def classify(normalized_srd: float, thresholds: Thresholds) -> CrrnVerdict:
    """Place a normalized SRD score relative to the XX1/XX19 thresholds.

    Comparisons are inclusive: a value exactly on XX1 counts as
    significantly similar, and exactly on XX19 as significantly dissimilar.
    """
    if normalized_srd <= thresholds.xx1:
        return CrrnVerdict.SIGNIFICANT_SIMILAR
    if normalized_srd >= thresholds.xx19:
        return CrrnVerdict.SIGNIFICANT_DISSIMILAR
    return CrrnVerdict.NOT_DISTINGUISHABLE
