"""Multi-run aggregation and nonparametric algorithm comparison.

Provides the per-function summary (mean and sample standard deviation over
independent runs), the two-sample Wilcoxon rank-sum test, and per-problem
rank tables aggregated into rank sums and a final ordering.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

# Exact rank-sum distribution is enumerated up to this pooled size; beyond it
# the tie-corrected normal approximation with continuity correction is used.
EXACT_LIMIT = 20


def _as_finite_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a flat sequence")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def summarize(samples) -> tuple:
    """Mean and sample standard deviation (n-1 denominator) of run results.

    A single-value sample has no spread estimate; its deviation is reported
    as 0 by convention (flagged with a warning).
    """
    arr = _as_finite_vector(samples, "samples")
    if arr.size == 0:
        raise ValueError("cannot summarize an empty sample set")
    avg = float(arr.mean())
    if arr.size == 1:
        warnings.warn("standard deviation of a single value reported as 0", stacklevel=2)
        return avg, 0.0
    return avg, float(arr.std(ddof=1))


def _midranks(pooled: np.ndarray) -> np.ndarray:
    """Ranks 1..n with tied values sharing their average rank."""
    order = np.argsort(pooled, kind="stable")
    ranks = np.empty(pooled.size, dtype=float)
    i = 0
    while i < pooled.size:
        j = i
        while j + 1 < pooled.size and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _exact_two_sided_p(ranks: np.ndarray, n1: int) -> float:
    """Two-sided tail probability of the rank sum under random assignment.

    Enumerates the distribution of the size-``n1`` subset rank sum by dynamic
    programming over doubled ranks (midranks are multiples of 1/2, so doubled
    ranks are exact integers). The p-value counts assignments whose rank sum
    deviates from the mean at least as much as the observed one.
    """
    n = ranks.size
    doubled = [int(round(2.0 * r)) for r in ranks]
    observed = sum(doubled[:n1])
    mean2 = n1 * (n + 1)  # doubled mean of the subset rank sum

    # ways[k][s] = number of size-k subsets with doubled rank sum s
    ways = [dict() for _ in range(n1 + 1)]
    ways[0][0] = 1
    for r in doubled:
        for k in range(min(n1, len(ways)) - 1, -1, -1):
            if not ways[k]:
                continue
            target = ways[k + 1]
            for s, w in ways[k].items():
                target[s + r] = target.get(s + r, 0) + w
    dist = ways[n1]
    total = sum(dist.values())
    threshold = abs(observed - mean2)
    extreme = sum(w for s, w in dist.items() if abs(s - mean2) >= threshold)
    return extreme / total


def wilcoxon_rank_sum(a, b) -> float:
    """Two-sided rank-sum p-value for two independent samples.

    Small pooled samples (``n1+n2 <= EXACT_LIMIT``) use the exact enumeration
    of rank assignments; larger ones the normal approximation with midrank
    tie correction and continuity correction. Returns NaN when the pooled
    values are completely indistinguishable (zero rank variance), which is
    how degenerate comparisons of identical constant samples are reported.
    """
    xa = _as_finite_vector(a, "a")
    xb = _as_finite_vector(b, "b")
    if xa.size < 2 or xb.size < 2:
        raise ValueError("both samples need at least two values")
    pooled = np.concatenate([xa, xb])
    if np.all(pooled == pooled[0]):
        return math.nan

    n1, n = xa.size, pooled.size
    ranks = _midranks(pooled)
    if n <= EXACT_LIMIT:
        return _exact_two_sided_p(ranks, n1)

    n2 = n - n1
    rank_sum = float(ranks[:n1].sum())
    mean = n1 * (n + 1) / 2.0
    _, counts = np.unique(pooled, return_counts=True)
    tie_term = float(np.sum(counts.astype(float) ** 3 - counts))
    variance = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if variance <= 0.0:
        return math.nan
    deviation = rank_sum - mean
    if deviation > 0.0:
        deviation -= 0.5
    elif deviation < 0.0:
        deviation += 0.5
    z = deviation / math.sqrt(variance)
    return min(1.0, math.erfc(abs(z) / math.sqrt(2.0)))


@dataclass(frozen=True)
class RankTable:
    """Per-problem competition ranks and their aggregation.

    ``per_function_ranks[i][k]`` is algorithm ``k``'s rank on problem ``i``
    (dense ranking: ties share a rank, the next distinct value takes the next
    integer). ``final_rank`` is a permutation of 1..k ordering algorithms by
    average rank, ties broken by column order.
    """

    per_function_ranks: tuple
    rank_sum: tuple
    average_rank: tuple
    final_rank: tuple


def friedman_ranks(avg_matrix, std_matrix) -> RankTable:
    """Rank algorithms per problem by mean result, aggregate over problems.

    ``avg_matrix`` and ``std_matrix`` are [problem x algorithm]. Per problem,
    algorithms are ranked ascending by mean; exact mean ties are broken by
    the smaller standard deviation, and remaining ties share a dense rank.
    """
    avg = np.asarray(avg_matrix, dtype=float)
    std = np.asarray(std_matrix, dtype=float)
    if avg.ndim != 2 or avg.shape != std.shape:
        raise ValueError("avg and std must be rectangular matrices of equal shape")
    if avg.size == 0:
        raise ValueError("rank table needs at least one problem and one algorithm")
    if not (np.all(np.isfinite(avg)) and np.all(np.isfinite(std))):
        raise ValueError("rank inputs must be finite")

    n_problems, n_algos = avg.shape
    rows = []
    for i in range(n_problems):
        keys = [(avg[i, k], std[i, k]) for k in range(n_algos)]
        rank_of = {key: rank for rank, key in enumerate(sorted(set(keys)), start=1)}
        rows.append(tuple(rank_of[key] for key in keys))

    rank_sum = tuple(int(sum(row[k] for row in rows)) for k in range(n_algos))
    average_rank = tuple(s / n_problems for s in rank_sum)
    order = sorted(range(n_algos), key=lambda k: (average_rank[k], k))
    final = [0] * n_algos
    for position, k in enumerate(order, start=1):
        final[k] = position
    return RankTable(
        per_function_ranks=tuple(rows),
        rank_sum=rank_sum,
        average_rank=average_rank,
        final_rank=tuple(final),
    )
