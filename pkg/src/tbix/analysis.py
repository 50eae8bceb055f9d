"""Index statistics, storage-gain estimation, and first-tier guarantee rates.

All computations are read-only over the immutable index and fully
deterministic. Sizes are in bits throughout.

The gain estimate for a truncation length k replaces every list longer
than k by the membership model and values the surviving truncated list at
the *average* encoded size of the index's lists of length k (not the
measured size of the actual truncation; the CLI exposes the measured
mean as an extra column for comparison). The estimate nets out the
analytic model cost, charged per replaced term and per document, and one
replaced-flag bit per vocabulary term. Gains can be negative: replacing
only very rare terms costs more than it saves.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from tbix.codec import encode_postings
from tbix.membership import ModelCostParams, model_storage_bits

# Bounds for the unknown per-unit model cost: a free model gives the most
# optimistic gain; 512 bits per unit prices a compressed 128-unit
# embedding per replaced term and per document.
GAIN_UPPER_UNIT_BITS = 0.0
GAIN_LOWER_UNIT_BITS = 512.0


@dataclass(frozen=True)
class GainReport:
    k: int
    replaced_count: int
    gain_upper_bits: float
    gain_lower_bits: float
    trunc_list_size_bits: float


@dataclass(frozen=True)
class GuaranteeReport:
    k: int
    pct_with_model: float
    pct_without_model: float
    query_count: int


class TruncSizeEstimate(NamedTuple):
    bits: float
    extrapolated: bool


def df_histogram(index):
    """Counts of terms per document frequency; values sum to term_count."""
    values, counts = np.unique(index.dfs(), return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def storage_fraction_curve(index, fractions):
    """Minimum number of terms whose lists cover each fraction of index bits.

    For each fraction phi in (0, 1], the smallest m such that the m
    largest compressed lists sum to at least phi x total bits.
    """
    if index.term_count == 0:
        raise ValueError("empty index")
    fractions = list(fractions)
    for phi in fractions:
        if not 0 < phi <= 1:
            raise ValueError(f"fraction {phi} outside (0, 1]")
    sizes = np.sort(index.size_bits_all())[::-1]
    prefix = np.cumsum(sizes)
    total = int(prefix[-1])
    return [int(np.searchsorted(prefix, phi * total, side="left")) + 1 for phi in fractions]


def _mean_bits_by_length(index):
    """Map list length -> mean encoded bits over the index's lists of that length."""
    dfs = index.dfs()
    sizes = index.size_bits_all()
    totals = np.bincount(dfs, weights=sizes)
    counts = np.bincount(dfs)
    return {
        int(length): float(totals[length]) / int(counts[length])
        for length in np.flatnonzero(counts)
    }


def estimate_trunc_list_size(index, k):
    """Estimated encoded size of a length-k list, from same-length averages.

    When no list of length k exists the estimate interpolates linearly
    between the nearest observed lengths; outside the observed range it
    clamps to the nearest endpoint and flags the result as extrapolated.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    means = _mean_bits_by_length(index)
    if k in means:
        return TruncSizeEstimate(means[k], False)
    lengths = sorted(means)
    below = [length for length in lengths if length < k]
    above = [length for length in lengths if length > k]
    if not above:
        return TruncSizeEstimate(means[lengths[-1]], True)
    if not below:
        return TruncSizeEstimate(means[lengths[0]], True)
    lo, hi = below[-1], above[0]
    bits = means[lo] + (means[hi] - means[lo]) * (k - lo) / (hi - lo)
    return TruncSizeEstimate(bits, False)


def measured_trunc_list_size(index, k):
    """Mean encoded size of the actual first-k truncations of replaced lists.

    Comparison column only; the gain arithmetic uses the estimator above.
    Returns 0.0 when nothing is replaced.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    sizes = [
        encode_postings(index.doc_ids(t)[:k]).size_bits
        for t in range(index.term_count)
        if index.df(t) > k
    ]
    if not sizes:
        return 0.0
    return float(sum(sizes)) / len(sizes)


def gain(index, k, unit_bits=0.0):
    """Estimated storage gain, in bits, of replacing all lists longer than k.

    Sum over replaced terms of (full list bits - estimated truncated list
    bits), minus the analytic model cost, minus one flag bit per
    vocabulary term. May be negative.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    dfs = index.dfs()
    replaced = dfs > k
    replaced_count = int(replaced.sum())
    full_bits = int(index.size_bits_all()[replaced].sum())
    trunc_bits = estimate_trunc_list_size(index, k).bits
    cost = model_storage_bits(ModelCostParams(unit_bits), replaced_count, index.doc_count)
    return full_bits - replaced_count * trunc_bits - cost - index.term_count


def gain_bounds_sweep(index, ks):
    """GainReport per k, with gain at the upper and lower cost bounds."""
    ks = list(ks)
    if not ks:
        raise ValueError("ks must be nonempty")
    dfs = index.dfs()
    reports = []
    for k in ks:
        replaced_count = int((dfs > k).sum())
        reports.append(
            GainReport(
                k=k,
                replaced_count=replaced_count,
                gain_upper_bits=gain(index, k, GAIN_UPPER_UNIT_BITS),
                gain_lower_bits=gain(index, k, GAIN_LOWER_UNIT_BITS),
                trunc_list_size_bits=estimate_trunc_list_size(index, k).bits,
            )
        )
    return reports


def guarantee_percentages(queries, index, k):
    """Share of queries whose first-tier results are provably complete.

    With the model, one query term with df <= k suffices; without it,
    every term needs its complete list. Unknown query terms count as
    df 0. Both percentages are over the full query set.
    """
    queries = list(queries)
    if not queries:
        raise ValueError("query set is empty")
    if k < 1:
        raise ValueError("k must be >= 1")
    dfs = index.dfs()
    with_model = 0
    without_model = 0
    for q in queries:
        term_dfs = [int(dfs[t]) for t in q.terms] + [0] * len(q.unknown)
        if any(d <= k for d in term_dfs):
            with_model += 1
        if all(d <= k for d in term_dfs):
            without_model += 1
    n = len(queries)
    return GuaranteeReport(
        k=k,
        pct_with_model=100.0 * with_model / n,
        pct_without_model=100.0 * without_model / n,
        query_count=n,
    )
