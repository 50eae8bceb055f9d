"""Two-tier truncation and block partitions over a full inverted index.

Builders are single-writer; the built partitions are immutable and
concurrently readable.
"""

import numpy as np


class TieredIndex:
    """First tier of truncated postings plus second-tier remainders.

    Truncation keeps the first k doc ids of each list in ascending order
    (the simplest deterministic policy; ``policy`` names it so ordered
    variants can be added). A term is replaced when its df exceeds k; the
    replaced flags are accounted as exactly term_count bits in the gain
    arithmetic.
    """

    policy = "prefix"

    def __init__(self, k, tier1, tier2, doc_count):
        self.k = k
        self.tier1 = tuple(tier1)
        self.tier2 = tuple(tier2)
        self.doc_count = doc_count
        self.dfs = np.array(
            [a.size + b.size for a, b in zip(self.tier1, self.tier2)], dtype=np.int64
        )
        self.replaced = self.dfs > k

    @property
    def term_count(self):
        return len(self.tier1)


def build_tiered(index, k):
    """Split every postings list into a first-k tier and a remainder tier."""
    if k < 1:
        raise ValueError("k must be >= 1")
    tier1 = []
    tier2 = []
    for t in range(index.term_count):
        ids = index.doc_ids(t)
        tier1.append(ids[:k])
        tier2.append(ids[k:])
    return TieredIndex(k, tier1, tier2, index.doc_count)


def replaced_set(tiered):
    """Term ids whose lists were truncated (df > k)."""
    return set(int(t) for t in np.flatnonzero(tiered.replaced))


class BlockIndex:
    """Per-term lists of fixed-width document blocks, plus optional exact
    lists for rare terms (hybrid representation)."""

    def __init__(self, beta, hybrid_threshold, block_lists, hybrid_exact, doc_count):
        self.beta = beta
        self.hybrid_threshold = hybrid_threshold
        self.block_lists = tuple(block_lists)
        self.hybrid_exact = dict(hybrid_exact)
        self.doc_count = doc_count

    @property
    def term_count(self):
        return len(self.block_lists)

    @property
    def block_count(self):
        return (self.doc_count + self.beta - 1) // self.beta

    def block_range(self, block_id):
        """Half-open doc-id range covered by one block."""
        lo = block_id * self.beta
        return lo, min(lo + self.beta, self.doc_count)


def build_blocks(index, beta, hybrid_threshold=0):
    """Build per-term block-id lists; block id of doc d is d // beta.

    Terms with df <= hybrid_threshold additionally keep their exact
    postings (0 disables hybrid lists).
    """
    if beta < 1:
        raise ValueError("beta must be >= 1")
    if hybrid_threshold < 0:
        raise ValueError("hybrid_threshold must be >= 0")
    block_lists = []
    hybrid_exact = {}
    for t in range(index.term_count):
        ids = index.doc_ids(t)
        block_lists.append(np.unique(ids // beta))
        if 0 < ids.size <= hybrid_threshold:
            hybrid_exact[t] = ids
    return BlockIndex(beta, hybrid_threshold, block_lists, hybrid_exact, index.doc_count)
