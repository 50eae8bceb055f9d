"""Synthetic skewed corpora and query workloads.

Used by the acceptance tests and the backend benchmark. Everything is
seeded, so a given parameter set always produces the same corpus and the
same queries.
"""

from collections import Counter

import numpy as np


def zipf_corpus_lines(doc_count, vocab_size, exponent=1.0, min_doc_len=50,
                      max_doc_len=500, seed=0):
    """One line per document; tokens drawn from a Zipf rank distribution.

    Document lengths are uniform in [min_doc_len, max_doc_len]. Rank r
    (0-based) is sampled with probability proportional to 1/(r+1)^exponent
    and rendered as a fixed-width token, so the realized vocabulary is the
    set of sampled ranks.
    """
    if doc_count < 1 or vocab_size < 1:
        raise ValueError("doc_count and vocab_size must be >= 1")
    if not 1 <= min_doc_len <= max_doc_len:
        raise ValueError("need 1 <= min_doc_len <= max_doc_len")
    rng = np.random.default_rng(seed)
    weights = 1.0 / np.arange(1, vocab_size + 1, dtype=np.float64) ** exponent
    probs = weights / weights.sum()
    lengths = rng.integers(min_doc_len, max_doc_len + 1, size=doc_count)
    ranks = rng.choice(vocab_size, size=int(lengths.sum()), p=probs)
    width = len(str(vocab_size - 1))
    words = np.array([f"w{r:0{width}d}" for r in range(vocab_size)])
    drawn = words[ranks]
    lines = []
    offset = 0
    for n in lengths:
        lines.append(" ".join(drawn[offset : offset + int(n)]))
        offset += int(n)
    return lines


def sample_query_lines(corpus, query_count, min_terms=2, max_terms=5,
                       weighted_fraction=0.3, seed=1):
    """Random conjunctive queries over a corpus vocabulary, one per line.

    Each term slot is drawn from the corpus token-frequency distribution
    with probability ``weighted_fraction`` (so frequent terms do appear in
    queries) and uniformly over the vocabulary otherwise. Terms within a
    query are distinct.
    """
    if query_count < 1:
        raise ValueError("query_count must be >= 1")
    if not 1 <= min_terms <= max_terms:
        raise ValueError("need 1 <= min_terms <= max_terms")
    if max_terms > corpus.term_count:
        raise ValueError("max_terms exceeds vocabulary size")
    rng = np.random.default_rng(seed)
    tokens = corpus.vocab.tokens
    counts = Counter()
    for doc in corpus.docs:
        counts.update(doc)
    freq = np.array([counts[tok] for tok in tokens], dtype=np.float64)
    cumulative = np.cumsum(freq / freq.sum())
    lines = []
    for _ in range(query_count):
        n = int(rng.integers(min_terms, max_terms + 1))
        chosen = []
        while len(chosen) < n:
            if rng.random() < weighted_fraction:
                t = int(np.searchsorted(cumulative, rng.random()))
                t = min(t, len(tokens) - 1)
            else:
                t = int(rng.integers(len(tokens)))
            if t not in chosen:
                chosen.append(t)
        lines.append(" ".join(tokens[t] for t in chosen))
    return lines
