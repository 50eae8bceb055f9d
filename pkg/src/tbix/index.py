"""Inverted index construction, compressed storage, and exact intersection."""

import numpy as np

from tbix import kernels
from tbix.codec import CompressedPostings, as_postings, decode_postings, encode_postings

__all__ = [
    "CompressedPostings",
    "InvertedIndex",
    "build_index",
    "encode_postings",
    "decode_postings",
    "intersect",
]


class InvertedIndex:
    """Per-term compressed postings plus collection counts.

    Immutable once built; decoding, intersection, and size queries are
    safe to run concurrently.
    """

    def __init__(self, postings, doc_count, term_count):
        self.postings = tuple(postings)
        self.doc_count = doc_count
        self.term_count = term_count

    @classmethod
    def from_postings(cls, lists, doc_count):
        """Build directly from raw id lists (mostly for tests and tools)."""
        encoded = [encode_postings(as_postings(lst, doc_count)) for lst in lists]
        return cls(encoded, doc_count=doc_count, term_count=len(encoded))

    def doc_ids(self, term_id):
        """Decode one term's postings list."""
        return decode_postings(self.postings[term_id])

    def df(self, term_id):
        return self.postings[term_id].df

    def size_bits(self, term_id):
        return self.postings[term_id].size_bits

    def dfs(self):
        return np.array([p.df for p in self.postings], dtype=np.int64)

    def size_bits_all(self):
        return np.array([p.size_bits for p in self.postings], dtype=np.int64)

    def total_size_bits(self):
        return int(sum(p.size_bits for p in self.postings))


def build_index(corpus):
    """Index a finalized corpus: per term, the sorted ids of documents containing it."""
    lists = [[] for _ in range(corpus.term_count)]
    vocab = corpus.vocab
    for doc_id, tokens in enumerate(corpus.docs):
        for tok in set(tokens):
            lists[vocab.id(tok)].append(doc_id)
    # doc ids were appended in ascending doc order, so each list is sorted
    encoded = [encode_postings(np.asarray(lst, dtype=np.int64)) for lst in lists]
    return InvertedIndex(encoded, doc_count=corpus.doc_count, term_count=corpus.term_count)


def intersect(lists):
    """Sorted intersection of one or more postings lists.

    This is the ground-truth oracle every query strategy is checked
    against. Evaluation starts from the shortest list and stops early on
    an empty partial result.
    """
    arrays = [as_postings(lst) for lst in lists]
    if not arrays:
        raise ValueError("intersect requires at least one postings list")
    arrays.sort(key=len)
    result = arrays[0]
    for other in arrays[1:]:
        if result.size == 0:
            break
        result = kernels.intersect_sorted(result, other)
    return result
