"""Term-document membership models.

A model answers contains(term, doc) in {0, 1} for every term in its
scope. Two implementations are provided: an exact oracle backed by
per-term document bitvectors, and a Bloom filter over (term, doc) pairs
that admits false positives but never false negatives. Models are
immutable after build and safe for concurrent probing.

Model storage is also accounted *analytically* (bits charged per
replaced term and per document), independent of what the in-memory
structures actually occupy; the gain analysis consumes that accounting.
"""

import math
from dataclasses import dataclass

import numpy as np

from tbix import kernels
from tbix.errors import ScopeError


@dataclass(frozen=True)
class ModelCostParams:
    """Analytic per-unit model cost in bits (the CLI exposes it as --s)."""

    unit_bits: float

    def __post_init__(self):
        if self.unit_bits < 0:
            raise ValueError("unit_bits must be >= 0")


def model_storage_bits(params, replaced_count, doc_count):
    """Charged model size: (replaced_count + doc_count) * unit_bits."""
    if replaced_count < 0 or doc_count < 0:
        raise ValueError("counts must be >= 0")
    return (replaced_count + doc_count) * params.unit_bits


class MembershipModel:
    """Shared scope handling; subclasses implement the actual probe."""

    exact = False

    def __init__(self, term_count, doc_count, scope):
        self.term_count = term_count
        self.doc_count = doc_count
        if scope is None:
            scope_ids = np.arange(term_count, dtype=np.int64)
        else:
            scope_ids = np.asarray(sorted(set(int(t) for t in scope)), dtype=np.int64)
            if scope_ids.size and (scope_ids[0] < 0 or scope_ids[-1] >= term_count):
                raise ValueError("scope term ids out of range")
        self._scope_ids = scope_ids
        self._row = np.full(term_count, -1, dtype=np.int64)
        self._row[scope_ids] = np.arange(scope_ids.size, dtype=np.int64)

    @property
    def scope(self):
        return frozenset(int(t) for t in self._scope_ids)

    def in_scope(self, term_id):
        return 0 <= term_id < self.term_count and self._row[term_id] >= 0

    def _scope_row(self, term_id):
        if not self.in_scope(term_id):
            raise ScopeError(term_id)
        return int(self._row[term_id])

    def contains(self, term_id, doc_id):
        """Single membership probe; returns 0 or 1."""
        return int(self.contains_many(term_id, np.array([doc_id], dtype=np.int64))[0])

    def contains_many(self, term_id, doc_ids):
        raise NotImplementedError


class ExactModel(MembershipModel):
    """Perfect membership oracle over packed per-term bitvectors."""

    exact = True

    def __init__(self, rows, term_count, doc_count, scope):
        super().__init__(term_count, doc_count, scope)
        self._rows = rows

    def contains_many(self, term_id, doc_ids):
        row = self._scope_row(term_id)
        docs = np.asarray(doc_ids, dtype=np.int64)
        return kernels.probe_bitrow(self._rows[row], docs)


class BloomModel(MembershipModel):
    """One Bloom filter over the (term, doc) pairs of the scope terms.

    Sized at bits_per_pair x inserted pairs with ceil(bits_per_pair*ln 2)
    hash probes per query. No false negatives, ever; false positives at a
    rate set by bits_per_pair.
    """

    exact = False

    def __init__(self, bits, n_bits, n_hashes, bits_per_pair, inserted_pairs,
                 term_count, doc_count, scope):
        super().__init__(term_count, doc_count, scope)
        self._bits = bits
        self.n_bits = n_bits
        self.n_hashes = n_hashes
        self.bits_per_pair = bits_per_pair
        self.inserted_pairs = inserted_pairs

    def contains_many(self, term_id, doc_ids):
        self._scope_row(term_id)
        docs = np.asarray(doc_ids, dtype=np.int64)
        keys = _pair_keys(term_id, docs)
        return kernels.bloom_probe(self._bits, self.n_bits, self.n_hashes, keys)


def _pair_keys(term_id, docs):
    return (np.uint64(term_id) << np.uint64(32)) | docs.astype(np.uint64)


def build_exact_model(index, scope=None):
    """Exact model for the scope terms (all terms when scope is None)."""
    doc_count = index.doc_count
    row_bytes = (doc_count + 7) // 8
    if scope is None:
        scope_sorted = range(index.term_count)
    else:
        scope_sorted = sorted(set(int(t) for t in scope))
    rows = np.zeros((len(scope_sorted), row_bytes), dtype=np.uint8)
    present = np.zeros(doc_count, dtype=bool)
    for i, t in enumerate(scope_sorted):
        present[:] = False
        present[index.doc_ids(t)] = True
        rows[i] = np.packbits(present, bitorder="little")
    return ExactModel(rows, index.term_count, doc_count,
                      None if scope is None else scope_sorted)


def build_bloom_model(index, scope=None, bits_per_pair=16):
    """Bloom-filter model over the (term, doc) pairs of the scope terms."""
    if bits_per_pair < 1:
        raise ValueError("bits_per_pair must be >= 1")
    if scope is None:
        scope_sorted = range(index.term_count)
    else:
        scope_sorted = sorted(set(int(t) for t in scope))
    pairs = sum(index.df(t) for t in scope_sorted)
    n_bits = bits_per_pair * pairs
    n_hashes = max(1, math.ceil(bits_per_pair * math.log(2)))
    bits = np.zeros((n_bits + 7) // 8, dtype=np.uint8)
    if pairs:
        keys = np.concatenate(
            [_pair_keys(t, index.doc_ids(t)) for t in scope_sorted if index.df(t)]
        )
        kernels.bloom_insert(bits, n_bits, n_hashes, keys)
    return BloomModel(bits, n_bits, n_hashes, bits_per_pair, pairs,
                      index.term_count, index.doc_count,
                      None if scope is None else scope_sorted)
