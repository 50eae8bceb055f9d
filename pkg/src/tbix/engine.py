"""Conjunctive Boolean query execution.

Four strategies share one result contract: an exhaustive scan of every
document through the membership model, a two-tier scan over the union of
first-tier lists (with an optional second-tier fallback), a block scan
over the intersection of per-term block lists, and the exact
list-intersection oracle.

Instrumentation is part of the contract: ``candidates_scanned`` counts
documents considered and ``model_probes`` counts contains() evaluations
against the model. Candidates are filtered term by term in query order
and documents rejected by an earlier term are not probed for later
terms, so both counters are deterministic for a given query. Tests for
unreplaced terms against their complete first-tier lists, and for hybrid
terms against their exact lists, are not model probes.

A query containing tokens absent from the vocabulary is an empty
conjunction by definition; every strategy short-circuits to an empty
result and reports the tokens on the result. All strategies are
read-only over immutable structures and safe to run concurrently.
"""

from dataclasses import dataclass
from functools import partial

import numpy as np

from tbix.errors import ScopeError
from tbix.index import intersect

_EMPTY = np.empty(0, dtype=np.int64)


@dataclass
class QueryResult:
    doc_ids: np.ndarray
    candidates_scanned: int
    model_probes: int
    guaranteed: bool | None = None
    used_fallback: bool | None = None
    unknown_terms: tuple = ()

    def doc_list(self):
        return [int(d) for d in self.doc_ids]


def _unknown_result(query, guaranteed=None, used_fallback=None):
    return QueryResult(
        doc_ids=_EMPTY,
        candidates_scanned=0,
        model_probes=0,
        guaranteed=guaranteed,
        used_fallback=used_fallback,
        unknown_terms=tuple(query.unknown),
    )


def _in_sorted(sorted_ids, docs):
    """Membership of docs in a sorted unique id array."""
    if sorted_ids.size == 0:
        return np.zeros(docs.size, dtype=bool)
    pos = np.searchsorted(sorted_ids, docs)
    pos[pos == sorted_ids.size] = sorted_ids.size - 1
    return sorted_ids[pos] == docs


def _scan(candidates, testers):
    """Filter candidates through (is_model_probe, test) pairs in order."""
    probes = 0
    for is_model, test in testers:
        if is_model:
            probes += candidates.size
        keep = test(candidates)
        candidates = candidates[keep]
    return candidates, probes


def query_exhaustive(query, model, doc_count):
    """Scan every document id and keep those matching all query terms."""
    if query.unknown:
        return _unknown_result(query)
    for t in query.terms:
        if not model.in_scope(t):
            raise ScopeError(t)
    testers = [(True, partial(model.contains_many, t)) for t in query.terms]
    docs, probes = _scan(np.arange(doc_count, dtype=np.int64), testers)
    return QueryResult(docs, candidates_scanned=doc_count, model_probes=probes)


def query_tiered(query, tiered, model, fallback=False):
    """Scan the union of the query terms' first-tier lists.

    The result is provably complete iff some query term has df <= k
    (``guaranteed``). When ``fallback`` is set and the guarantee does not
    hold, the scan extends over the second-tier lists as well, which
    restores completeness. Unreplaced terms outside the model scope are
    tested against their own first-tier lists (complete for df <= k);
    replaced terms must be in scope.
    """
    if query.unknown:
        # an unknown term has df 0 <= k, so the (empty) result is exact
        return _unknown_result(query, guaranteed=True, used_fallback=False)
    guaranteed = bool(any(tiered.dfs[t] <= tiered.k for t in query.terms))
    extend = fallback and not guaranteed
    pools = [tiered.tier1[t] for t in query.terms]
    if extend:
        pools.extend(tiered.tier2[t] for t in query.terms)
    candidates = np.unique(np.concatenate(pools)) if pools else _EMPTY
    testers = []
    for t in query.terms:
        if model.in_scope(t):
            testers.append((True, partial(model.contains_many, t)))
        elif not tiered.replaced[t]:
            testers.append((False, partial(_in_sorted, tiered.tier1[t])))
        else:
            raise ScopeError(t)
    docs, probes = _scan(candidates, testers)
    return QueryResult(
        docs,
        candidates_scanned=int(candidates.size),
        model_probes=probes,
        guaranteed=guaranteed,
        used_fallback=extend,
    )


def query_block(query, blocks, model):
    """Scan the document ranges of blocks common to all query terms.

    Hybrid terms are tested against their stored exact lists instead of
    the model; every other term must be in the model scope.
    """
    if query.unknown:
        return _unknown_result(query)
    testers = []
    for t in query.terms:
        exact_ids = blocks.hybrid_exact.get(t)
        if exact_ids is not None:
            testers.append((False, partial(_in_sorted, exact_ids)))
        elif model.in_scope(t):
            testers.append((True, partial(model.contains_many, t)))
        else:
            raise ScopeError(t)
    common = intersect([blocks.block_lists[t] for t in query.terms])
    if common.size == 0:
        return QueryResult(_EMPTY, candidates_scanned=0, model_probes=0)
    ranges = [np.arange(*blocks.block_range(int(b)), dtype=np.int64) for b in common]
    candidates = np.concatenate(ranges)
    docs, probes = _scan(candidates, testers)
    return QueryResult(docs, candidates_scanned=int(candidates.size), model_probes=probes)


def query_oracle(query, index):
    """Exact intersection of the decoded postings lists (ground truth)."""
    if query.unknown:
        return _unknown_result(query)
    docs = intersect([index.doc_ids(t) for t in query.terms])
    return QueryResult(docs, candidates_scanned=int(docs.size), model_probes=0)
