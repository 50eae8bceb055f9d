"""End-to-end self-check on a tiny built-in reference corpus.

Every check pins an exact expected value that was worked out by hand for
the three-document corpus below, exercising the full pipeline: ingestion,
codec, index, models, partitions, all four query strategies, and the
analyses. The CLI ``selftest`` subcommand runs these and prints one line
per check.
"""

from dataclasses import dataclass

import numpy as np

from tbix import analysis
from tbix.codec import decode_postings, encode_postings
from tbix.corpus import ingest_text, parse_query, tokenize
from tbix.engine import query_block, query_exhaustive, query_oracle, query_tiered
from tbix.errors import UnknownTermError
from tbix.index import build_index, intersect
from tbix.membership import (
    ModelCostParams,
    build_bloom_model,
    build_exact_model,
    model_storage_bits,
)
from tbix.partition import build_blocks, build_tiered, replaced_set

REFERENCE_LINES = ("the cat sat", "the dog sat", "a cat ran")


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _expect(actual, expected):
    if isinstance(expected, np.ndarray) or isinstance(actual, np.ndarray):
        if not np.array_equal(np.asarray(actual), np.asarray(expected)):
            raise AssertionError(f"got {actual!r}, expected {expected!r}")
        return
    if actual != expected:
        raise AssertionError(f"got {actual!r}, expected {expected!r}")


def _checks():
    corpus = ingest_text(REFERENCE_LINES)
    index = build_index(corpus)
    exact = build_exact_model(index)
    tiered1 = build_tiered(index, k=1)
    tiered2 = build_tiered(index, k=2)
    blocks2 = build_blocks(index, beta=2)

    def ids(*tokens):
        return [corpus.vocab.id(t) for t in tokens]

    def q(text):
        return parse_query(text, corpus)

    def check_counts():
        _expect((corpus.doc_count, corpus.term_count), (3, 6))
        _expect(corpus.vocab.tokens, ("a", "cat", "dog", "ran", "sat", "the"))

    def check_tokenize():
        _expect(tokenize("The CAT, sat."), ["the", "cat", "sat"])
        _expect(tokenize(""), [])
        _expect(tokenize("a—b  c"), ["a", "b", "c"])

    def check_parse():
        _expect(list(q("the cat").terms), ids("the", "cat"))
        _expect(list(q("cat cat").terms), ids("cat"))
        try:
            q("zebra")
        except UnknownTermError as exc:
            _expect(exc.tokens, ("zebra",))
        else:
            raise AssertionError("unknown-only query must raise")

    def check_encode():
        _expect(encode_postings([3, 7, 15]).data, b"\x03\x04\x08")
        _expect(encode_postings([3, 7, 15]).size_bits, 24)
        _expect(encode_postings([0]).data, b"\x00")
        _expect(encode_postings([300]).data, b"\xac\x02")

    def check_decode():
        _expect(decode_postings(b"\x03\x04\x08"), [3, 7, 15])
        _expect(decode_postings(b"\x00"), [0])
        _expect(decode_postings(encode_postings([300])), [300])

    def check_postings():
        expected = {"a": [2], "cat": [0, 2], "dog": [1], "ran": [2], "sat": [0, 1], "the": [0, 1]}
        for tok, docs in expected.items():
            _expect(index.doc_ids(corpus.vocab.id(tok)), docs)

    def check_sizes():
        _expect(index.total_size_bits(), 72)
        _expect(index.size_bits(corpus.vocab.id("cat")), 16)
        _expect(index.size_bits(corpus.vocab.id("a")), 8)

    def check_intersect():
        _expect(intersect([[0, 2], [0, 1]]), [0])
        _expect(intersect([[0, 1]]), [0, 1])
        _expect(intersect([[2], [1]]), [])

    def check_exact_model():
        cat, dog = ids("cat", "dog")
        _expect(exact.contains(cat, 0), 1)
        _expect(exact.contains(dog, 0), 0)
        _expect(exact.contains(cat, 2), 1)

    def check_bloom_model():
        bloom = build_bloom_model(index, bits_per_pair=64)
        false_positives = 0
        absent = 0
        for t in range(corpus.term_count):
            truth = set(int(d) for d in index.doc_ids(t))
            for d in range(corpus.doc_count):
                hit = bloom.contains(t, d)
                if d in truth:
                    _expect(hit, 1)
                else:
                    absent += 1
                    false_positives += hit
        if false_positives / absent >= 0.05:
            raise AssertionError(f"bloom fp rate {false_positives / absent}")

    def check_model_cost():
        _expect(model_storage_bits(ModelCostParams(0), 5, 9), 0)
        _expect(model_storage_bits(ModelCostParams(512), 3, 3), 3072)
        _expect(model_storage_bits(ModelCostParams(1), 3, 3), 6)

    def check_tiered_structure():
        t1 = {tok: list(tiered1.tier1[corpus.vocab.id(tok)]) for tok in corpus.vocab.tokens}
        _expect(t1, {"a": [2], "cat": [0], "dog": [1], "ran": [2], "sat": [0], "the": [0]})
        t2 = {tok: list(tiered1.tier2[corpus.vocab.id(tok)]) for tok in corpus.vocab.tokens}
        _expect(t2, {"a": [], "cat": [2], "dog": [], "ran": [], "sat": [1], "the": [1]})
        _expect(replaced_set(tiered1), set(ids("cat", "sat", "the")))
        _expect(replaced_set(tiered2), set())

    def check_blocks_structure():
        got = {tok: list(blocks2.block_lists[corpus.vocab.id(tok)]) for tok in corpus.vocab.tokens}
        _expect(got, {"a": [1], "cat": [0, 1], "dog": [0], "ran": [1], "sat": [0], "the": [0]})

    def check_exhaustive():
        r = query_exhaustive(q("cat sat"), exact, corpus.doc_count)
        _expect(r.doc_list(), [0])
        _expect(r.candidates_scanned, 3)
        _expect(query_exhaustive(q("the sat"), exact, corpus.doc_count).doc_list(), [0, 1])
        _expect(query_exhaustive(q("cat dog"), exact, corpus.doc_count).doc_list(), [])

    def check_tiered_queries():
        r = query_tiered(q("the sat"), tiered1, exact, fallback=False)
        _expect((r.doc_list(), r.guaranteed), ([0], False))
        r = query_tiered(q("the sat"), tiered1, exact, fallback=True)
        _expect((r.doc_list(), r.used_fallback), ([0, 1], True))
        r = query_tiered(q("a cat"), tiered1, exact, fallback=False)
        _expect((r.doc_list(), r.guaranteed), ([2], True))

    def check_block_queries():
        r = query_block(q("the cat"), blocks2, exact)
        _expect((r.doc_list(), r.candidates_scanned), ([0], 2))
        r = query_block(q("a dog"), blocks2, exact)
        _expect((r.doc_list(), r.candidates_scanned), ([], 0))

    def check_oracle_queries():
        _expect(query_oracle(q("cat sat"), index).doc_list(), [0])
        _expect(query_oracle(q("the"), index).doc_list(), [0, 1])
        _expect(query_oracle(q("a dog"), index).doc_list(), [])

    def check_df_histogram():
        _expect(analysis.df_histogram(index), {1: 3, 2: 3})

    def check_fraction_curve():
        _expect(analysis.storage_fraction_curve(index, [0.4]), [2])
        _expect(analysis.storage_fraction_curve(index, [1.0]), [6])
        _expect(analysis.storage_fraction_curve(index, [16 / 72 + 1e-9]), [2])

    def check_trunc_estimates():
        _expect(analysis.estimate_trunc_list_size(index, 1), (8.0, False))
        _expect(analysis.estimate_trunc_list_size(index, 2), (16.0, False))
        sparse = build_index(ingest_text(["a b", "b", "b"]))
        _expect(analysis.estimate_trunc_list_size(sparse, 2), (16.0, False))

    def check_gain():
        _expect(analysis.gain(index, k=1, unit_bits=0), 18.0)
        _expect(analysis.gain(index, k=1, unit_bits=1), 12.0)
        _expect(analysis.gain(index, k=2, unit_bits=0), -6.0)

    def check_gain_sweep():
        reports = analysis.gain_bounds_sweep(index, [1, 2])
        _expect(reports[0].gain_upper_bits, 18.0)
        _expect(reports[0].gain_lower_bits, 18.0 - (3 + 3) * 512)
        _expect([r.replaced_count for r in reports], [3, 0])

    def check_guarantees():
        report = analysis.guarantee_percentages([q("a cat"), q("the cat")], index, k=1)
        _expect((report.pct_with_model, report.pct_without_model), (50.0, 0.0))
        report = analysis.guarantee_percentages([q("a dog")], index, k=1)
        _expect((report.pct_with_model, report.pct_without_model), (100.0, 100.0))
        report = analysis.guarantee_percentages([q("a cat"), q("the cat")], index, k=2)
        _expect((report.pct_with_model, report.pct_without_model), (100.0, 100.0))

    return [
        ("corpus counts and ids", check_counts),
        ("tokenizer", check_tokenize),
        ("query parsing", check_parse),
        ("postings encoding", check_encode),
        ("postings decoding", check_decode),
        ("index postings", check_postings),
        ("compressed sizes", check_sizes),
        ("list intersection", check_intersect),
        ("exact membership", check_exact_model),
        ("bloom membership", check_bloom_model),
        ("model cost accounting", check_model_cost),
        ("tier partition", check_tiered_structure),
        ("block partition", check_blocks_structure),
        ("exhaustive queries", check_exhaustive),
        ("tiered queries", check_tiered_queries),
        ("block queries", check_block_queries),
        ("oracle queries", check_oracle_queries),
        ("df histogram", check_df_histogram),
        ("storage fraction curve", check_fraction_curve),
        ("truncated-size estimates", check_trunc_estimates),
        ("gain estimates", check_gain),
        ("gain bounds sweep", check_gain_sweep),
        ("guarantee percentages", check_guarantees),
    ]


def run_selftest():
    """Run every reference check; returns a list of CheckResult."""
    results = []
    for name, fn in _checks():
        try:
            fn()
        except Exception as exc:
            results.append(CheckResult(name, False, str(exc)))
        else:
            results.append(CheckResult(name, True))
    return results
