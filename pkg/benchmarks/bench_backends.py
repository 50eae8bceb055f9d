"""Benchmark the numba kernels against the pure-numpy fallback.

Builds a seeded synthetic corpus, then times each kernel on realistic
inputs for both backends and prints a side-by-side table.

Usage:
    python benchmarks/bench_backends.py [--docs 20000] [--vocab 40000]
        [--queries 1000] [--repeats 3]
"""

import argparse
import time

import numpy as np

from tbix.corpus import ingest_text, parse_query
from tbix.index import build_index
from tbix.kernels import numba_backend, numpy_backend
from tbix.synth import sample_query_lines, zipf_corpus_lines

BACKENDS = (numpy_backend, numba_backend)


def best_of(repeats, fn):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def build_workload(args):
    lines = zipf_corpus_lines(args.docs, args.vocab, exponent=1.0, seed=42)
    corpus = ingest_text(lines)
    index = build_index(corpus)
    queries = [parse_query(q, corpus) for q in sample_query_lines(corpus, args.queries, seed=7)]

    gaps = []
    for t in range(index.term_count):
        ids = index.doc_ids(t)
        gaps.append(np.diff(ids, prepend=0))
    all_gaps = np.concatenate(gaps)
    encoded = numpy_backend.vb_encode(all_gaps)

    rng = np.random.default_rng(3)
    pair_keys = rng.integers(0, 1 << 63, size=2_000_000, dtype=np.uint64)
    n_bits = 16 * pair_keys.size
    bloom_bits = np.zeros((n_bits + 7) // 8, dtype=np.uint8)
    numpy_backend.bloom_insert(bloom_bits, n_bits, 12, pair_keys)
    probe_keys = rng.integers(0, 1 << 64, size=2_000_000, dtype=np.uint64)

    row = rng.integers(0, 256, size=(args.docs + 7) // 8).astype(np.uint8)
    probe_docs = rng.integers(0, args.docs, size=2_000_000).astype(np.int64)

    pairs = []
    dfs = index.dfs()
    frequent = np.argsort(dfs)[-200:]
    for _ in range(500):
        a, b = rng.choice(frequent, size=2, replace=False)
        pairs.append((index.doc_ids(int(a)), index.doc_ids(int(b))))

    return {
        "all_gaps": all_gaps,
        "encoded": encoded,
        "bloom": (bloom_bits, n_bits, pair_keys, probe_keys),
        "bitrow": (row, probe_docs),
        "pairs": pairs,
    }


def bench_backend(backend, work, repeats):
    bloom_bits, n_bits, pair_keys, probe_keys = work["bloom"]
    row, probe_docs = work["bitrow"]

    def run_insert():
        fresh = np.zeros_like(bloom_bits)
        backend.bloom_insert(fresh, n_bits, 12, pair_keys)

    cases = {
        "vb_encode": lambda: backend.vb_encode(work["all_gaps"]),
        "vb_decode": lambda: backend.vb_decode(work["encoded"]),
        "intersect": lambda: [backend.intersect_sorted(a, b) for a, b in work["pairs"]],
        "bloom_insert": run_insert,
        "bloom_probe": lambda: backend.bloom_probe(bloom_bits, n_bits, 12, probe_keys),
        "probe_bitrow": lambda: backend.probe_bitrow(row, probe_docs),
    }
    results = {}
    for name, fn in cases.items():
        fn()  # warm-up (JIT compile / page in)
        results[name] = best_of(repeats, fn)
    return results


def main():
    parser = argparse.ArgumentParser(description="Compare kernel backends")
    parser.add_argument("--docs", type=int, default=20_000)
    parser.add_argument("--vocab", type=int, default=40_000)
    parser.add_argument("--queries", type=int, default=1_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"workload: {args.docs} docs, {args.vocab} vocab, {args.queries} queries")
    work = build_workload(args)
    print(f"gaps to encode: {work['all_gaps'].size}, encoded bytes: {work['encoded'].size}")

    timings = {backend.NAME: bench_backend(backend, work, args.repeats) for backend in BACKENDS}
    print(f"{'kernel':<14}{'numpy (s)':>12}{'numba (s)':>12}{'speedup':>10}")
    for name in timings["numpy"]:
        a = timings["numpy"][name]
        b = timings["numba"][name]
        print(f"{name:<14}{a:>12.4f}{b:>12.4f}{a / b:>10.2f}")


if __name__ == "__main__":
    main()
