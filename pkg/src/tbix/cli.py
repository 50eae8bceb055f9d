"""Command-line interface.

One binary, eight subcommands sharing the single-file index container:

    build       ingest a corpus and write the index file
    tier        add/replace the two-tier partition in an index file
    blocks      add/replace the block partition in an index file
    query       run conjunctive queries (JSON lines on stdout)
    stats       df histogram + storage-fraction curve (CSV on stdout)
    gain        storage-gain sweep over truncation lengths (CSV)
    guarantees  first-tier guarantee percentages per k (CSV)
    selftest    run the built-in reference-corpus checks

All sizes are reported in bits. Exit codes: 0 success, 1 usage error,
2 data/file error. Identical inputs and flags produce byte-identical
output.
"""

import argparse
import json
import sys

from tbix import analysis
from tbix.corpus import Query, ingest, parse_query
from tbix.engine import query_block, query_exhaustive, query_oracle, query_tiered
from tbix.errors import EmptyQueryError, TbixError, UnknownTermError
from tbix.index import build_index
from tbix.membership import build_bloom_model, build_exact_model
from tbix.partition import build_blocks, build_tiered, replaced_set
from tbix.selftest import run_selftest
from tbix.storage import load_index, save_index

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract reserves 2 for
    # data errors, so remap to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _build_parser():
    parser = _Parser(prog="tbix", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="ingest a corpus file and write an index")
    p.add_argument("--corpus", required=True, help="UTF-8 text, one document per line")
    p.add_argument("--out", required=True, help="index file to write")

    p = sub.add_parser("tier", help="add a two-tier partition to an index file")
    p.add_argument("--index", required=True)
    p.add_argument("--k", type=int, required=True, help="first-tier list length")

    p = sub.add_parser("blocks", help="add a block partition to an index file")
    p.add_argument("--index", required=True)
    p.add_argument("--beta", type=int, required=True, help="block width in documents")
    p.add_argument("--hybrid", type=int, default=0,
                   help="keep exact lists for terms with df <= this (0 disables)")

    p = sub.add_parser("query", help="run conjunctive queries; JSON line per query")
    p.add_argument("--index", required=True)
    p.add_argument("--strategy", required=True,
                   choices=["exhaustive", "tiered", "block", "oracle"])
    p.add_argument("--queries", required=True, help="query file, one query per line")
    p.add_argument("--fallback", action="store_true",
                   help="tiered only: extend unguaranteed scans over the second tier")
    p.add_argument("--model", choices=["exact", "bloom"], default="exact")
    p.add_argument("--bits-per-pair", type=int, default=16,
                   help="bloom model sizing (bits per inserted term-doc pair)")

    p = sub.add_parser("stats", help="df histogram and storage-fraction curve")
    p.add_argument("--index", required=True)
    p.add_argument("--out", choices=["csv"], default="csv", help="output format")
    p.add_argument("--fractions", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0",
                   help="comma-separated fractions in (0,1]")

    p = sub.add_parser("gain", help="storage-gain estimates per truncation length")
    p.add_argument("--index", required=True)
    p.add_argument("--ks", required=True, help="comma-separated truncation lengths")
    p.add_argument("--s", type=float, default=None,
                   help="model cost in bits per unit; default reports both bounds (0 and 512)")
    p.add_argument("--out", choices=["csv"], default="csv")

    p = sub.add_parser("guarantees", help="first-tier guarantee percentages per k")
    p.add_argument("--index", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--ks", required=True)
    p.add_argument("--out", choices=["csv"], default="csv")

    sub.add_parser("selftest", help="run the built-in reference-corpus checks")
    return parser


def _parse_ks(text, parser):
    try:
        ks = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        parser.error(f"--ks must be comma-separated integers, got {text!r}")
    if not ks or any(k < 1 for k in ks):
        parser.error("--ks values must be >= 1")
    return ks


def _query_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def _cmd_build(args):
    corpus = ingest(args.corpus)
    index = build_index(corpus)
    save_index(args.out, index, corpus.vocab.tokens)
    print(f"indexed {index.doc_count} documents, {index.term_count} terms, "
          f"{index.total_size_bits()} bits")
    return 0


def _validate_flags(args, parser):
    if args.command == "tier" and args.k < 1:
        parser.error("--k must be >= 1")
    if args.command == "blocks":
        if args.beta < 1:
            parser.error("--beta must be >= 1")
        if args.hybrid < 0:
            parser.error("--hybrid must be >= 0")
    if args.command == "query":
        if args.fallback and args.strategy != "tiered":
            parser.error("--fallback only applies to --strategy tiered")
        if args.strategy == "oracle" and args.model == "bloom":
            parser.error("--model does not apply to --strategy oracle")
        if args.bits_per_pair < 1:
            parser.error("--bits-per-pair must be >= 1")
    if args.command == "gain" and args.s is not None and args.s < 0:
        parser.error("--s must be >= 0")
    if args.command == "stats":
        try:
            fractions = [float(x) for x in args.fractions.split(",") if x.strip()]
        except ValueError:
            parser.error(f"--fractions must be comma-separated numbers, got {args.fractions!r}")
        if not fractions or any(not 0 < phi <= 1 for phi in fractions):
            parser.error("--fractions values must be in (0, 1]")
        args.fraction_values = fractions
    if args.command in ("gain", "guarantees"):
        args.k_values = _parse_ks(args.ks, parser)


def _cmd_tier(args):
    stored = load_index(args.index)
    tiered = build_tiered(stored.index, args.k)
    save_index(args.index, stored.index, stored.tokens, tiered=tiered, blocks=stored.blocks)
    print(f"tier partition written: k={args.k}, "
          f"{len(replaced_set(tiered))} replaced terms")
    return 0


def _cmd_blocks(args):
    stored = load_index(args.index)
    blocks = build_blocks(stored.index, args.beta, args.hybrid)
    save_index(args.index, stored.index, stored.tokens, tiered=stored.tiered, blocks=blocks)
    print(f"block partition written: beta={args.beta}, "
          f"{blocks.block_count} blocks, {len(blocks.hybrid_exact)} hybrid lists")
    return 0


def _make_model(args, stored):
    if args.strategy == "tiered":
        # the model only has to answer for truncated terms; complete
        # first-tier lists cover the rest
        scope = replaced_set(stored.tiered)
    else:
        scope = None
    if args.model == "exact":
        return build_exact_model(stored.index, scope)
    return build_bloom_model(stored.index, scope, bits_per_pair=args.bits_per_pair)


def _cmd_query(args):
    stored = load_index(args.index)
    if args.strategy == "tiered" and stored.tiered is None:
        raise TbixError(f"{args.index}: no tier partition (run 'tbix tier' first)")
    if args.strategy == "block" and stored.blocks is None:
        raise TbixError(f"{args.index}: no block partition (run 'tbix blocks' first)")
    vocab = stored.vocab
    model = None
    if args.strategy in ("exhaustive", "tiered", "block"):
        model = _make_model(args, stored)
    for line in _query_lines(args.queries):
        try:
            query = parse_query(line, vocab)
        except EmptyQueryError:
            continue
        except UnknownTermError as exc:
            query = Query(terms=(), unknown=exc.tokens)
        result = _run_query(args, query, stored, model)
        record = {
            "query": line,
            "docids": result.doc_list(),
            "candidates_scanned": result.candidates_scanned,
            "model_probes": result.model_probes,
            "guaranteed": result.guaranteed,
            "used_fallback": result.used_fallback,
            "unknown_terms": list(result.unknown_terms),
        }
        print(json.dumps(record))
    return 0


def _run_query(args, query, stored, model):
    if args.strategy == "exhaustive":
        return query_exhaustive(query, model, stored.index.doc_count)
    if args.strategy == "tiered":
        return query_tiered(query, stored.tiered, model, fallback=args.fallback)
    if args.strategy == "block":
        return query_block(query, stored.blocks, model)
    return query_oracle(query, stored.index)


def _cmd_stats(args):
    fractions = args.fraction_values
    stored = load_index(args.index)
    index = stored.index
    rows = [
        ("doc_count", "", index.doc_count),
        ("term_count", "", index.term_count),
        ("total_bits", "", index.total_size_bits()),
    ]
    for df, count in sorted(analysis.df_histogram(index).items()):
        rows.append(("df_histogram", df, count))
    for phi, m in zip(fractions, analysis.storage_fraction_curve(index, fractions)):
        rows.append(("storage_fraction", phi, m))
    print("metric,key,value")
    for metric, key, value in rows:
        print(f"{metric},{key},{value}")
    return 0


def _cmd_gain(args):
    ks = args.k_values
    stored = load_index(args.index)
    index = stored.index
    if args.s is None:
        print("k,replaced,trunc_bits,gain_s0,gain_s512,measured_trunc_bits")
    else:
        print("k,replaced,trunc_bits,gain,measured_trunc_bits")
    for report in analysis.gain_bounds_sweep(index, ks):
        measured = analysis.measured_trunc_list_size(index, report.k)
        if args.s is None:
            print(f"{report.k},{report.replaced_count},{report.trunc_list_size_bits},"
                  f"{report.gain_upper_bits},{report.gain_lower_bits},{measured}")
        else:
            value = analysis.gain(index, report.k, args.s)
            print(f"{report.k},{report.replaced_count},{report.trunc_list_size_bits},"
                  f"{value},{measured}")
    return 0


def _cmd_guarantees(args):
    ks = args.k_values
    stored = load_index(args.index)
    vocab = stored.vocab
    queries = []
    for line in _query_lines(args.queries):
        try:
            queries.append(parse_query(line, vocab))
        except EmptyQueryError:
            continue
        except UnknownTermError as exc:
            queries.append(Query(terms=(), unknown=exc.tokens))
    if not queries:
        raise TbixError(f"{args.queries}: no queries")
    print("k,pct_with,pct_without")
    for k in ks:
        report = analysis.guarantee_percentages(queries, stored.index, k)
        print(f"{k},{report.pct_with_model},{report.pct_without_model}")
    return 0


def _cmd_selftest(args):
    results = run_selftest()
    for res in results:
        status = "PASS" if res.ok else "FAIL"
        suffix = f": {res.detail}" if res.detail else ""
        print(f"{status} {res.name}{suffix}")
    failed = sum(1 for r in results if not r.ok)
    print(f"selftest: {len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else DATA_ERROR


_COMMANDS = {
    "build": _cmd_build,
    "tier": _cmd_tier,
    "blocks": _cmd_blocks,
    "query": _cmd_query,
    "stats": _cmd_stats,
    "gain": _cmd_gain,
    "guarantees": _cmd_guarantees,
    "selftest": _cmd_selftest,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    _validate_flags(args, parser)
    try:
        return _COMMANDS[args.command](args)
    except (TbixError, OSError, ValueError) as exc:
        print(f"tbix: error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
