"""Compressed inverted index with tiered and blocked partitions and
pluggable term-document membership models for conjunctive Boolean search."""

__version__ = "0.1.0"

from tbix.codec import CompressedPostings, decode_postings, encode_postings
from tbix.corpus import (
    Corpus,
    Query,
    Vocabulary,
    ingest,
    ingest_text,
    parse_query,
    tokenize,
)
from tbix.engine import (
    QueryResult,
    query_block,
    query_exhaustive,
    query_oracle,
    query_tiered,
)
from tbix.index import InvertedIndex, build_index, intersect
from tbix.membership import (
    BloomModel,
    ExactModel,
    MembershipModel,
    ModelCostParams,
    build_bloom_model,
    build_exact_model,
    model_storage_bits,
)
from tbix.partition import (
    BlockIndex,
    TieredIndex,
    build_blocks,
    build_tiered,
    replaced_set,
)
from tbix.storage import IndexFile, load_index, save_index
