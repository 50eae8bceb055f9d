"""Single-file index container.

Layout (all integers little-endian):

    magic b"TBIX" | version u32 | doc_count u32 | term_count u32
    term records x term_count: df u32 | nbytes u32 | codec bytes
    zero or more sections, each: tag (4 bytes) | payload length u64 | payload

Sections:

    VOCB  newline-joined vocabulary tokens in term-id order (UTF-8);
          written by every build so queries can be parsed from the file
          alone
    TIER  k u32, then per term: tier-1 count u32, nbytes u32, codec
          bytes, tier-2 count u32, nbytes u32, codec bytes
    BLOK  beta u32, hybrid_threshold u32, per term: block count u32,
          nbytes u32, codec bytes; then hybrid entry count u32 and per
          entry: term u32, df u32, nbytes u32, codec bytes

Unknown section tags are skipped on read. Writing is deterministic:
identical inputs produce identical files.
"""

import struct
from dataclasses import dataclass

from tbix.codec import CompressedPostings, decode_postings, encode_postings
from tbix.corpus import Vocabulary
from tbix.errors import IndexFileError
from tbix.index import InvertedIndex
from tbix.partition import BlockIndex, TieredIndex

MAGIC = b"TBIX"
FORMAT_VERSION = 1

_U32_MAX = 0xFFFFFFFF


@dataclass
class IndexFile:
    """Everything a single container file holds."""

    index: InvertedIndex
    tokens: tuple
    tiered: TieredIndex | None = None
    blocks: BlockIndex | None = None

    @property
    def vocab(self):
        return Vocabulary(self.tokens)


def _u32(value):
    if not 0 <= value <= _U32_MAX:
        raise ValueError(f"value {value} does not fit in u32")
    return struct.pack("<I", value)


def _u64(value):
    return struct.pack("<Q", value)


def _encoded_block(arr):
    comp = encode_postings(arr)
    return _u32(comp.df) + _u32(len(comp.data)) + comp.data


def _vocab_payload(tokens):
    return "\n".join(tokens).encode("utf-8")


def _tier_payload(tiered):
    parts = [_u32(tiered.k)]
    for t1, t2 in zip(tiered.tier1, tiered.tier2):
        parts.append(_encoded_block(t1))
        parts.append(_encoded_block(t2))
    return b"".join(parts)


def _blok_payload(blocks):
    parts = [_u32(blocks.beta), _u32(blocks.hybrid_threshold)]
    for arr in blocks.block_lists:
        parts.append(_encoded_block(arr))
    hybrid_terms = sorted(blocks.hybrid_exact)
    parts.append(_u32(len(hybrid_terms)))
    for t in hybrid_terms:
        parts.append(_u32(t))
        parts.append(_encoded_block(blocks.hybrid_exact[t]))
    return b"".join(parts)


def save_index(path, index, tokens, tiered=None, blocks=None):
    """Write the container; always includes the vocabulary section."""
    if len(tokens) != index.term_count:
        raise ValueError("token list does not match index term count")
    parts = [MAGIC, _u32(FORMAT_VERSION), _u32(index.doc_count), _u32(index.term_count)]
    for comp in index.postings:
        parts.append(_u32(comp.df))
        parts.append(_u32(len(comp.data)))
        parts.append(comp.data)

    def section(tag, payload):
        parts.append(tag)
        parts.append(_u64(len(payload)))
        parts.append(payload)

    section(b"VOCB", _vocab_payload(tokens))
    if tiered is not None:
        section(b"TIER", _tier_payload(tiered))
    if blocks is not None:
        section(b"BLOK", _blok_payload(blocks))
    with open(path, "wb") as fh:
        fh.write(b"".join(parts))


class _Reader:
    def __init__(self, path, data):
        self.path = path
        self.data = data
        self.offset = 0

    def fail(self, message):
        raise IndexFileError(self.path, self.offset, message)

    def take(self, n, what):
        if self.offset + n > len(self.data):
            self.fail(f"truncated while reading {what}")
        chunk = self.data[self.offset : self.offset + n]
        self.offset += n
        return chunk

    def u32(self, what):
        return struct.unpack("<I", self.take(4, what))[0]

    def u64(self, what):
        return struct.unpack("<Q", self.take(8, what))[0]

    def at_end(self):
        return self.offset >= len(self.data)


def _read_encoded_block(reader, what):
    count = reader.u32(f"{what} count")
    nbytes = reader.u32(f"{what} byte length")
    data = reader.take(nbytes, f"{what} bytes")
    start = reader.offset - nbytes
    try:
        ids = decode_postings(CompressedPostings(data, 8 * nbytes, count))
    except Exception as exc:
        raise IndexFileError(reader.path, start, f"bad {what}: {exc}") from None
    return ids


def _read_tier(reader, term_count, doc_count):
    k = reader.u32("tier k")
    if k < 1:
        reader.fail("tier k must be >= 1")
    tier1 = []
    tier2 = []
    for t in range(term_count):
        tier1.append(_read_encoded_block(reader, f"tier-1 list of term {t}"))
        tier2.append(_read_encoded_block(reader, f"tier-2 list of term {t}"))
    return TieredIndex(k, tier1, tier2, doc_count)


def _read_blok(reader, term_count, doc_count):
    beta = reader.u32("block width")
    if beta < 1:
        reader.fail("block width must be >= 1")
    hybrid_threshold = reader.u32("hybrid threshold")
    block_lists = []
    for t in range(term_count):
        block_lists.append(_read_encoded_block(reader, f"block list of term {t}"))
    hybrid_exact = {}
    n_hybrid = reader.u32("hybrid entry count")
    for _ in range(n_hybrid):
        t = reader.u32("hybrid term id")
        if t >= term_count:
            reader.fail(f"hybrid term id {t} out of range")
        hybrid_exact[t] = _read_encoded_block(reader, f"hybrid list of term {t}")
    return BlockIndex(beta, hybrid_threshold, block_lists, hybrid_exact, doc_count)


def load_index(path):
    """Read a container file back into an IndexFile."""
    with open(path, "rb") as fh:
        data = fh.read()
    reader = _Reader(path, data)
    magic = reader.take(4, "magic")
    if magic != MAGIC:
        reader.offset = 0
        reader.fail(f"bad magic {magic!r}")
    version = reader.u32("format version")
    if version != FORMAT_VERSION:
        reader.fail(f"unsupported format version {version}")
    doc_count = reader.u32("doc count")
    term_count = reader.u32("term count")
    postings = []
    for t in range(term_count):
        df = reader.u32(f"df of term {t}")
        nbytes = reader.u32(f"byte length of term {t}")
        raw = bytes(reader.take(nbytes, f"postings bytes of term {t}"))
        comp = CompressedPostings(raw, 8 * nbytes, df)
        start = reader.offset - nbytes
        try:
            ids = decode_postings(comp)
        except Exception as exc:
            raise IndexFileError(path, start, f"bad postings of term {t}: {exc}") from None
        if ids.size and int(ids[-1]) >= doc_count:
            raise IndexFileError(path, start, f"term {t} references doc {int(ids[-1])}")
        postings.append(comp)
    index = InvertedIndex(postings, doc_count=doc_count, term_count=term_count)

    tokens = None
    tiered = None
    blocks = None
    while not reader.at_end():
        tag = bytes(reader.take(4, "section tag"))
        length = reader.u64("section length")
        end = reader.offset + length
        if end > len(data):
            reader.fail(f"truncated section {tag!r}")
        if tag == b"VOCB":
            start = reader.offset
            payload = reader.take(length, "vocabulary payload")
            try:
                text = payload.decode("utf-8")
            except UnicodeDecodeError:
                raise IndexFileError(path, start, "vocabulary is not valid UTF-8") from None
            tokens = tuple(text.split("\n")) if length else ()
            if len(tokens) != term_count:
                reader.fail(f"vocabulary has {len(tokens)} tokens, expected {term_count}")
        elif tag == b"TIER":
            tiered = _read_tier(reader, term_count, doc_count)
            if reader.offset != end:
                reader.fail("tier section length mismatch")
        elif tag == b"BLOK":
            blocks = _read_blok(reader, term_count, doc_count)
            if reader.offset != end:
                reader.fail("block section length mismatch")
        else:
            reader.take(length, f"unknown section {tag!r}")
    if tokens is None:
        reader.fail("missing vocabulary section")
    return IndexFile(index=index, tokens=tokens, tiered=tiered, blocks=blocks)
