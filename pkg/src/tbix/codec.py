"""Postings-list codec: delta gaps + variable-byte groups.

A postings list is stored as gaps: the first gap is the first document id
itself (so id 0 is representable), every later gap is the difference
from the previous id and therefore strictly positive. Each gap is written
least-significant 7-bit group first with the high bit (0x80) set on every
byte except the final byte of the value. Sizes are always counted in bits
(8 x encoded bytes) so list sizes and per-term flag bits share one unit.

The codec sits behind this module so a block-based codec can be swapped
in without touching any size accounting downstream.
"""

from dataclasses import dataclass

import numpy as np

from tbix import kernels
from tbix.errors import CodecError


@dataclass(frozen=True)
class CompressedPostings:
    """Encoded postings plus the two numbers the size analyses need."""

    data: bytes
    size_bits: int
    df: int


def as_postings(doc_ids, doc_count=None):
    """Validate doc ids and return them as the canonical int64 array.

    Ids must be strictly increasing and non-negative; when ``doc_count``
    is given they must also be smaller than it.
    """
    arr = np.asarray(doc_ids, dtype=np.int64)
    if arr.ndim != 1:
        raise CodecError("postings must be one-dimensional")
    if arr.size:
        if int(arr[0]) < 0:
            raise CodecError("doc ids must be non-negative")
        if arr.size > 1 and int(np.diff(arr).min()) <= 0:
            raise CodecError("doc ids must be strictly increasing")
        if doc_count is not None and int(arr[-1]) >= doc_count:
            raise CodecError(f"doc id {int(arr[-1])} out of range (doc_count={doc_count})")
    return arr


def encode_postings(doc_ids):
    """Compress a strictly increasing id list into CompressedPostings."""
    ids = as_postings(doc_ids)
    gaps = np.diff(ids, prepend=0)
    data = bytes(kernels.vb_encode(gaps))
    return CompressedPostings(data=data, size_bits=8 * len(data), df=ids.size)


def decode_postings(compressed):
    """Exact inverse of :func:`encode_postings`.

    Accepts CompressedPostings or a raw byte string. Raises CodecError on
    truncated input or gaps that would not have been produced by encode.
    """
    if isinstance(compressed, CompressedPostings):
        data, df = compressed.data, compressed.df
    else:
        data, df = bytes(compressed), None
    try:
        gaps = kernels.vb_decode(np.frombuffer(data, dtype=np.uint8))
    except ValueError as exc:
        raise CodecError(str(exc)) from None
    if gaps.size > 1 and int(gaps[1:].min()) < 1:
        raise CodecError("zero gap after the first value")
    if df is not None and gaps.size != df:
        raise CodecError(f"decoded {gaps.size} ids, expected df={df}")
    return np.cumsum(gaps, dtype=np.int64) if gaps.size else gaps
