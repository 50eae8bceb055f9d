"""Pure-numpy kernel implementations (fallback backend).

Must stay result-identical to :mod:`tbix.kernels.numba_backend`; the
cross-backend tests enforce this on random inputs.
"""

import numpy as np

NAME = "numpy"

# A value may occupy at most 9 encoded bytes (63 payload bits) so decoded
# values always fit in int64.
MAX_VALUE_BYTES = 9

_THRESHOLDS = np.array([1 << (7 * i) for i in range(1, MAX_VALUE_BYTES)], dtype=np.int64)

# splitmix64 finalizer constants, shared with the numba backend.
_M1 = np.uint64(0x9E3779B97F4A7C15)
_M2 = np.uint64(0xBF58476D1CE4E5B9)
_M3 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S33 = np.uint64(33)
_ONE = np.uint64(1)


def vb_encode(values):
    """Variable-byte encode non-negative int64 values into a uint8 array.

    Little-endian 7-bit groups, low group first; the high bit (0x80) is
    set on every byte except the last byte of each value.
    """
    values = np.ascontiguousarray(values, dtype=np.int64)
    if values.size == 0:
        return np.empty(0, dtype=np.uint8)
    if int(values.min()) < 0:
        raise ValueError("vb_encode: negative value")
    nbytes = np.searchsorted(_THRESHOLDS, values, side="right") + 1
    offsets = np.zeros(values.size, dtype=np.int64)
    np.cumsum(nbytes[:-1], out=offsets[1:])
    out = np.empty(int(nbytes.sum()), dtype=np.uint8)
    for j in range(int(nbytes.max())):
        live = nbytes > j
        group = (values[live] >> (7 * j)) & 0x7F
        cont = (nbytes[live] > j + 1).astype(np.uint8) << 7
        out[offsets[live] + j] = group.astype(np.uint8) | cont
    return out


def vb_decode(buf):
    """Inverse of :func:`vb_encode`; returns the decoded int64 values.

    Raises ValueError on a dangling continuation bit or on a value wider
    than 9 bytes.
    """
    buf = np.ascontiguousarray(buf, dtype=np.uint8)
    if buf.size == 0:
        return np.empty(0, dtype=np.int64)
    final = buf < 0x80
    if not final[-1]:
        raise ValueError("vb_decode: truncated stream (dangling continuation bit)")
    group = np.zeros(buf.size, dtype=np.int64)
    np.cumsum(final[:-1], out=group[1:])
    starts = np.flatnonzero(np.concatenate(([True], final[:-1])))
    pos = np.arange(buf.size, dtype=np.int64) - starts[group]
    if int(pos.max()) >= MAX_VALUE_BYTES:
        raise ValueError("vb_decode: value exceeds 9 bytes")
    values = np.zeros(int(np.count_nonzero(final)), dtype=np.int64)
    np.add.at(values, group, (buf & 0x7F).astype(np.int64) << (7 * pos))
    return values


def intersect_sorted(a, b):
    """Intersection of two strictly increasing int64 arrays, sorted."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return np.intersect1d(a, b, assume_unique=True)


def probe_bitrow(row, docs):
    """Test bits of a little-endian packed row at the given positions."""
    docs = np.asarray(docs, dtype=np.int64)
    return ((row[docs >> 3] >> (docs & 7)) & 1).astype(bool)


def _mix64(x):
    z = x + _M1
    z = (z ^ (z >> _S30)) * _M2
    z = (z ^ (z >> _S27)) * _M3
    return z ^ (z >> _S31)


def _positions(h1, h2, i, n_bits):
    return ((h1 + np.uint64(i) * h2) % np.uint64(n_bits)).astype(np.int64)


def bloom_insert(bits, n_bits, n_hashes, keys):
    """Set the n_hashes bit positions of every key; mutates ``bits``."""
    keys = np.ascontiguousarray(keys, dtype=np.uint64)
    if keys.size == 0:
        return
    h1 = _mix64(keys)
    h2 = (h1 >> _S33) | _ONE
    for i in range(int(n_hashes)):
        pos = _positions(h1, h2, i, n_bits)
        byte = pos >> 3
        mask = (np.uint8(1) << (pos & 7).astype(np.uint8)).astype(np.uint8)
        order = np.argsort(byte, kind="stable")
        byte = byte[order]
        mask = mask[order]
        firsts = np.flatnonzero(np.concatenate(([True], byte[1:] != byte[:-1])))
        bits[byte[firsts]] |= np.bitwise_or.reduceat(mask, firsts)


def bloom_probe(bits, n_bits, n_hashes, keys):
    """Return a bool array: True where every hashed bit of the key is set."""
    keys = np.ascontiguousarray(keys, dtype=np.uint64)
    if keys.size == 0:
        return np.empty(0, dtype=bool)
    h1 = _mix64(keys)
    h2 = (h1 >> _S33) | _ONE
    hit = np.ones(keys.size, dtype=bool)
    for i in range(int(n_hashes)):
        pos = _positions(h1, h2, i, n_bits)
        hit &= ((bits[pos >> 3] >> (pos & 7)) & 1).astype(bool)
    return hit
