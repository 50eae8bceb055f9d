"""JIT-compiled kernel implementations (default backend).

Must stay result-identical to :mod:`tbix.kernels.numpy_backend`.
"""

import numpy as np
from numba import njit

NAME = "numba"

MAX_VALUE_BYTES = 9

# splitmix64 finalizer constants, shared with the numpy backend.
_M1 = np.uint64(0x9E3779B97F4A7C15)
_M2 = np.uint64(0xBF58476D1CE4E5B9)
_M3 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S33 = np.uint64(33)
_ONE = np.uint64(1)


@njit(cache=True)
def vb_encode(values):
    n = values.size
    total = 0
    for i in range(n):
        v = values[i]
        if v < 0:
            raise ValueError("vb_encode: negative value")
        total += 1
        while v >= 0x80:
            v >>= 7
            total += 1
    out = np.empty(total, np.uint8)
    pos = 0
    for i in range(n):
        v = values[i]
        while v >= 0x80:
            out[pos] = np.uint8((v & 0x7F) | 0x80)
            v >>= 7
            pos += 1
        out[pos] = np.uint8(v)
        pos += 1
    return out


@njit(cache=True)
def vb_decode(buf):
    n = buf.size
    if n == 0:
        return np.empty(0, np.int64)
    if buf[n - 1] >= 0x80:
        raise ValueError("vb_decode: truncated stream (dangling continuation bit)")
    count = 0
    for i in range(n):
        if buf[i] < 0x80:
            count += 1
    out = np.empty(count, np.int64)
    value = np.int64(0)
    shift = 0
    width = 0
    j = 0
    for i in range(n):
        b = buf[i]
        width += 1
        if width > MAX_VALUE_BYTES:
            raise ValueError("vb_decode: value exceeds 9 bytes")
        value |= np.int64(b & 0x7F) << shift
        if b < 0x80:
            out[j] = value
            j += 1
            value = np.int64(0)
            shift = 0
            width = 0
        else:
            shift += 7
    return out


@njit(cache=True)
def intersect_sorted(a, b):
    na = a.size
    nb = b.size
    out = np.empty(min(na, nb), np.int64)
    i = 0
    j = 0
    k = 0
    while i < na and j < nb:
        x = a[i]
        y = b[j]
        if x == y:
            out[k] = x
            k += 1
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return out[:k]


@njit(cache=True)
def probe_bitrow(row, docs):
    out = np.empty(docs.size, np.bool_)
    for i in range(docs.size):
        d = docs[i]
        out[i] = (np.int64(row[d >> 3]) >> (d & 7)) & 1 != 0
    return out


@njit(cache=True)
def _mix64(x):
    z = x + _M1
    z = (z ^ (z >> _S30)) * _M2
    z = (z ^ (z >> _S27)) * _M3
    return z ^ (z >> _S31)


@njit(cache=True)
def bloom_insert(bits, n_bits, n_hashes, keys):
    m = np.uint64(n_bits)
    for i in range(keys.size):
        h1 = _mix64(keys[i])
        h2 = (h1 >> _S33) | _ONE
        for j in range(n_hashes):
            pos = (h1 + np.uint64(j) * h2) % m
            bits[pos >> np.uint64(3)] |= np.uint8(1) << np.uint8(pos & np.uint64(7))


@njit(cache=True)
def bloom_probe(bits, n_bits, n_hashes, keys):
    m = np.uint64(n_bits)
    out = np.empty(keys.size, np.bool_)
    for i in range(keys.size):
        h1 = _mix64(keys[i])
        h2 = (h1 >> _S33) | _ONE
        hit = True
        for j in range(n_hashes):
            pos = (h1 + np.uint64(j) * h2) % m
            if (bits[pos >> np.uint64(3)] >> np.uint8(pos & np.uint64(7))) & np.uint8(1) == 0:
                hit = False
                break
        out[i] = hit
    return out
