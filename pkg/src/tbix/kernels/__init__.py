"""Numeric kernels with two interchangeable backends.

The numba backend JIT-compiles the hot loops (codec, probes,
intersection); the numpy backend is a fully vectorized fallback with no
per-element Python loops. Both produce bit-identical results, so the
choice only affects speed.

Selection happens once, at import time, via the ``TBIX_BACKEND``
environment variable: ``numba``, ``numpy``, or unset/``auto`` (numba when
importable, numpy otherwise). ``benchmarks/bench_backends.py`` times the
two implementations side by side.
"""

import os

__all__ = [
    "BACKEND",
    "vb_encode",
    "vb_decode",
    "intersect_sorted",
    "probe_bitrow",
    "bloom_insert",
    "bloom_probe",
]

_requested = os.environ.get("TBIX_BACKEND", "auto").strip().lower() or "auto"

if _requested == "numpy":
    from tbix.kernels import numpy_backend as _impl
elif _requested == "numba":
    from tbix.kernels import numba_backend as _impl
elif _requested == "auto":
    try:
        from tbix.kernels import numba_backend as _impl
    except ImportError:
        from tbix.kernels import numpy_backend as _impl
else:
    raise ValueError(
        f"TBIX_BACKEND={_requested!r}: expected 'numba', 'numpy', or 'auto'"
    )

BACKEND = _impl.NAME

vb_encode = _impl.vb_encode
vb_decode = _impl.vb_decode
intersect_sorted = _impl.intersect_sorted
probe_bitrow = _impl.probe_bitrow
bloom_insert = _impl.bloom_insert
bloom_probe = _impl.bloom_probe
