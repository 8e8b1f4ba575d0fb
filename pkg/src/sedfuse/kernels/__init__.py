"""Hot inner-loop kernels with a compiled core and a numpy fallback.

The compiled extension (``_native``, built from Cython) is preferred; if it
is unavailable, or if ``SEDFUSE_PURE_PYTHON`` is set in the environment, the
numpy implementation in ``pure`` is used. Both expose the same three
functions and agree numerically (see tests/test_kernels.py and
benchmarks/bench_kernels.py).
"""

from __future__ import annotations

import os

from . import pure

if os.environ.get("SEDFUSE_PURE_PYTHON"):
    _impl = pure
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pure

median_filter_1d = _impl.median_filter_1d
mean_filter_1d = _impl.mean_filter_1d
threshold_runs = _impl.threshold_runs


def backend() -> str:
    """Name of the kernel backend selected at import time."""
    return _impl.BACKEND
