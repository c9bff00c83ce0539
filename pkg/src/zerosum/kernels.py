"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``ZEROSUM_PURE=1`` to force the fallback.
"""

import os

from . import _pykernels as pure

if os.environ.get("ZEROSUM_PURE"):
    _impl = pure
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        _impl = pure

IMPLEMENTATION = _impl.IMPLEMENTATION
sum_length_table = _impl.sum_length_table
zero_sum_lengths = _impl.zero_sum_lengths
zero_sum_lengths_batch = _impl.zero_sum_lengths_batch
avoider_search = _impl.avoider_search


def get(name: str):
    """Return the kernel module named ``"cython"`` or ``"python"``."""
    if name == "python":
        return pure
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(name)
