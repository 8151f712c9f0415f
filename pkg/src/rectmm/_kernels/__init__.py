"""Kernel selection: compiled extension if available, else pure Python.

The hot loops (LRU trace replay, connected-subset cut enumeration) exist
twice: a Cython extension (``_core``) and a pure-Python twin (``pure``).
Import-time selection, overridable with RECTMM_PURE_PYTHON=1.  Both
expose: ``LruCache``, ``min_cut_per_size``, ``IMPLEMENTATION``.
"""

import os

from . import pure

if os.environ.get("RECTMM_PURE_PYTHON") == "1":
    _impl = pure
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = pure

LruCache = _impl.LruCache
min_cut_per_size = _impl.min_cut_per_size
IMPLEMENTATION = _impl.IMPLEMENTATION


def implementations():
    """All available kernel implementations, for benchmarks and twin tests."""
    impls = {"pure": pure}
    try:
        from . import _core

        impls["compiled"] = _core
    except ImportError:
        pass
    return impls
