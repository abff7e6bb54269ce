"""Kernel selection: compiled walkers when built, pure Python otherwise.

Set ``QLOMTBDD_PURE=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("QLOMTBDD_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

flatten = _impl.flatten
evaluate = _impl.evaluate
trace = _impl.trace
evaluate_many = _impl.evaluate_many

__all__ = ["BACKEND", "flatten", "evaluate", "trace", "evaluate_many"]
