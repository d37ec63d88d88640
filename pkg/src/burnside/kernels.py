"""Kernel selection: compiled extension if importable, else pure Python.

Set BURNSIDE_PURE_PYTHON=1 to force the fallback (the benchmark and the
cross-checking tests do). ``IMPLEMENTATION`` names the active backend.
"""

from __future__ import annotations

import os

if os.environ.get("BURNSIDE_PURE_PYTHON") == "1":
    from . import _purekernels as _impl

    IMPLEMENTATION = "python"
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]

        IMPLEMENTATION = "c"
    except ImportError:
        from . import _purekernels as _impl

        IMPLEMENTATION = "python"

build_index = _impl.build_index
reduce_word = _impl.reduce_word
free_reduce_word = _impl.free_reduce_word
