"""Selects the cost-kernel backend at import time.

The compiled extension is preferred when it imports cleanly; otherwise the
NumPy fallback is used. Set ``TRACKLINE_BACKEND=numpy`` or ``=compiled`` to
force one side (forcing ``compiled`` raises if the extension is missing).
"""
from __future__ import annotations

import os

from . import _kernels

fallback = _kernels
compiled = None
try:
    from . import _core as compiled  # type: ignore[no-redef]
except ImportError:
    compiled = None

_forced = os.environ.get("TRACKLINE_BACKEND", "").strip().lower()
if _forced == "numpy":
    active = fallback
elif _forced == "compiled":
    if compiled is None:
        raise ImportError(
            "TRACKLINE_BACKEND=compiled but the trackline._core extension "
            "is not built; install with the Cython extension or unset the variable"
        )
    active = compiled
elif _forced:
    raise ImportError(f"unknown TRACKLINE_BACKEND value: {_forced!r}")
else:
    active = compiled if compiled is not None else fallback

evaluate = active.evaluate


def backend_name() -> str:
    """Name of the kernel implementation in use."""
    return active.BACKEND_NAME
