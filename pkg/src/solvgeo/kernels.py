"""Backend selection for the plane-ascent kernel.

Prefers the compiled extension, falls back to the numpy implementation
when the extension is absent (pure installs, fresh checkouts).  The
environment variable SOLVGEO_BACKEND overrides the choice for debugging
and benchmarking: set it to "compiled" or "python" before import.
"""

from __future__ import annotations

import os

from . import _ascent_py

_FORCED = os.environ.get("SOLVGEO_BACKEND", "").strip().lower()
if _FORCED not in ("", "compiled", "python"):
    raise ImportError(f"SOLVGEO_BACKEND must be 'compiled' or 'python', got {_FORCED!r}")

if _FORCED == "python":
    _impl = _ascent_py
    BACKEND = "python"
else:
    try:
        from . import _ascent as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _FORCED == "compiled":
            raise
        _impl = _ascent_py
        BACKEND = "python"

ascend = _impl.ascend

# the helpers below are backend-independent
orth_pairs = _ascent_py.orth_pairs
plane_values = _ascent_py.plane_values
