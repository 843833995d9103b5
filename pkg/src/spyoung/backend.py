"""Import-time selection of the sampling core.

The compiled extension is preferred; set ``SPYOUNG_PURE_PYTHON=1`` to force the
pure-Python implementation (used by the benchmark and the differential tests).
"""

from __future__ import annotations

import os

if os.environ.get("SPYOUNG_PURE_PYTHON") == "1":
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _insertion as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _fallback as _impl

        BACKEND = "python"

sample_shapes_batch = _impl.sample_shapes


def get_backend() -> str:
    return BACKEND
