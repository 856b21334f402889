"""Backend selection for the hot loops.

The Cython extension is used when it has been built; otherwise the
pure-Python module with the same signatures is loaded. Set
``PTCAVITY_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("PTCAVITY_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

rk4_moments = _impl.rk4_moments

__all__ = ["BACKEND", "rk4_moments"]
