"""Kernel backend selection: compiled extension if available, numpy fallback.

Set DISCENV_PURE_PYTHON=1 to force the numpy backend (used by the
benchmark and by tests that cross-check the two implementations).
"""
import os

if os.environ.get("DISCENV_PURE_PYTHON"):
    from . import _kernels_np as _impl

    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_np as _impl  # type: ignore[no-redef]

        BACKEND = "python"

eval_poly = _impl.eval_poly
lognorm = _impl.lognorm
fs_density = _impl.fs_density
