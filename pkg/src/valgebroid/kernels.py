"""Backend selection for the sparse elimination kernels.

The compiled module is used when it was built and importable; setting
``VALGEBROID_PURE=1`` forces the pure-Python fallback.
"""

import os

BACKEND = "python"

if os.environ.get("VALGEBROID_PURE", "") not in ("", "0"):
    from ._pykernels import axpy, insert_row, reduce_vector, scale
else:
    try:
        from ._ckernels import axpy, insert_row, reduce_vector, scale

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._pykernels import axpy, insert_row, reduce_vector, scale

__all__ = ["BACKEND", "axpy", "insert_row", "reduce_vector", "scale"]
