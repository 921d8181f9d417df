"""Backend selection for the hot kernels.

The compiled extension is used when importable; set ``CLAUSEALIGN_PURE=1``
to force the pure-Python fallback.
"""

import os

from clausealign import _kernels_py

if os.environ.get("CLAUSEALIGN_PURE"):
    _impl = _kernels_py
else:
    try:
        from clausealign import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"

levenshtein = _impl.levenshtein
lcs_length = _impl.lcs_length
dp_fill = _impl.dp_fill

BP_NONE = _kernels_py.BP_NONE
BP_11 = _kernels_py.BP_11
BP_21 = _kernels_py.BP_21
BP_12 = _kernels_py.BP_12
BP_22 = _kernels_py.BP_22
BP_10 = _kernels_py.BP_10
BP_01 = _kernels_py.BP_01
