"""Kernel backend selection.

Prefers the compiled extension; falls back to the numpy implementation when
the extension is missing or ``LPCODEC_PURE_PYTHON=1`` is set.  Both backends
expose the same functions with identical results (see tests/test_kernels.py).
"""

import os

from . import _kernels_py

if os.environ.get("LPCODEC_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

xor_msb = _impl.xor_msb
xnor_msb = _impl.xnor_msb
sm_encode = _impl.sm_encode
sm_decode = _impl.sm_decode
xor_const = _impl.xor_const
decorrelate = _impl.decorrelate
correlate = _impl.correlate
lane_counts = _impl.lane_counts
