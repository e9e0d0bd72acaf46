"""Kernel selection: compiled extension when importable, numpy otherwise."""
import os

from . import _fallback

BACKEND = "python"
propagate = _fallback.propagate
miller_backward = _fallback.miller_backward

if not os.environ.get("QWALK_PURE_PYTHON"):
    try:
        from . import _kernels
    except ImportError:  # extension not built
        pass
    else:
        BACKEND = "compiled"
        propagate = _kernels.propagate
        miller_backward = _kernels.miller_backward
