"""Kernel selection.

The compiled ``_kernels`` extension is used when it was built; otherwise the
pure-Python ``_fallback`` with identical semantics. Setting the environment
variable ``RICCI_STIEFEL_PURE=1`` forces the fallback.
"""
import os

if os.environ.get("RICCI_STIEFEL_PURE", "") not in ("", "0"):
    from . import _fallback as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        from . import _fallback as kernels

IMPLEMENTATION = kernels.IMPLEMENTATION

__all__ = ["kernels", "IMPLEMENTATION"]
