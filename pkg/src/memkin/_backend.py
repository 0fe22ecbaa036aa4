"""Kernel backend selection.

Prefers the compiled extension; falls back to the numpy implementations
when it is unavailable or when MEMKIN_PURE is set (useful for the
benchmark and for backend equivalence tests).
"""

import os

from . import _kernels_py

if os.environ.get("MEMKIN_PURE", ""):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

HAS_COMPILED = bool(getattr(kernels, "COMPILED", False))

solve_chain_batched = kernels.solve_chain_batched
staircase_fraction = kernels.staircase_fraction
