"""Kernel selection: the compiled extension when it is built, else the
pure-Python fallback. Set ``MJSPEC_PURE_PYTHON=1`` to force the fallback."""

import os

if os.environ.get("MJSPEC_PURE_PYTHON", "").strip() not in ("", "0"):
    from . import _fallback as impl
else:
    try:
        from . import _kernels as impl
    except ImportError:  # extension not built
        from . import _fallback as impl

COMPILED = impl.__name__.rsplit(".", 1)[-1] == "_kernels"

sturm_count = impl.sturm_count
band_eigvals = impl.band_eigvals
chain_pfaffian_sign = impl.chain_pfaffian_sign

__all__ = ["COMPILED", "impl", "sturm_count", "band_eigvals", "chain_pfaffian_sign"]
