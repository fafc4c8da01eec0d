"""Backend selection for the sparse-polynomial kernels.

The compiled extension is preferred. Set RESFORGE_BACKEND=python to force the
pure-Python fallback (useful for benchmarking and for platforms without a C
compiler).
"""
import os

from . import _pykernel

BACKEND = "python"
_impl = _pykernel

if os.environ.get("RESFORGE_BACKEND", "").lower() != "python":
    try:
        from . import _kernel as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernel

normalize = _impl.normalize
add = _impl.add
scale = _impl.scale
addmul = _impl.addmul
mul = _impl.mul
mul_monomial = _impl.mul_monomial
evaluate = _impl.evaluate


def backends():
    """Return {name: module} for every importable backend."""
    out = {"python": _pykernel}
    try:
        from . import _kernel

        out["cython"] = _kernel
    except ImportError:
        pass
    return out
