"""Optional numba compilation for the integer kernels.

Kernels are plain Python functions over numpy arrays.  With numba they are
compiled for int64 input.  :func:`pure_copy` loads a second, uncompiled copy
of a kernel module whose functions call each other as plain Python, which
is the exact fallback for values that could overflow 64 bits (object arrays
of Python ints).  ``LMCSI_NO_JIT=1`` disables compilation altogether.
"""

import importlib.util
import os
import sys

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_DISABLED = os.environ.get("LMCSI_NO_JIT") == "1"
_pure_loading = False


def kernel(fn):
    if numba is None or _DISABLED or _pure_loading:
        fn.py_func = fn
        return fn
    return numba.njit(cache=True)(fn)


INT64_SAFE = 1 << 62

_copies = {}


def pure_copy(module):
    """Uncompiled copy of ``module`` (cached)."""
    global _pure_loading
    name = module.__name__ + "_pure"
    if name not in _copies:
        spec = importlib.util.spec_from_file_location(name, module.__file__)
        mod = importlib.util.module_from_spec(spec)
        mod.__package__ = module.__package__
        _pure_loading = True
        try:
            spec.loader.exec_module(mod)
        finally:
            _pure_loading = False
        sys.modules.setdefault(name, mod)
        _copies[name] = mod
    return _copies[name]
