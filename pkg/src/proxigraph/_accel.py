"""JIT switch for the numeric kernels.

Kernels are written once as plain loops over numpy arrays. When numba is
importable and ``PROXIGRAPH_JIT`` is not ``0`` they are compiled with
``numba.njit``. A second copy of the kernel module is always loaded with
compilation off (the fallback path); it also accepts ``dtype=object``
arrays of Python ints for coordinates too large for int64.
"""
import importlib.util
import os
import sys

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

JIT_ENABLED = numba is not None and os.environ.get("PROXIGRAPH_JIT", "1") != "0"

# int64 kernels are exact while integer coordinates span less than this
# (squared distances and dot products stay below 2**62).
INT_SPAN_LIMIT = 2**30

_PY_SUFFIX = "_pyloops"


def _identity(func):
    return func


def jit_for(module_name):
    """Decorator for kernels defined in ``module_name``."""
    if JIT_ENABLED and not module_name.endswith(_PY_SUFFIX):
        return numba.njit(cache=True, nogil=True)
    return _identity


def python_twin(module):
    """Load an uncompiled copy of a kernel module."""
    name = module.__name__ + _PY_SUFFIX
    if name in sys.modules:
        return sys.modules[name]
    spec = importlib.util.spec_from_file_location(name, module.__file__)
    twin = importlib.util.module_from_spec(spec)
    sys.modules[name] = twin
    spec.loader.exec_module(twin)
    return twin


def use_jit(arr) -> bool:
    """True when ``arr`` can be handed to a compiled kernel."""
    return JIT_ENABLED and arr.dtype != object
