"""Backend selection for the lattice kernels.

The compiled extension is used when it imports; setting
``RATETREE_PURE_PYTHON=1`` forces the NumPy fallback.
"""
import os

from . import _pykernels

BACKENDS = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels

if _ckernels is not None and not os.environ.get("RATETREE_PURE_PYTHON"):
    BACKEND = "cython"
else:
    BACKEND = "python"


def get_backend(name=None):
    """Return the kernel module for ``name`` (default: the active backend)."""
    name = name or BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available; have {sorted(BACKENDS)}") from None


def set_backend(name):
    """Switch the active backend; returns the previous name."""
    global BACKEND
    get_backend(name)
    previous, BACKEND = BACKEND, name
    return previous
