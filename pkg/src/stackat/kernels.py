"""Selects the compiled closure kernels when available.

Set ``STACKAT_PURE_PYTHON=1`` to force the pure-Python implementation.
"""

import os

from . import _kernels_py

IMPLEMENTATION = "python"

if os.environ.get("STACKAT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        IMPLEMENTATION = "cython"
    except ImportError:
        _impl = _kernels_py

transitive_closure = _impl.transitive_closure
pushpop_saturate = _impl.pushpop_saturate


def get(name):
    """Return the module implementing ``name`` ("python" or "cython")."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(name)
