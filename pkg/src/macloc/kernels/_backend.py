"""Kernel backend selection.

The compiled ``_ckernel`` is used when importable; setting
``MACLOC_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

from . import _pykernel

if os.environ.get("MACLOC_PURE_PYTHON") == "1":
    _impl = _pykernel
else:
    try:
        from . import _ckernel as _impl
    except ImportError:  # extension not built
        _impl = _pykernel

mul_terms = _impl.mul_terms
BACKEND = _impl.BACKEND
