"""Backend selection for the hot kernels.

Prefers the compiled extension; falls back to the numpy implementation.
Set FIGMINE_BACKEND=numpy or FIGMINE_BACKEND=compiled to force a choice.
"""

from __future__ import annotations

import os

from figmine.kernels import numpy_backend

_choice = os.environ.get("FIGMINE_BACKEND", "").strip().lower()

_compiled = None
if _choice != "numpy":
    try:
        from figmine import _ckernels as _compiled
    except ImportError:
        _compiled = None
        if _choice == "compiled":
            raise

if _compiled is not None:
    BACKEND = "compiled"
    _impl = _compiled
else:
    BACKEND = "numpy"
    _impl = numpy_backend


def get_backend(name=None):
    """Return the kernel module for `name` ('compiled', 'numpy', or None for
    the active default). Raises ImportError if the compiled extension is
    requested but absent."""
    if name is None or name == BACKEND:
        return _impl
    if name == "numpy":
        return numpy_backend
    if name == "compiled":
        from figmine import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend: {name!r}")


smo_solve = _impl.smo_solve
assign_nearest = _impl.assign_nearest
encode_histogram = _impl.encode_histogram

__all__ = [
    "BACKEND",
    "get_backend",
    "smo_solve",
    "assign_nearest",
    "encode_histogram",
]
