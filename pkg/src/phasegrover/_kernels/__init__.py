"""Kernel backend selection.

The compiled extension is used when importable; otherwise the numpy
fallback takes over. PHASEGROVER_KERNELS overrides the choice: "auto"
(default), "compiled" (fail if the extension is missing) or "numpy".
Both backends expose the same four kernels with locked semantics.
"""

from __future__ import annotations

import os

from . import _numpy_backend

_CHOICES = ("auto", "compiled", "numpy")


def _select():
    requested = os.environ.get("PHASEGROVER_KERNELS", "auto").strip().lower()
    if requested not in _CHOICES:
        raise ImportError(
            f"PHASEGROVER_KERNELS must be one of {_CHOICES}, got {requested!r}"
        )
    if requested in ("auto", "compiled"):
        try:
            from . import _core

            return _core
        except ImportError:
            if requested == "compiled":
                raise ImportError(
                    "PHASEGROVER_KERNELS=compiled but the extension is not "
                    "built; install with the Cython extension or use numpy"
                ) from None
    return _numpy_backend


_impl = _select()

BACKEND = _impl.BACKEND_NAME
BLOCK = _numpy_backend.BLOCK

tree_sum = _impl.tree_sum
phase_inplace = _impl.phase_inplace
add_inplace = _impl.add_inplace
add_at_inplace = _impl.add_at_inplace


def available_backends() -> dict:
    """Importable backends by name, for benchmarks and equivalence tests."""
    found = {"numpy": _numpy_backend}
    try:
        from . import _core

        found["compiled"] = _core
    except ImportError:
        pass
    return found
