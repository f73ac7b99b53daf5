"""Backend selector for the outcome-chain kernels.

Prefers the compiled Cython extension and falls back to the pure-Python
implementation when the extension was not built.  Both expose the same
functions with identical semantics; ``backend_name()`` reports which one
is active (also recorded in sweep manifests).
"""

from __future__ import annotations

try:
    from ._chain_cy import count_plus_labels, power_iterate

    _BACKEND = "cython"
except ImportError:  # extension not built; pure Python is functionally identical
    from ._chain_py import count_plus_labels, power_iterate

    _BACKEND = "python"

__all__ = ["count_plus_labels", "power_iterate", "backend_name"]


def backend_name() -> str:
    return _BACKEND
