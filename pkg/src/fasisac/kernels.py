"""Backend selection for the hot selection kernels.

The compiled extension is preferred when importable; set FASISAC_BACKEND to
``python`` or ``cython`` to force one (forcing an unavailable backend raises).
Both backends take the same inputs and agree to floating round-off.
"""

from __future__ import annotations

import os

from . import _gains_py

__all__ = ["BACKEND", "selected_comm_gains", "selected_gains"]


def _pick():
    choice = os.environ.get("FASISAC_BACKEND", "auto").lower()
    if choice not in ("auto", "cython", "python"):
        raise ValueError(
            f"FASISAC_BACKEND: expected auto, cython or python, got {choice!r}"
        )
    if choice == "python":
        return _gains_py
    try:
        from . import _gains_cy
    except ImportError:
        if choice == "cython":
            raise ImportError(
                "FASISAC_BACKEND=cython but the compiled extension is not "
                "built; reinstall the package or use FASISAC_BACKEND=python"
            )
        return _gains_py
    return _gains_cy


_impl = _pick()

BACKEND: str = _impl.BACKEND_NAME
selected_gains = _impl.selected_gains
selected_comm_gains = _impl.selected_comm_gains
