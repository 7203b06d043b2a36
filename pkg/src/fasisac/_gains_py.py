"""Numpy implementation of the port-selection gain kernels.

Reference semantics for the compiled extension; selected automatically when
the extension is unavailable. Inputs are the correlation root F (L x r) and
blocks of standard complex Gaussian drivers (r x n).
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def selected_gains(
    F: np.ndarray, wc: np.ndarray, ws: np.ndarray, alphas: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Selected-port gain pairs for every selection weight.

    Returns ``(gamma_c, gamma_s)`` with shape (len(alphas), n) where column j
    holds the gains of trial j's selected port under each weight.
    """
    h_c = F @ wc
    gc_all = h_c.real**2 + h_c.imag**2
    if ws is wc:
        gs_all = gc_all
    else:
        h_s = F @ ws
        gs_all = h_s.real**2 + h_s.imag**2

    n = gc_all.shape[1]
    cols = np.arange(n)
    gamma_c = np.empty((len(alphas), n))
    gamma_s = np.empty((len(alphas), n))
    for i, alpha in enumerate(alphas):
        if alpha == 1.0:
            idx = np.argmax(gc_all, axis=0)
        elif alpha == 0.0:
            idx = np.argmax(gs_all, axis=0)
        else:
            idx = np.argmax(alpha * gc_all + (1.0 - alpha) * gs_all, axis=0)
        gamma_c[i] = gc_all[idx, cols]
        gamma_s[i] = gs_all[idx, cols]
    return gamma_c, gamma_s


def selected_comm_gains(F: np.ndarray, wc: np.ndarray) -> np.ndarray:
    """Communication-only fast path: max |h_c|^2 per trial (alpha = 1)."""
    h_c = F @ wc
    gc_all = h_c.real**2 + h_c.imag**2
    return np.max(gc_all, axis=0)
