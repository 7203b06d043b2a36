# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled port-selection gain kernels.

Same contract as _gains_py; the matrix product goes through BLAS zgemm into a
trial-major buffer and the gain/argmax passes are fused per trial, avoiding
the L x n floating temporaries of the numpy path.
"""

import numpy as np

cimport numpy as cnp
from scipy.linalg.cython_blas cimport zgemm

BACKEND_NAME = "cython"


cdef void _gemm_root(
    double complex[:, ::1] F,
    double complex[:, ::1] W,
    double complex[:, ::1] out,
) noexcept nogil:
    # out is C-order (n, L), i.e. Fortran (L, n), receiving F @ W. The C-order
    # inputs are Fortran transposes, hence the 'T' flags.
    cdef int L = F.shape[0]
    cdef int r = F.shape[1]
    cdef int n = W.shape[1]
    cdef char ta = b'T'
    cdef char tb = b'T'
    cdef double complex one = 1.0
    cdef double complex zero = 0.0
    zgemm(&ta, &tb, &L, &n, &r, &one, &F[0, 0], &r, &W[0, 0], &n, &zero,
          &out[0, 0], &L)


cdef inline double _sqabs(double complex v) noexcept nogil:
    return v.real * v.real + v.imag * v.imag


def selected_gains(F, wc, ws, alphas):
    """Selected-port gain pairs for every selection weight; see _gains_py."""
    cdef bint shared = ws is wc
    cdef double complex[:, ::1] Fv = np.ascontiguousarray(F, dtype=np.complex128)
    cdef double complex[:, ::1] wcv = np.ascontiguousarray(wc, dtype=np.complex128)
    cdef double complex[:, ::1] wsv = wcv if shared else np.ascontiguousarray(ws, dtype=np.complex128)
    cdef double[::1] av = np.ascontiguousarray(alphas, dtype=np.float64)

    cdef Py_ssize_t L = Fv.shape[0]
    cdef Py_ssize_t n = wcv.shape[1]
    cdef Py_ssize_t A = av.shape[0]

    hc_arr = np.empty((n, L), dtype=np.complex128)
    hs_arr = hc_arr if shared else np.empty((n, L), dtype=np.complex128)
    cdef double complex[:, ::1] Hc = hc_arr
    cdef double complex[:, ::1] Hs = hs_arr

    out_c_arr = np.empty((A, n), dtype=np.float64)
    out_s_arr = np.empty((A, n), dtype=np.float64)
    cdef double[:, ::1] out_c = out_c_arr
    cdef double[:, ::1] out_s = out_s_arr

    gc_arr = np.empty(L, dtype=np.float64)
    gs_arr = np.empty(L, dtype=np.float64)
    cdef double[::1] gc = gc_arr
    cdef double[::1] gs = gs_arr

    cdef Py_ssize_t i, j, l, best
    cdef double a, u, ubest

    with nogil:
        _gemm_root(Fv, wcv, Hc)
        if not shared:
            _gemm_root(Fv, wsv, Hs)
        for j in range(n):
            for l in range(L):
                gc[l] = _sqabs(Hc[j, l])
            if shared:
                for l in range(L):
                    gs[l] = gc[l]
            else:
                for l in range(L):
                    gs[l] = _sqabs(Hs[j, l])
            for i in range(A):
                a = av[i]
                best = 0
                if a == 1.0:
                    ubest = gc[0]
                    for l in range(1, L):
                        if gc[l] > ubest:
                            ubest = gc[l]
                            best = l
                elif a == 0.0:
                    ubest = gs[0]
                    for l in range(1, L):
                        if gs[l] > ubest:
                            ubest = gs[l]
                            best = l
                else:
                    ubest = a * gc[0] + (1.0 - a) * gs[0]
                    for l in range(1, L):
                        u = a * gc[l] + (1.0 - a) * gs[l]
                        if u > ubest:
                            ubest = u
                            best = l
                out_c[i, j] = gc[best]
                out_s[i, j] = gs[best]
    return out_c_arr, out_s_arr


def selected_comm_gains(F, wc):
    """Communication-only fast path: max |h_c|^2 per trial."""
    cdef double complex[:, ::1] Fv = np.ascontiguousarray(F, dtype=np.complex128)
    cdef double complex[:, ::1] wcv = np.ascontiguousarray(wc, dtype=np.complex128)
    cdef Py_ssize_t L = Fv.shape[0]
    cdef Py_ssize_t n = wcv.shape[1]

    hc_arr = np.empty((n, L), dtype=np.complex128)
    cdef double complex[:, ::1] Hc = hc_arr
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr

    cdef Py_ssize_t j, l
    cdef double g, gbest

    with nogil:
        _gemm_root(Fv, wcv, Hc)
        for j in range(n):
            gbest = _sqabs(Hc[j, 0])
            for l in range(1, L):
                g = _sqabs(Hc[j, l])
                if g > gbest:
                    gbest = g
            out[j] = gbest
    return out_arr
