# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bivariate shrinkage kernel (same arithmetic as ``_shrink_py``)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

cdef double SQRT3 = 1.7320508075688772


def shrink_subband(y, parent, double sigma_b, int window, double var_scale):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] yy = np.ascontiguousarray(y, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] pp = np.ascontiguousarray(parent, dtype=np.complex128)
    cdef Py_ssize_t H = yy.shape[0], W = yy.shape[1]
    if pp.shape[0] != H or pp.shape[1] != W:
        raise ValueError("parent shape does not match the subband")
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty((H, W), dtype=np.complex128)
    cdef double[:, ::1] e = np.empty((H, W))
    cdef double[:, ::1] h = np.empty((H, W))
    cdef Py_ssize_t i, j, k, r = window // 2
    cdef Py_ssize_t d
    cdef double s, re, im, ep, var, sig, R, t, f
    cdef double sb2 = sigma_b * sigma_b
    cdef double ww = <double>(window * window)
    with nogil:
        for i in range(H):
            for j in range(W):
                re = yy[i, j].real
                im = yy[i, j].imag
                e[i, j] = re * re + im * im
        for i in range(H):
            for j in range(W):
                s = 0.0
                for d in range(-r, r + 1):
                    k = (j + d) % W
                    if k < 0:
                        k = k + W
                    s = s + e[i, k]
                h[i, j] = s
        for i in range(H):
            for j in range(W):
                s = 0.0
                for d in range(-r, r + 1):
                    k = (i + d) % H
                    if k < 0:
                        k = k + H
                    s = s + h[k, j]
                var = s / ww * var_scale - sb2
                if var < 0.0:
                    var = 0.0
                sig = sqrt(var)
                re = pp[i, j].real
                im = pp[i, j].imag
                ep = re * re + im * im
                R = sqrt(e[i, j] + ep)
                if R > 0.0:
                    if sig > 0.0:
                        t = (SQRT3 * sb2) / sig
                        f = R - t
                        if f < 0.0:
                            f = 0.0
                        f = f / R
                    elif sb2 > 0.0:
                        f = 0.0
                    else:
                        f = 1.0
                else:
                    f = 0.0
                out[i, j].real = yy[i, j].real * f
                out[i, j].imag = yy[i, j].imag * f
    return out
