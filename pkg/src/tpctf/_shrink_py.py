"""Pure numpy bivariate shrinkage kernel.

The compiled kernel in ``_shrink.pyx`` performs the same floating-point
operations in the same order, so both backends return identical bits.
"""
from __future__ import annotations

import numpy as np

SQRT3 = 1.7320508075688772


def box_sum_wrap(e: np.ndarray, window: int) -> np.ndarray:
    """Sum over a ``window x window`` periodic neighbourhood (rows, then columns)."""
    r = window // 2
    h = np.zeros_like(e)
    for d in range(-r, r + 1):
        h += np.roll(e, -d, axis=1)
    s = np.zeros_like(e)
    for d in range(-r, r + 1):
        s += np.roll(h, -d, axis=0)
    return s


def shrink_subband(y: np.ndarray, parent: np.ndarray, sigma_b: float, window: int,
                   var_scale: float) -> np.ndarray:
    """Bivariate shrinkage of one complex subband against its parent.

    ``var_scale`` converts the local mean of ``|y|^2`` to the variance the
    noise level ``sigma_b`` refers to (1 for real data, 1/2 per component
    of complex data).
    """
    y = np.ascontiguousarray(y, dtype=np.complex128)
    parent = np.ascontiguousarray(parent, dtype=np.complex128)
    e = y.real * y.real + y.imag * y.imag
    ep = parent.real * parent.real + parent.imag * parent.imag
    sb2 = sigma_b * sigma_b
    var = np.maximum(box_sum_wrap(e, window) / float(window * window) * var_scale - sb2, 0.0)
    sig = np.sqrt(var)
    R = np.sqrt(e + ep)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (SQRT3 * sb2) / sig
        factor = np.maximum(R - t, 0.0) / R
    factor = np.where(sig > 0.0, factor, 0.0 if sb2 > 0.0 else 1.0)
    factor = np.where(R > 0.0, factor, 0.0)
    out = np.empty_like(y)
    out.real = y.real * factor
    out.imag = y.imag * factor
    return out
