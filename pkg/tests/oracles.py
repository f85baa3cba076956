"""Brute-force time-domain references for the frequency-domain operators."""
import itertools

import numpy as np


def periodic_taps(coeffs, offset, n):
    """Filter taps wrapped onto Z/nZ."""
    out = np.zeros(n, dtype=complex)
    for k, c in enumerate(coeffs):
        out[(offset + k) % n] += c
    return out


def transition_1d(v, a):
    """[T_a v](m) = 2 sum_k v(k) conj(a(k - 2m)), periodic."""
    n = len(v)
    return np.array([2 * sum(v[k] * np.conj(a[(k - 2 * m) % n]) for k in range(n))
                     for m in range(n // 2)])


def subdivision_1d(v, a):
    """[S_a v](m) = 2 sum_k v(k) a(m - 2k), periodic on 2 len(v) points."""
    n = 2 * len(v)
    return np.array([2 * sum(v[k] * a[(m - 2 * k) % n] for k in range(len(v)))
                     for m in range(n)])


def transition_2d(v, a):
    """[T_a v](m) = 4 sum_k v(k) conj(a(k - 2m)) with k, m in Z^2, periodic."""
    h, w = v.shape
    out = np.zeros((h // 2, w // 2), dtype=complex)
    for m0, m1 in itertools.product(range(h // 2), range(w // 2)):
        s = 0j
        for k0, k1 in itertools.product(range(h), range(w)):
            s += v[k0, k1] * np.conj(a[(k0 - 2 * m0) % h, (k1 - 2 * m1) % w])
        out[m0, m1] = 4 * s
    return out


def subdivision_2d(v, a):
    h, w = v.shape
    out = np.zeros((2 * h, 2 * w), dtype=complex)
    for m0, m1 in itertools.product(range(2 * h), range(2 * w)):
        s = 0j
        for k0, k1 in itertools.product(range(h), range(w)):
            s += v[k0, k1] * a[(m0 - 2 * k0) % (2 * h), (m1 - 2 * k1) % (2 * w)]
        out[m0, m1] = 4 * s
    return out
