"""Frame-theoretic checks and filter diagnostics.

Covers the two tight-frame identities, orthogonality of two-filter banks,
sum rules, vanishing moments, the smoothness exponent, frequency-separation
measures of the dual tree, and a few closed-form identities used there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .filters import (FilterBank1D, FilterBank2D, FreqFilter, TimeFilter, freq_grid,
                      highpass_from_lowpass, shift)


@dataclass(frozen=True)
class FrameReport:
    """Residuals of the tight-frame identities on a sampling grid.

    ``max_residual_pr1`` is ``max |sum |f^|^2 - 1|`` and ``max_residual_pr0``
    is the worst ``|sum f^(xi) conj f^(xi + pi*w)|`` over nonzero ``w``.
    """

    max_residual_pr1: float
    max_residual_pr0: float
    grid_size: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_residual_pr1 <= self.tol and self.max_residual_pr0 <= self.tol

    def as_dict(self) -> dict:
        return {"max_residual_pr1": self.max_residual_pr1,
                "max_residual_pr0": self.max_residual_pr0,
                "grid_size": self.grid_size, "tol": self.tol, "pass": self.passed}


def _frame_residuals(stack: np.ndarray) -> tuple[float, float]:
    # stack: (filters, N) or (filters, N, N)
    d = stack.ndim - 1
    r1 = float(np.max(np.abs(np.sum(np.abs(stack) ** 2, axis=0) - 1.0)))
    r0 = 0.0
    half = stack.shape[1] // 2
    for w in range(1, 2 ** d):
        shifts = [half * ((w >> (d - 1 - ax)) & 1) for ax in range(d)]
        moved = np.roll(stack, [-s for s in shifts], axis=tuple(range(1, d + 1)))
        r0 = max(r0, float(np.max(np.abs(np.sum(stack * np.conj(moved), axis=0)))))
    return r1, r0


def _filter_sets(bank) -> list[np.ndarray]:
    if isinstance(bank, FilterBank2D):
        return [np.array([f.samples for f in bank.analysis_filters()])]
    if isinstance(bank, FilterBank1D):
        sets = [np.array([f.samples for f in bank.analysis_filters()])]
        if bank.split:
            sets.append(np.array([f.samples for f in bank.split + bank.highpass]))
        return sets
    arrs = [f.samples if hasattr(f, "samples") else np.asarray(f) for f in bank]
    if len({a.shape for a in arrs}) != 1:
        raise ValueError("filters live on different grids")
    return [np.array(arrs)]


def check_tight_frame(bank, tol: float = 1e-8) -> FrameReport:
    """Evaluate the tight-frame identities at every grid point.

    Accepts a :class:`FilterBank1D`, a :class:`FilterBank2D` or a sequence of
    filters on one grid.  For even-``n`` 1D banks both ``{a; b's}`` and the
    split bank ``{a^p, a^n; b's}`` are checked and the worse residual is kept.
    """
    sets = _filter_sets(bank)
    r1 = r0 = 0.0
    for s in sets:
        x1, x0 = _frame_residuals(s)
        r1, r0 = max(r1, x1), max(r0, x0)
    return FrameReport(r1, r0, sets[0].shape[1], tol)


def check_orthogonal_wavelet(a: FreqFilter, b: FreqFilter, tol: float = 1e-8) -> bool:
    """True when ``[[a, b], [a(.+pi), b(.+pi)]]`` is unitary at every grid point."""
    if a.grid_size != b.grid_size:
        raise ValueError("filters live on different grids")
    h = a.grid_size // 2
    A, B = a.samples, b.samples
    Ap, Bp = np.roll(A, -h), np.roll(B, -h)
    e11 = np.abs(A) ** 2 + np.abs(B) ** 2 - 1.0
    e22 = np.abs(Ap) ** 2 + np.abs(Bp) ** 2 - 1.0
    e12 = A * np.conj(Ap) + B * np.conj(Bp)
    return bool(max(np.max(np.abs(e11)), np.max(np.abs(e22)), np.max(np.abs(e12))) <= tol)


def _moment_order(f: TimeFilter, sign: bool, tol: float) -> int:
    k = np.arange(len(f.coeffs), dtype=float)
    c = f.coeffs * ((-1.0) ** (f.indices % 2) if sign else 1.0)
    scale = tol * float(np.sum(np.abs(f.coeffs)))
    order = 0
    while order < len(k):
        if abs(np.sum(k ** order * c)) > scale:
            break
        order += 1
    return order


def sum_rules(a: TimeFilter, tol: float = 1e-8) -> int:
    """Order of the zero of ``a^`` at ``pi``.

    Counts the leading moments ``sum_k (-1)^k k^j a(k)`` that vanish within
    ``tol`` times the filter's l1 norm.
    """
    return _moment_order(a, True, tol)


def vanishing_moments(b: TimeFilter, tol: float = 1e-8) -> int:
    """Order of the zero of ``b^`` at the origin (moments ``sum_k k^j b(k)``)."""
    return _moment_order(b, False, tol)


def _divide_one_plus_z(c: np.ndarray, times: int) -> np.ndarray:
    # exact synthetic division by (1 + z), coefficients in ascending powers
    u = np.asarray(c, dtype=complex)
    for _ in range(times):
        q = np.empty(len(u) - 1, dtype=complex)
        r = u.copy()
        for i in range(len(u) - 1):
            q[i] = r[i]
            r[i + 1] -= r[i]
        u = q
    return u


def smoothness_exponent(a: TimeFilter, tol: float = 1e-8) -> float:
    """``sm(a) = -1/2 - log2(sqrt(rho))`` from the transfer matrix ``(v(2j-k))``.

    ``a^(xi) = (1 + e^{-i xi})^m u^(xi)`` with ``m`` the sum rule order, and
    ``v`` holds the coefficients of ``|u^|^2`` on ``[-K, K]``.
    """
    m = sum_rules(a, tol)
    if m == 0:
        raise ValueError("filter has no sum rule; smoothness exponent undefined")
    u = _divide_one_plus_z(a.coeffs, m)
    v = np.convolve(u, np.conj(u[::-1]))
    K = len(u) - 1
    idx = np.arange(-K, K + 1)
    lag = 2 * idx[:, None] - idx[None, :]
    T = np.where(np.abs(lag) <= K, v[np.clip(lag + K, 0, 2 * K)], 0.0)
    rho = float(np.max(np.abs(np.linalg.eigvals(T))))
    return -0.5 - math.log2(math.sqrt(rho))


# --------------------------------------------------------------------------
# Frequency separation
# --------------------------------------------------------------------------

def _sgn(x):
    return np.where(np.asarray(x) >= 0, 1.0, -1.0)


FactorKind = Literal["sin", "ideal", "half_sin", "half_cos_sgn"]
FACTOR_KINDS: tuple[str, ...] = ("sin", "ideal", "half_sin", "half_cos_sgn")


def separation_factor(kind: FactorKind, xi):
    """Frequency separation factors on ``[-pi, pi)``.

    ``sin``: sqrt(1 + sin xi); ``ideal``: (1 + sgn xi)/sqrt(2);
    ``half_sin``: sqrt(1 + sin(xi/2)); ``half_cos_sgn``:
    sqrt(1 + cos(xi/2) sgn xi).  ``sgn(0) = 1``.
    """
    xi = np.asarray(xi, dtype=float)
    if kind == "sin":
        out = np.sqrt(np.maximum(1.0 + np.sin(xi), 0.0))
    elif kind == "ideal":
        out = (1.0 + _sgn(xi)) / math.sqrt(2.0)
    elif kind == "half_sin":
        out = np.sqrt(np.maximum(1.0 + np.sin(xi / 2), 0.0))
    elif kind == "half_cos_sgn":
        out = np.sqrt(np.maximum(1.0 + np.cos(xi / 2) * _sgn(xi), 0.0))
    else:
        raise ValueError(f"unknown separation factor {kind!r}")
    return out if out.ndim else float(out)


def factor_curves(points: int = 4096) -> dict[str, np.ndarray]:
    """Samples of every separation factor on ``points`` equispaced values of
    ``[-pi, pi]`` (endpoint included), keyed by kind plus ``"xi"``."""
    xi = np.linspace(-np.pi, np.pi, points)
    out = {"xi": xi}
    for kind in FACTOR_KINDS:
        out[kind] = separation_factor(kind, xi)
    return out


def factor_energy(kind: FactorKind, points: int = 4096) -> float:
    """Trapezoidal ``integral_{-pi}^{pi} factor(xi)^2 dxi``."""
    xi = np.linspace(-np.pi, np.pi, points)
    return float(np.trapezoid(separation_factor(kind, xi) ** 2, xi))


@dataclass(frozen=True)
class SeparationReport:
    """Frequency separation of the first-level complex high-pass pair.

    ``pointwise_dev`` is the largest deviation of
    ``|b^p(xi + pi)|^2 + |b^n(xi)|^2`` from ``1 - sin(xi)``; ``integral`` is
    that quantity integrated over ``[0, pi]``.
    """

    pointwise_dev: float
    integral: float
    factor_curves: dict

    def as_dict(self) -> dict:
        return {"pointwise_dev": self.pointwise_dev, "integral": self.integral}


def first_level_pair(a0: FreqFilter) -> tuple[FreqFilter, FreqFilter]:
    """``b^p = (b0 + i b0(.-1))/sqrt 2`` and ``b^n = (b0 - i b0(.-1))/sqrt 2``."""
    b0 = highpass_from_lowpass(a0)
    b0s = shift(b0, 1)
    r2 = math.sqrt(2.0)
    return (FreqFilter((b0.samples + 1j * b0s.samples) / r2, "highpass", "bp1"),
            FreqFilter((b0.samples - 1j * b0s.samples) / r2, "highpass", "bn1"))


def separation_level1(a0: FreqFilter, tol: float = 1e-8) -> SeparationReport:
    """Measure how well the first-level complex pair separates frequencies.

    Raises
    ------
    ValueError
        If ``a0`` is not orthogonal within ``tol``.
    """
    n = a0.grid_size
    A = a0.samples
    if np.max(np.abs(np.abs(A) ** 2 + np.abs(np.roll(A, -n // 2)) ** 2 - 1.0)) > tol:
        raise ValueError("initial low-pass filter is not orthogonal")
    bp, bn = first_level_pair(a0)
    xi = freq_grid(n)
    q = np.abs(np.roll(bp.samples, -n // 2)) ** 2 + np.abs(bn.samples) ** 2
    dev = float(np.max(np.abs(q - (1.0 - np.sin(xi)))))
    # [0, pi] is grid indices 0..n/2; q is 2*pi periodic so q at pi = q at -pi
    seg = np.append(q[: n // 2], q[n // 2])
    xs = 2.0 * np.pi * np.arange(n // 2 + 1) / n
    integral = float(np.trapezoid(seg, xs))
    return SeparationReport(dev, integral, factor_curves(n))


def half_shift_deviation(a1: FreqFilter, a2: FreqFilter) -> float:
    """``max |a2^(xi) - exp(i theta(xi)) a1^(xi)|`` with ``theta = -xi/2`` on ``[-pi, pi)``."""
    if a1.grid_size != a2.grid_size:
        raise ValueError("filters live on different grids")
    xi = freq_grid(a1.grid_size)
    theta = -xi / 2 + np.pi * np.floor((xi + np.pi) / (2 * np.pi))
    return float(np.max(np.abs(a2.samples - np.exp(1j * theta) * a1.samples)))


def theta_identity_check(xi, terms: int = 64):
    """Both sides of ``sum_{l>=1} floor(2^-l xi + 1/2) = floor(xi) + (1 - sgn xi)/2``.

    The left sum is truncated after ``terms`` terms, which is exact once
    ``2^-terms |xi| < 1/2``.  Works elementwise on arrays.
    """
    x = np.asarray(xi, dtype=float)
    if np.any(np.abs(x) * 2.0 ** (-terms) >= 0.5):
        raise ValueError("too few terms for this xi")
    lhs = np.zeros_like(x)
    for ell in range(1, terms + 1):
        lhs = lhs + np.floor(np.ldexp(x, -ell) + 0.5)
    rhs = np.floor(x) + (1.0 - _sgn(x)) / 2.0
    if lhs.ndim == 0:
        return float(lhs), float(rhs)
    return lhs, rhs


def direction_count(n: int) -> int:
    """Number of distinct directions of the 2D tensor-product bank built from
    an ``n``-filter complex tight framelet bank."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if n % 2:
        return (n - 1) * (n - 3) // 2 + 4
    return (n - 4) * (n + 2) // 2 + 6


def distinct_directions(bank: FilterBank2D, digits: int = 3) -> list[float]:
    """Sorted distinct direction labels of a 2D bank's high-pass filters."""
    return sorted({round(f.direction, digits) for f in bank.highpass if f.direction is not None})


def positive_concentration(f: FreqFilter) -> float:
    """Share of ``|f^|^2`` on ``[0, pi)``; no threshold is attached."""
    w = np.abs(f.samples) ** 2
    return float(np.sum(w[: f.grid_size // 2]) / np.sum(w))


def bank_report(bank: FilterBank1D, tol: float = 1e-8) -> dict:
    """Everything ``analyze`` prints for a 1D bank."""
    from .filters import tensor_bank_2d

    rep = {"name": bank.name, "n": bank.n, "grid_size": bank.grid_size,
           "warnings": list(bank.warnings),
           "tight_frame_1d": check_tight_frame(bank, tol).as_dict()}
    if bank.highpass:
        bank2 = tensor_bank_2d(bank)
        rep["highpass_count_2d"] = len(bank2.highpass)
        rep["directions_2d"] = distinct_directions(bank2)
        if bank.n >= 3:
            rep["direction_count_formula"] = direction_count(bank.n)
        if bank.grid_size <= 512:
            rep["tight_frame_2d"] = check_tight_frame(bank2, max(tol, 1e-7)).as_dict()
    rep["positive_concentration"] = {f.label: positive_concentration(f) for f in bank.highpass}
    return rep


__all__ = [
    "FACTOR_KINDS", "FrameReport", "SeparationReport", "bank_report", "check_orthogonal_wavelet",
    "check_tight_frame", "direction_count", "distinct_directions", "factor_curves",
    "factor_energy", "first_level_pair", "half_shift_deviation", "positive_concentration",
    "separation_factor", "separation_level1", "smoothness_exponent", "sum_rules",
    "theta_identity_check", "vanishing_moments",
]
