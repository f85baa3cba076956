"""Filter construction: bump windows, complex tight framelet banks, orthogonal
low-pass pairs for the dual tree, and tensor-product 2D banks.

Frequency-domain filters are stored as samples of their 2*pi-periodic symbol
on the grid ``xi_k = 2*pi*k/N`` in DFT order.  Time-domain filters are finite
tap lists with an integer offset.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

Role = Literal["lowpass", "highpass"]

# Significant digits used for JSON floats.
_JSON_DIGITS = 17


def freq_grid(n: int) -> np.ndarray:
    """Grid ``2*pi*k/n`` mapped into ``[-pi, pi)``."""
    k = np.arange(n)
    xi = 2.0 * np.pi * k / n
    return np.where(k >= n // 2, xi - 2.0 * np.pi, xi)


# --------------------------------------------------------------------------
# Bump windows
# --------------------------------------------------------------------------

def spline_blend(m: int, x):
    """Blend polynomial with ``P(x) + P(1 - x) = 1``.

    ``P_m(x) = (1 - x)^m * sum_{j<m} C(m+j-1, j) x^j``.  Arguments outside
    ``[0, 1]`` are clamped, so ``P_m`` is 1 to the left and 0 to the right.

    Parameters
    ----------
    m : int
        Order, at least 1.  Larger ``m`` gives smoother edges.
    x : float or ndarray
    """
    if int(m) != m or m < 1:
        raise ValueError(f"blend order must be a positive integer, got {m!r}")
    m = int(m)
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    s = np.zeros_like(x)
    for j in range(m - 1, -1, -1):
        s = s * x + math.comb(m + j - 1, j)
    out = (1.0 - x) ** m * s
    return out if out.ndim else float(out)


def _rise(xi, c, eps, m):
    # 0 left of c-eps, 1 right of c+eps, sin(pi/4) at c
    return np.sin(0.5 * np.pi * spline_blend(m, (c + eps - xi) / (2.0 * eps)))


def _fall(xi, c, eps, m):
    return np.sin(0.5 * np.pi * spline_blend(m, (xi - c + eps) / (2.0 * eps)))


def band_window(c_left, c_right, eps_left, eps_right, m, xi):
    """Smooth window on ``[c_left, c_right]`` with edge half-widths ``eps``.

    When the two edges do not overlap this is exactly :func:`bump`.  When they
    do, the squared window is ``R_left - R_right`` where ``R`` is the squared
    rising edge, so adjacent windows still telescope to a partition of unity.
    """
    xi = np.asarray(xi, dtype=float)
    r = _rise(xi, c_left, eps_left, m)
    f = _fall(xi, c_right, eps_right, m)
    both = (r < 1.0) & (f < 1.0)
    out = r * f
    if np.any(both):
        sq = np.maximum(r * r + f * f - 1.0, 0.0)
        out = np.where(both, np.sqrt(sq), out)
    return out if out.ndim else float(out)


def bump(c_left, c_right, eps_left, eps_right, m, xi):
    """Four-branch bump function on ``[c_left, c_right]``.

    Equals 1 on ``[c_left + eps_left, c_right - eps_right]``, vanishes outside
    ``(c_left - eps_left, c_right + eps_right)`` and has squared edges that
    sum to one with the complementary edge of a neighbouring window.

    Raises
    ------
    ValueError
        If ``c_left >= c_right``, an ``eps`` is not positive, or the edges
        overlap (``eps_left + eps_right > c_right - c_left``).
    """
    if not c_left < c_right:
        raise ValueError("bump needs c_left < c_right")
    if eps_left <= 0 or eps_right <= 0:
        raise ValueError("bump edge widths must be positive")
    if eps_left + eps_right > c_right - c_left + 1e-15:
        raise ValueError("bump edges overlap: eps_left + eps_right > c_right - c_left")
    return band_window(c_left, c_right, eps_left, eps_right, m, xi)


def _periodized(fn, xi):
    # every window used here has support shorter than 2*pi
    return fn(xi) + fn(xi + 2.0 * np.pi) + fn(xi - 2.0 * np.pi)


# --------------------------------------------------------------------------
# Filter types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TimeFilter:
    """Finitely supported filter ``u(offset + k) = coeffs[k]``."""

    offset: int
    coeffs: np.ndarray
    label: str = ""

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs))
        if c.size == 0 or not np.any(c != 0):
            raise ValueError("TimeFilter needs at least one nonzero coefficient")
        nz = np.flatnonzero(c)
        object.__setattr__(self, "coeffs", c[nz[0] : nz[-1] + 1].copy())
        object.__setattr__(self, "offset", int(self.offset) + int(nz[0]))

    @property
    def support(self) -> tuple[int, int]:
        return self.offset, self.offset + len(self.coeffs) - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self.coeffs))

    def symbol(self, xi) -> np.ndarray:
        """Evaluate ``sum_k u(k) exp(-i k xi)``."""
        xi = np.asarray(xi, dtype=float)
        return np.exp(-1j * np.multiply.outer(xi, self.indices)) @ self.coeffs

    def to_freq(self, n: int, role: Role = "lowpass", label: str | None = None) -> "FreqFilter":
        return FreqFilter(self.symbol(2.0 * np.pi * np.arange(n) / n), role,
                          self.label if label is None else label)

    def periodic(self, n: int) -> np.ndarray:
        """Periodize onto ``Z/nZ`` (index 0 at position 0)."""
        out = np.zeros(n, dtype=complex)
        np.add.at(out, self.indices % n, self.coeffs)
        return out

    def __eq__(self, other):
        return (isinstance(other, TimeFilter) and self.offset == other.offset
                and self.coeffs.shape == other.coeffs.shape
                and bool(np.all(self.coeffs == other.coeffs)))

    __hash__ = None


@dataclass(frozen=True)
class FreqFilter:
    """Symbol samples on the ``N``-point grid, in DFT order."""

    samples: np.ndarray
    role: Role = "lowpass"
    label: str = ""

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 1 or s.size % 2 or s.size == 0:
            raise ValueError("FreqFilter needs a 1D grid of even length")
        if not np.all(np.isfinite(s)):
            raise ValueError("FreqFilter samples must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def grid_size(self) -> int:
        return self.samples.size

    def dilate(self, k: int) -> np.ndarray:
        """Samples of ``f(2^k xi)`` on the same grid."""
        n = self.grid_size
        return self.samples[(np.arange(n) * (1 << k)) % n]

    def resample(self, n: int) -> np.ndarray:
        """Samples on a coarser grid ``n`` dividing the native one."""
        step, rem = divmod(self.grid_size, n)
        if rem:
            raise ValueError(f"grid {n} does not divide {self.grid_size}")
        return self.samples[::step]

    def is_real_in_time(self, tol: float = 1e-12) -> bool:
        s = self.samples
        return bool(np.max(np.abs(np.conj(s) - np.roll(s[::-1], 1))) <= tol)

    def time(self) -> np.ndarray:
        """Periodized time-domain taps (inverse DFT of the samples)."""
        return np.fft.ifft(self.samples)


def adjoint(f):
    """``f*(k) = conj(f(-k))``; on samples this is complex conjugation."""
    if isinstance(f, TimeFilter):
        return TimeFilter(-f.support[1], np.conj(f.coeffs[::-1]), f.label)
    return replace(f, samples=np.conj(f.samples))


def shift(f, k: int):
    """``f(. - k)``."""
    if isinstance(f, TimeFilter):
        return TimeFilter(f.offset + k, f.coeffs, f.label)
    n = f.grid_size
    return replace(f, samples=f.samples * np.exp(-2j * np.pi * k * np.arange(n) / n))


def conj_mirror(f, label: str | None = None):
    """Filter whose symbol is ``conj(f^(-xi))``, i.e. ``conj(f)`` in time."""
    if isinstance(f, TimeFilter):
        return TimeFilter(f.offset, np.conj(f.coeffs), f.label if label is None else label)
    s = np.conj(np.roll(f.samples[::-1], 1))
    return FreqFilter(s, f.role, f.label if label is None else label)


def highpass_from_lowpass(a, label: str | None = None):
    """High-pass partner ``b^(xi) = exp(-i xi) conj(a^(xi + pi))``."""
    if isinstance(a, TimeFilter):
        k = a.indices
        # b(1 - k) = (-1)^k conj(a(k))
        c = ((-1.0) ** (k % 2)) * np.conj(a.coeffs)
        return TimeFilter(1 - a.support[1], c[::-1], a.label if label is None else label)
    n = a.grid_size
    xi = 2.0 * np.pi * np.arange(n) / n
    s = np.exp(-1j * xi) * np.conj(np.roll(a.samples, -n // 2))
    return FreqFilter(s, "highpass", a.label if label is None else label)


# --------------------------------------------------------------------------
# Complex tight framelet banks
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CtfParams:
    """Breakpoints and edge widths of a complex tight framelet bank.

    ``c`` holds ``c_1 < ... < c_s < c_{s+1} = pi`` and ``eps`` holds the
    matching edge half-widths ``eps_1 ... eps_{s+1}``.  ``eps0`` is the width
    of the edge at the origin that splits the low-pass filter (even ``n``).
    """

    n: int
    c: tuple[float, ...]
    eps: tuple[float, ...]
    eps0: float | None = None
    m: int = 2

    @property
    def s(self) -> int:
        return (self.n - 1) // 2

    def check(self) -> list[str]:
        """Return descriptions of violated design constraints (may be empty)."""
        out = []
        c, e, s = self.c, self.eps, self.s
        lim = min(c[0], np.pi / 2 - c[0])
        if not 0 < e[0] <= lim + 1e-15:
            out.append(f"eps_1={e[0]:.6g} exceeds min(c_1, pi/2 - c_1)={lim:.6g}")
        for ell in range(s):
            span = c[ell + 1] - c[ell] + e[ell + 1] + e[ell]
            if span > np.pi + 1e-15:
                out.append(f"band {ell + 1}: (c_{ell + 2}-c_{ell + 1})+eps_{ell + 1}+eps_{ell + 2}"
                           f"={span:.6g} exceeds pi; support longer than pi")
            if e[ell] + e[ell + 1] > c[ell + 1] - c[ell] + 1e-15:
                out.append(f"band {ell + 1}: edges overlap (eps_{ell + 1}+eps_{ell + 2} > "
                           f"c_{ell + 2}-c_{ell + 1}); telescoped window used")
        if self.n % 2 == 0:
            if self.eps0 is None or not 0 < self.eps0 < c[0] - e[0]:
                out.append(f"eps_0={self.eps0} not in (0, c_1 - eps_1)")
        return out


def special_params(n: int, c1: float, eps1: float, eps0: float | None = None,
                   m: int = 2) -> CtfParams:
    """Equally spaced breakpoints ``c_l = c1 + (pi - c1)(l - 1)/s`` with
    every edge width equal to ``eps1`` (the edge at ``pi`` included)."""
    if n < 3:
        raise ValueError("n must be at least 3")
    s = (n - 1) // 2
    c = tuple(float(c1) + (np.pi - float(c1)) * ell / s for ell in range(s)) + (np.pi,)
    eps = (float(eps1),) * (s + 1)
    if n % 2 == 0 and eps0 is None:
        raise ValueError("even n needs eps0")
    return CtfParams(n, c, eps, None if eps0 is None else float(eps0), m)


# Published parameters.  The n=4 entry is corrected (see ``default_params``).
_PUBLISHED = {
    3: dict(c1=Fraction(33, 32), eps1=Fraction(69, 128)),
    4: dict(c1=Fraction(291, 128), eps1=Fraction(27, 64), eps0=Fraction(35, 128)),
    6: dict(c1=Fraction(119, 128), eps1=Fraction(81, 128), eps0=Fraction(35, 128)),
}


DEFAULT_M = 2


def default_params(n: int, m: int | None = None, as_printed: bool = False) -> CtfParams:
    """Reference parameters for ``n`` in {3, 4, 6}.

    For ``n = 4`` the printed ``c_1 = 291/128`` makes the symmetric low-pass
    window wider than ``pi``, so ``a (x) a`` breaks the shift condition of a
    tight frame.  ``c_1 = 291/256`` satisfies every design constraint and is
    used unless ``as_printed`` is set.

    The blend order defaults to ``m = 2`` (C^1 symbols).  For ``n = 3`` it
    defaults to ``m = 4``, the smallest order at which those values, whose
    high-pass support slightly exceeds ``pi``, still meet a 1e-8 tight-frame
    tolerance.
    """
    if m is None:
        m = 4 if n == 3 else DEFAULT_M
    if n not in _PUBLISHED:
        raise ValueError("reference parameters exist for n in {3, 4, 6}; "
                         "use special_params for other n")
    p = dict(_PUBLISHED[n])
    if n == 4 and not as_printed:
        p["c1"] = Fraction(291, 256)
    return special_params(n, float(p["c1"]), float(p["eps1"]),
                          None if "eps0" not in p else float(p["eps0"]), m)


@dataclass(frozen=True)
class FilterBank1D:
    """One-dimensional bank ``{lowpass; highpass}``.

    For complex tight framelet banks ``lowpass[0]`` is the real symmetric
    filter ``a`` and, for even ``n``, ``lowpass[1:]`` is the split pair
    ``a^p, a^n``.  ``highpass`` is ordered ``b^{1,p}..b^{s,p}, b^{1,n}..b^{s,n}``.
    """

    n: int
    lowpass: tuple[FreqFilter, ...]
    highpass: tuple[FreqFilter, ...]
    params: CtfParams | None = None
    name: str = ""
    warnings: tuple[str, ...] = ()

    @property
    def grid_size(self) -> int:
        return self.lowpass[0].grid_size

    @property
    def a(self) -> FreqFilter:
        return self.lowpass[0]

    @property
    def split(self) -> tuple[FreqFilter, ...]:
        return self.lowpass[1:]

    @property
    def ndim(self) -> int:
        return 1

    def analysis_filters(self) -> tuple[FreqFilter, ...]:
        """Filters of the 1D transform: ``a`` followed by the high-pass set."""
        return (self.a,) + self.highpass


def build_ctf(params: CtfParams, grid_size: int) -> FilterBank1D:
    """Sample a complex tight framelet bank on an ``N``-point grid.

    Constraint violations do not raise; they are recorded in
    ``bank.warnings``.  Each band window is evaluated 2*pi-periodically.
    """
    n_grid = int(grid_size)
    if n_grid % 2 or n_grid < 8:
        raise ValueError("grid size must be even and at least 8")
    c, e, s, m = params.c, params.eps, params.s, params.m
    if len(c) != s + 1 or len(e) != s + 1 or abs(c[-1] - np.pi) > 1e-12:
        raise ValueError("params need s+1 breakpoints ending at pi and s+1 edge widths")
    widths = list(e) + ([params.eps0] if params.eps0 is not None else [])
    if min(widths) * n_grid / (2.0 * np.pi) < 2.0:
        raise ValueError(f"grid of {n_grid} points cannot resolve edge width {min(widths):.4g}")

    xi = freq_grid(n_grid)

    def sample(cl, cr, el, er, mirror=False, label="", role="highpass"):
        sgn = -1.0 if mirror else 1.0
        vals = _periodized(lambda x: band_window(cl, cr, el, er, m, sgn * x), xi)
        return FreqFilter(vals.astype(complex), role, label)

    a = sample(-c[0], c[0], e[0], e[0], label="a", role="lowpass")
    bp = [sample(c[ell], c[ell + 1], e[ell], e[ell + 1], label=f"b{ell + 1}p") for ell in range(s)]
    bn = [conj_mirror(f, label=f"b{ell + 1}n") for ell, f in enumerate(bp)]
    low = (a,)
    if params.n % 2 == 0:
        ap = sample(0.0, c[0], params.eps0, e[0], label="ap", role="lowpass")
        low = (a, ap, conj_mirror(ap, label="an"))
    return FilterBank1D(params.n, low, tuple(bp + bn), params, f"CTF{params.n}",
                        tuple(params.check()))


def ctf_bank(n: int, grid_size: int, **kw) -> FilterBank1D:
    """Shorthand for ``build_ctf(default_params(n, **kw), grid_size)``."""
    return build_ctf(default_params(n, **kw), grid_size)


def orthogonal_bank(a: FreqFilter, b: FreqFilter, name: str = "") -> FilterBank1D:
    """Two-filter bank ``{a; b}`` treated as a tight framelet bank."""
    return FilterBank1D(2, (replace(a, role="lowpass"),), (replace(b, role="highpass"),),
                        None, name)


def haar_filters() -> tuple[TimeFilter, TimeFilter]:
    """Haar pair ``a = {1/2, 1/2}``, ``b = {1/2, -1/2}`` on ``[0, 1]``."""
    return (TimeFilter(0, np.array([0.5, 0.5]), "haar_a"),
            TimeFilter(0, np.array([0.5, -0.5]), "haar_b"))


def haar_bank(grid_size: int) -> FilterBank1D:
    a, b = haar_filters()
    return orthogonal_bank(a.to_freq(grid_size, "lowpass", "a"),
                           b.to_freq(grid_size, "highpass", "b"), "Haar")


# --------------------------------------------------------------------------
# Orthogonal low-pass filters for the dual tree
# --------------------------------------------------------------------------

def build_meyer_orthogonal(eps: float, m: int, grid_size: int):
    """Frequency-based orthogonal low-pass filters ``a0 = a1`` and ``a2``.

    ``a0^ = a1^ = bump(-pi/2, pi/2, eps, eps)`` and
    ``a2^(xi) = exp(-i xi / 2) a1^(xi)`` on ``[-pi, pi)``, so the pair meets
    the half-shift condition exactly.
    """
    if not 0 < eps <= np.pi / 2:
        raise ValueError("eps must lie in (0, pi/2]")
    xi = freq_grid(grid_size)
    vals = _periodized(lambda x: band_window(-np.pi / 2, np.pi / 2, eps, eps, m, x), xi)
    a0 = FreqFilter(vals.astype(complex), "lowpass", "a0")
    a1 = replace(a0, label="a1")
    a2 = FreqFilter(np.exp(-0.5j * xi) * vals, "lowpass", "a2")
    return a0, a1, a2


_SQ15 = math.sqrt(15.0)
_KINGSBURY_A0 = np.array([-1, 1, 4 + _SQ15, 4 + _SQ15, 1, -1, 4 - _SQ15, 4 - _SQ15]) / 16.0
_KINGSBURY_A1 = np.array([0.03516384, 0.0, -0.08832942, 0.23389032, 0.76027237,
                          0.5875183, 0.0, -0.11430184]) / math.sqrt(2.0)


def kingsbury_filters():
    """Finitely supported dual-tree filters ``(a0, b0, a1, b1, a2, b2)``.

    ``a0`` lives on ``[-3, 4]`` and ``a1`` on ``[-4, 3]``; ``a2`` is the
    shifted time reversal ``a2(k) = a1(1 - k)``.  Each ``b`` follows from its
    low-pass filter by the high-pass rule.
    """
    a0 = TimeFilter(-3, _KINGSBURY_A0, "a0")
    a1 = TimeFilter(-4, _KINGSBURY_A1, "a1")
    a2 = TimeFilter(-2, _KINGSBURY_A1[::-1], "a2")
    return (a0, highpass_from_lowpass(a0, "b0"), a1, highpass_from_lowpass(a1, "b1"),
            a2, highpass_from_lowpass(a2, "b2"))


# --------------------------------------------------------------------------
# Tensor-product banks
# --------------------------------------------------------------------------

def centroid(f: FreqFilter) -> float:
    """Energy centroid of ``|f^|^2`` over ``[-pi, pi)``."""
    w = np.abs(f.samples) ** 2
    xi = freq_grid(f.grid_size)
    xi[f.grid_size // 2] = 0.0  # -pi and pi are the same point
    return float(np.sum(xi * w) / np.sum(w))


def direction_of(c_row: float, c_col: float, tol: float = 1e-3) -> float | None:
    """Orientation in degrees, folded to (-90, 90], of a frequency centroid.

    The angle is measured from the column-frequency axis toward the row
    axis.  ``None`` means the centroid sits at the origin.
    """
    if math.hypot(c_row, c_col) < tol:
        return None
    ang = math.degrees(math.atan2(c_row, c_col))
    if ang <= -90.0:
        ang += 180.0
    elif ang > 90.0:
        ang -= 180.0
    return round(ang, 6) + 0.0


@dataclass(frozen=True)
class TensorFilter:
    """Separable 2D filter ``rows (x) cols`` acting on axis 0 then axis 1."""

    rows: FreqFilter
    cols: FreqFilter
    label: str = ""
    direction: float | None = None

    @property
    def role(self) -> Role:
        return "lowpass" if self.rows.role == self.cols.role == "lowpass" else "highpass"

    @property
    def samples(self) -> np.ndarray:
        return np.multiply.outer(self.rows.samples, self.cols.samples)

    @property
    def grid_size(self) -> int:
        return self.rows.grid_size


@dataclass(frozen=True)
class FilterBank2D:
    """Tensor-product bank with the single low-pass filter ``a (x) a``."""

    n: int
    lowpass: TensorFilter
    highpass: tuple[TensorFilter, ...]
    name: str = ""
    warnings: tuple[str, ...] = ()
    base: FilterBank1D | None = field(default=None, repr=False)

    @property
    def grid_size(self) -> int:
        return self.lowpass.grid_size

    @property
    def ndim(self) -> int:
        return 2

    def analysis_filters(self) -> tuple[TensorFilter, ...]:
        return (self.lowpass,) + self.highpass


def tensor_bank_2d(bank: FilterBank1D) -> FilterBank2D:
    """Tensor-product 2D bank.

    Odd ``n`` (and two-filter banks): every product of ``{a; b's}`` except
    ``a (x) a``.  Even ``n``: every product of ``{a^p, a^n; b's}`` except the
    four products of split low-pass filters, which together with ``a (x) a``
    keeps the bank tight.  That is ``4s(s+2)`` high-pass filters.
    """
    if bank.n % 2 == 0 and bank.split:
        lows = bank.split
    else:
        lows = (bank.a,)
    factors = lows + bank.highpass
    cent = {id(f): centroid(f) for f in factors}
    hp = []
    for r in factors:
        for c in factors:
            if r.role == "lowpass" and c.role == "lowpass":
                continue
            hp.append(TensorFilter(r, c, f"{r.label}x{c.label}",
                                   direction_of(cent[id(r)], cent[id(c)])))
    low = TensorFilter(bank.a, bank.a, f"{bank.a.label}x{bank.a.label}", None)
    return FilterBank2D(bank.n, low, tuple(hp), f"TP-{bank.name}" if bank.name else "",
                        bank.warnings, bank)


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------

def _num(x: float) -> float:
    return float(f"{x:.{_JSON_DIGITS}g}")


def _filter_json(f: FreqFilter, direction=None) -> dict:
    return {
        "label": f.label,
        "role": f.role,
        "direction_deg": "none" if direction is None else direction,
        "freq_re": [_num(v) for v in f.samples.real],
        "freq_im": [_num(v) for v in f.samples.imag],
    }


def bank_to_json(bank: FilterBank1D) -> str:
    """Serialize a 1D bank.  Floats keep 17 significant digits."""
    doc = {
        "name": bank.name,
        "n": bank.n,
        "grid_size": bank.grid_size,
        "warnings": list(bank.warnings),
        "filters": [_filter_json(f) for f in bank.lowpass + bank.highpass],
    }
    if bank.params is not None:
        p = bank.params
        doc["params"] = {"c": list(p.c), "eps": list(p.eps), "eps0": p.eps0, "m": p.m}
    return json.dumps(doc, indent=1)


def bank_from_json(text: str) -> FilterBank1D:
    doc = json.loads(text)
    try:
        filters = [FreqFilter(np.asarray(f["freq_re"]) + 1j * np.asarray(f["freq_im"]),
                              f["role"], f["label"]) for f in doc["filters"]]
        n = int(doc["n"])
        grid = int(doc["grid_size"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed bank document: {exc}") from None
    if any(f.grid_size != grid for f in filters):
        raise ValueError("filter grid sizes disagree with grid_size")
    low = tuple(f for f in filters if f.role == "lowpass")
    high = tuple(f for f in filters if f.role == "highpass")
    if not low:
        raise ValueError("bank has no low-pass filter")
    params = None
    if doc.get("params"):
        p = doc["params"]
        params = CtfParams(n, tuple(p["c"]), tuple(p["eps"]), p.get("eps0"), int(p["m"]))
    return FilterBank1D(n, low, high, params, doc.get("name", ""), tuple(doc.get("warnings", [])))


def parse_number(text: str) -> float:
    """Parse a decimal or an exact rational such as ``"33/32"``."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a number: {text!r}") from None


def bank_summary(bank: FilterBank1D | FilterBank2D) -> list[tuple[str, str, float | None]]:
    """``(label, role, direction)`` triples."""
    if isinstance(bank, FilterBank2D):
        return [(f.label, f.role, f.direction) for f in bank.analysis_filters()]
    return [(f.label, f.role, None) for f in bank.lowpass + bank.highpass]


__all__ = [
    "CtfParams", "FilterBank1D", "FilterBank2D", "FreqFilter", "TensorFilter", "TimeFilter",
    "adjoint", "band_window", "bank_from_json", "bank_summary", "bank_to_json", "build_ctf",
    "build_meyer_orthogonal", "centroid", "conj_mirror", "ctf_bank", "default_params",
    "direction_of", "freq_grid", "haar_bank", "haar_filters", "highpass_from_lowpass",
    "kingsbury_filters", "orthogonal_bank", "parse_number", "shift", "special_params",
    "spline_blend", "tensor_bank_2d", "bump",
]

