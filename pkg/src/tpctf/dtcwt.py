"""Dual-tree complex wavelet transform on periodic 2D images.

Each tree is a separable orthonormal wavelet transform.  Tree one uses
``{a0; b0}`` at level 1 and ``{a1; b1}`` above; tree two uses the one-shifted
``{a0(.-1); b0(.-1)}`` and then ``{a2; b2}``.  Per axis the two trees are
paired into complex coefficients, so one level holds 12 complex subbands
(six orientations and their conjugate partners) and the coarsest level keeps
4 real low-pass subbands.

The hybrid variant replaces level 1 by one undecimated level of a 2D tight
framelet bank; the polyphase components of its low-pass output seed the four
tree combinations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .filters import (FilterBank2D, FreqFilter, TensorFilter, build_meyer_orthogonal,
                      highpass_from_lowpass, kingsbury_filters, shift)
from .transform import analysis_step, as_bank, load_entries, save_entries, synthesis_step

MEYER_EPS = 189 / 256
MEYER_M = 1

TREES = ((0, 0), (0, 1), (1, 0), (1, 1))
KINDS = (("a", "b"), ("b", "a"), ("b", "b"))  # (row kind, col kind) per subband type
_BASE_ANGLE = {("a", "b"): 15, ("b", "a"): 75, ("b", "b"): 45}
LOWPASS_LABELS = ("a1xa1", "a1xa2", "a2xa1", "a2xa2")


def pair_complex(x, y):
    """Average and difference of two real channels: ``((x + iy)/√2, (x - iy)/√2)``."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch {x.shape} vs {y.shape}")
    return (x + 1j * y) / math.sqrt(2.0), (x - 1j * y) / math.sqrt(2.0)


def unpair_complex(p, n):
    """Inverse of :func:`pair_complex`."""
    p = np.asarray(p)
    n = np.asarray(n)
    return (p + n) / math.sqrt(2.0), (p - n) / (1j * math.sqrt(2.0))


def orientation_label(row_kind: str, col_kind: str, row_sign: str, col_sign: str) -> str:
    """Label such as ``"+15"`` or its conjugate partner ``"+15*"``.

    The angle is measured from the column-frequency axis; ``p``/``n`` give
    the sign of the frequency half each factor concentrates on.
    """
    sign = "+" if row_sign == col_sign else "-"
    label = f"{sign}{_BASE_ANGLE[(row_kind, col_kind)]}"
    return label if col_sign == "p" else label + "*"


def _subband_layout():
    out = []
    for kinds in KINDS:
        for rs in "pn":
            for cs in "pn":
                out.append((kinds, rs, cs, orientation_label(*kinds, rs, cs)))
    return tuple(out)


SUBBANDS = _subband_layout()
HIGHPASS_LABELS = tuple(s[3] for s in SUBBANDS)


def label_angle(label: str) -> float:
    return float(label.rstrip("*"))


# --------------------------------------------------------------------------
# Filter sets
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DtFilterSet:
    """Source of the three orthogonal low-pass filters of a dual tree.

    ``source`` is ``"kingsbury"`` (finite taps) or ``"meyer"``
    (frequency-based, parametrized by ``eps`` and ``m``).
    """

    source: str = "kingsbury"
    eps: float | None = None
    m: int | None = None

    def __post_init__(self):
        if self.source not in ("kingsbury", "meyer"):
            raise ValueError(f"unknown dual-tree filter source {self.source!r}")
        if self.source == "meyer" and (self.eps is None or self.m is None):
            raise ValueError("meyer filters need eps and m")

    @classmethod
    def kingsbury(cls) -> "DtFilterSet":
        return cls("kingsbury")

    @classmethod
    def meyer(cls, eps: float = MEYER_EPS, m: int = MEYER_M) -> "DtFilterSet":
        return cls("meyer", float(eps), int(m))

    @property
    def name(self) -> str:
        if self.source == "kingsbury":
            return "dtcwt-kingsbury"
        return f"dtcwt-meyer(eps={self.eps:.17g},m={self.m})"

    def time_filters(self):
        """``(a0, b0, a1, b1, a2, b2)`` as finite filters (Kingsbury only)."""
        if self.source != "kingsbury":
            raise ValueError("frequency-based filters have no finite taps")
        return kingsbury_filters()

    def at(self, grid: int) -> "GridFilters":
        return _grid_filters(self, int(grid))


def _dual_pair(a: FreqFilter, b: FreqFilter) -> tuple[FreqFilter, FreqFilter]:
    """Synthesis pair giving perfect reconstruction for the analysis pair ``(a, b)``.

    Solves ``Ga conj(A) + Gb conj(B) = 1`` and
    ``Ga conj(A(.+pi)) + Gb conj(B(.+pi)) = 0`` pointwise.  For an exactly
    orthogonal pair this returns ``(a, b)`` up to rounding.
    """
    A, B = a.samples, b.samples
    h = A.shape[0] // 2
    cA, cB = np.conj(A), np.conj(B)
    cAp, cBp = np.roll(cA, -h), np.roll(cB, -h)
    det = cA * cBp - cB * cAp
    return (FreqFilter(cBp / det, "lowpass", a.label + "~"),
            FreqFilter(-cAp / det, "highpass", b.label + "~"))


@dataclass(frozen=True)
class GridFilters:
    """Dual-tree filters sampled on one DFT grid, with synthesis duals."""

    level1: tuple[tuple[FreqFilter, FreqFilter], tuple[FreqFilter, FreqFilter]]
    upper: tuple[tuple[FreqFilter, FreqFilter], tuple[FreqFilter, FreqFilter]]
    level1_dual: tuple
    upper_dual: tuple

    @property
    def grid_size(self) -> int:
        return self.level1[0][0].grid_size

    def analysis(self, level: int, tree: int):
        return (self.level1 if level == 1 else self.upper)[tree]

    def synthesis(self, level: int, tree: int):
        return (self.level1_dual if level == 1 else self.upper_dual)[tree]


@lru_cache(maxsize=16)
def _grid_filters(fs: DtFilterSet, grid: int) -> GridFilters:
    if grid % 2:
        raise ValueError("grid size must be even")
    if fs.source == "kingsbury":
        a0, b0, a1, b1, a2, b2 = (f.to_freq(grid, "lowpass" if i % 2 == 0 else "highpass")
                                  for i, f in enumerate(kingsbury_filters()))
    else:
        a0, a1, a2 = build_meyer_orthogonal(fs.eps, fs.m, grid)
        b0, b1, b2 = (highpass_from_lowpass(a, "b" + a.label[1:]) for a in (a0, a1, a2))
    level1 = ((a0, b0), (shift(a0, 1), shift(b0, 1)))
    upper = ((a1, b1), (a2, b2))
    return GridFilters(level1, upper,
                       tuple(_dual_pair(*p) for p in level1),
                       tuple(_dual_pair(*p) for p in upper))


def _tensor_step_filters(rows, cols):
    """``[lo x lo, lo x hi, hi x lo, hi x hi]`` for one tree combination."""
    (ra, rb), (ca, cb) = rows, cols
    return [TensorFilter(ra, ca), TensorFilter(ra, cb), TensorFilter(rb, ca), TensorFilter(rb, cb)]


# --------------------------------------------------------------------------
# Coefficient container
# --------------------------------------------------------------------------

@dataclass
class DtCoeffs:
    """Dual-tree coefficients.

    ``lowpass`` holds the four real level-``J`` arrays keyed ``"a1xa2"`` and
    so on (row tree x column tree).  ``highpass[j - 1]`` maps orientation
    labels to complex level-``j`` arrays; in hybrid mode level 1 instead holds
    one undecimated array per framelet high-pass filter.
    """

    lowpass: dict[str, np.ndarray]
    highpass: list[dict[str, np.ndarray]]
    filters: str = ""
    first_level: str = "standard"
    directions: list[dict[str, float]] = field(default_factory=list)

    @property
    def levels(self) -> int:
        return len(self.highpass)

    def entries(self):
        for j, bands in enumerate(self.highpass, start=1):
            for label, arr in bands.items():
                yield j, label, "highpass", arr
        for label, arr in self.lowpass.items():
            yield self.levels, label, "lowpass", arr

    def energy(self) -> float:
        return float(sum(np.vdot(a, a).real for *_, a in self.entries()))

    def copy(self) -> "DtCoeffs":
        return DtCoeffs({k: v.copy() for k, v in self.lowpass.items()},
                        [{k: v.copy() for k, v in b.items()} for b in self.highpass],
                        self.filters, self.first_level, [dict(d) for d in self.directions])


def save_dtcoeffs(c: DtCoeffs, out_dir) -> str:
    meta = {"format": "framelet-pyramid", "bank": c.filters, "ndim": 2, "levels": c.levels,
            "tree_variant": c.first_level}
    return save_entries(c.entries(), out_dir, meta)


def load_dtcoeffs(in_dir) -> DtCoeffs:
    """Read coefficients written by :func:`save_dtcoeffs`."""
    doc, entries = load_entries(in_dir)
    if "tree_variant" not in doc:
        raise ValueError("manifest has no tree_variant field")
    J = int(doc["levels"])
    highpass = [dict() for _ in range(J)]
    lowpass = {}
    for level, label, kind, arr in entries:
        if kind == "lowpass":
            lowpass[label] = arr.real.copy()
        else:
            highpass[level - 1][label] = arr
    directions = [{lab: label_angle(lab) for lab in HIGHPASS_LABELS} for _ in range(J)]
    return DtCoeffs(lowpass, highpass, doc.get("bank", ""), doc["tree_variant"], directions)


# --------------------------------------------------------------------------
# Complex pairing of the four tree combinations
# --------------------------------------------------------------------------

_LAMBDA = {"p": np.array([1.0, 1j]), "n": np.array([1.0, -1j])}


def _combine(tree_bands: dict) -> dict[str, np.ndarray]:
    """Tree subbands ``{(i, j): w}`` of one type into four complex subbands.

    ``c = conj(l_r (x) l_c) . w / 4`` with ``l_p = (1, i)`` and ``l_n = (1, -i)``.
    The factor absorbs the 1/2 between orthonormal tree coefficients and
    dual-tree coefficients.
    """
    out = {}
    for rs in "pn":
        for cs in "pn":
            coef = np.conj(np.multiply.outer(_LAMBDA[rs], _LAMBDA[cs])) / 4.0
            out[(rs, cs)] = sum(coef[i, j] * tree_bands[(i, j)] for i, j in TREES)
    return out


def _split(bands: dict) -> dict:
    """Inverse of :func:`_combine`: ``w_ij = sum l_r[i] l_c[j] c`` (real part)."""
    out = {}
    for i, j in TREES:
        acc = sum(_LAMBDA[rs][i] * _LAMBDA[cs][j] * bands[(rs, cs)]
                  for rs in "pn" for cs in "pn")
        out[(i, j)] = acc.real
    return out


# --------------------------------------------------------------------------
# Forward and inverse transforms
# --------------------------------------------------------------------------

def _grid_for(shape) -> int:
    return math.lcm(*shape)


def _check_image(img, J):
    v = np.asarray(img)
    if np.iscomplexobj(v):
        raise ValueError("the dual-tree transform expects a real image")
    v = v.astype(np.float64)
    if v.ndim != 2:
        raise ValueError("expected a 2D image")
    if J < 1:
        raise ValueError("need at least one level")
    for s in v.shape:
        if s % (1 << J):
            raise ValueError(f"size {s} is not divisible by 2^{J}")
    return v


def _hybrid_bank(first_level, shape) -> FilterBank2D:
    bank = as_bank(first_level, 2)
    lo = bank.lowpass
    if not (lo.rows.is_real_in_time() and lo.cols.is_real_in_time()):
        raise ValueError("hybrid mode needs a real-valued first-level low-pass filter")
    for s in shape:
        if bank.grid_size % s:
            raise ValueError(f"first-level grid {bank.grid_size} is not a multiple of {s}")
    return bank


def _pack_level(tree_out: dict, level: int) -> dict[str, np.ndarray]:
    """Turn per-tree ``[lh, hl, hh]`` spectra into labeled complex subbands."""
    bands = {}
    for t, kinds in enumerate(KINDS):
        w = {tr: np.fft.ifft2(tree_out[tr][t]).real for tr in TREES}
        for (rs, cs), arr in _combine(w).items():
            bands[orientation_label(*kinds, rs, cs)] = arr
    return bands


def _unpack_level(bands: dict) -> dict:
    """Per-tree ``[lh, hl, hh]`` spectra from labeled complex subbands."""
    out = {tr: [None, None, None] for tr in TREES}
    for t, kinds in enumerate(KINDS):
        c = {(rs, cs): bands[orientation_label(*kinds, rs, cs)] for rs in "pn" for cs in "pn"}
        for tr, w in _split(c).items():
            out[tr][t] = np.fft.fft2(w)
    return out


def dtcwt_decompose(img, f: DtFilterSet, J: int, first_level=None) -> DtCoeffs:
    """Forward ``J``-level dual-tree transform.

    Parameters
    ----------
    img : ndarray
        Real 2D image with both sides divisible by ``2^J``.
    f : DtFilterSet
        Tree filters.
    J : int
        Number of levels.
    first_level : FilterBank1D or FilterBank2D, optional
        When given, level 1 is one undecimated level of this tight framelet
        bank (hybrid mode).

    Returns
    -------
    DtCoeffs
    """
    v = _check_image(img, J)
    g = f.at(_grid_for(v.shape))
    V = np.fft.fft2(v)
    highpass = []
    directions = []
    if first_level is None:
        lows, tree_out = {}, {}
        for i, j in TREES:
            out = analysis_step(V, _tensor_step_filters(g.analysis(1, i), g.analysis(1, j)))
            lows[(i, j)] = out[0]
            tree_out[(i, j)] = out[1:]
        highpass.append(_pack_level(tree_out, 1))
        directions.append({lab: label_angle(lab) for lab in HIGHPASS_LABELS})
        variant = "standard"
    else:
        bank = _hybrid_bank(first_level, v.shape)
        level1 = {}
        for u in bank.highpass:
            level1[u.label] = np.fft.ifft2(V * np.conj(_samples(u, v.shape)))
        highpass.append(level1)
        directions.append({u.label: u.direction for u in bank.highpass})
        low = np.fft.ifft2(V * np.conj(_samples(bank.lowpass, v.shape))).real
        # tree (i, j) starts from polyphase component (i, j), at orthonormal scale
        lows = {(i, j): np.fft.fft2(2.0 * low[i::2, j::2]) for i, j in TREES}
        variant = f"tpctf{bank.n}" if bank.n else "framelet"
    for level in range(2, J + 1):
        tree_out = {}
        for i, j in TREES:
            out = analysis_step(lows[(i, j)],
                                _tensor_step_filters(g.analysis(level, i), g.analysis(level, j)))
            lows[(i, j)] = out[0]
            tree_out[(i, j)] = out[1:]
        highpass.append(_pack_level(tree_out, level))
        directions.append({lab: label_angle(lab) for lab in HIGHPASS_LABELS})
    lowpass = {LOWPASS_LABELS[2 * i + j]: np.fft.ifft2(lows[(i, j)]).real / 2.0 for i, j in TREES}
    return DtCoeffs(lowpass, highpass, f.name, variant, directions)


def _samples(u: TensorFilter, shape) -> np.ndarray:
    return np.multiply.outer(u.rows.resample(shape[0]), u.cols.resample(shape[1]))


def dtcwt_reconstruct(c: DtCoeffs, f: DtFilterSet, first_level=None) -> np.ndarray:
    """Inverse of :func:`dtcwt_decompose`.

    Trees are inverted with the exact synthesis duals of their analysis
    pairs, so reconstruction is perfect even when a printed filter is only
    orthogonal to its printed precision.
    """
    if (first_level is None) != (c.first_level == "standard"):
        raise ValueError("first_level does not match how the coefficients were computed")
    J = c.levels
    try:
        lows = {(i, j): np.fft.fft2(2.0 * c.lowpass[LOWPASS_LABELS[2 * i + j]]) for i, j in TREES}
    except KeyError as exc:
        raise ValueError(f"missing low-pass subband {exc}") from None
    h, w = next(iter(lows.values())).shape
    shape = (h << J, w << J)
    g = f.at(_grid_for(shape))
    for level in range(J, 1, -1):
        bands = _unpack_level(_check_bands(c.highpass[level - 1], HIGHPASS_LABELS, level,
                                           (h << (J - level), w << (J - level))))
        for i, j in TREES:
            filt = _tensor_step_filters(g.synthesis(level, i), g.synthesis(level, j))
            lows[(i, j)] = synthesis_step([lows[(i, j)]] + bands[(i, j)], filt)
    if first_level is None:
        bands = _unpack_level(_check_bands(c.highpass[0], HIGHPASS_LABELS, 1,
                                           (h << (J - 1), w << (J - 1))))
        V = 0.0
        for i, j in TREES:
            filt = _tensor_step_filters(g.synthesis(1, i), g.synthesis(1, j))
            V = V + synthesis_step([lows[(i, j)]] + bands[(i, j)], filt)
        return np.fft.ifft2(V / 4.0).real
    bank = _hybrid_bank(first_level, shape)
    labels = tuple(u.label for u in bank.highpass)
    level1 = _check_bands(c.highpass[0], labels, 1, shape)
    low = np.empty(shape, dtype=complex)
    for i, j in TREES:
        low[i::2, j::2] = np.fft.ifft2(lows[(i, j)]) / 2.0
    V = np.fft.fft2(low) * _samples(bank.lowpass, shape)
    for u in bank.highpass:
        V = V + np.fft.fft2(level1[u.label]) * _samples(u, shape)
    return np.fft.ifft2(V).real


def _check_bands(bands: dict, labels, level: int, shape) -> dict:
    if set(bands) != set(labels):
        raise ValueError(f"level {level} subbands do not match the transform")
    for lab in labels:
        if bands[lab].shape != tuple(shape):
            raise ValueError(f"level {level} subband {lab} has shape {bands[lab].shape}, "
                             f"expected {tuple(shape)}")
    return bands


# --------------------------------------------------------------------------
# Multilevel filters
# --------------------------------------------------------------------------

def _dilated(f: FreqFilter, k: int, n: int) -> np.ndarray:
    # f(2^k xi) on the n-point grid
    idx = np.arange(n) * (f.grid_size // n) * (1 << k)
    return f.samples[idx % f.grid_size]


def dtcwt_multilevel_filters(f: DtFilterSet, j: int, grid: int,
                             first: tuple[FreqFilter, FreqFilter] | None = None
                             ) -> dict[str, FreqFilter]:
    """1D multilevel filters of the dual tree at level ``j`` on an ``grid``-point DFT grid.

    ``a1j`` and ``a2j`` are ``2^{(j-1)/2}`` times the cascaded low-pass
    symbols of the two trees; ``b1j``/``b2j`` carry the same factor with the
    last low-pass replaced by the tree high-pass.  ``apj, anj, bpj, bnj``
    follow by :func:`pair_complex`.  ``first`` overrides the level-1 low-pass
    of tree one (tree two uses its one-shift), as in hybrid mode.
    """
    if j < 1 or grid % (1 << j):
        raise ValueError(f"grid {grid} is not divisible by 2^{j}")
    g = f.at(grid)
    out = {}
    for t in (0, 1):
        lo1, hi1 = g.analysis(1, t)
        if first is not None:
            lo1 = first[0] if t == 0 else shift(first[0], 1)
        lo_up, hi_up = g.analysis(2, t)
        scale = 2.0 ** ((j - 1) / 2)
        base = lo1.resample(grid).astype(complex)
        for k in range(1, j - 1):
            base = base * _dilated(lo_up, k, grid)
        if j == 1:
            low = base
            high = hi1.resample(grid) if first is None else None
        else:
            low = scale * base * _dilated(lo_up, j - 1, grid)
            high = scale * base * _dilated(hi_up, j - 1, grid)
        out[f"a{t + 1}j"] = FreqFilter(low, "lowpass", f"a{t + 1}_{j}")
        if high is not None:
            out[f"b{t + 1}j"] = FreqFilter(high, "highpass", f"b{t + 1}_{j}")
    for kind, role in (("a", "lowpass"), ("b", "highpass")):
        if f"{kind}1j" not in out:
            continue
        p, n = pair_complex(out[f"{kind}1j"].samples, out[f"{kind}2j"].samples)
        out[f"{kind}pj"] = FreqFilter(p, role, f"{kind}p_{j}")
        out[f"{kind}nj"] = FreqFilter(n, role, f"{kind}n_{j}")
    return out


def subband_filter(f: DtFilterSet, j: int, label: str, shape,
                   first: tuple[FreqFilter, FreqFilter] | None = None) -> np.ndarray:
    """2D symbol whose inner products give the level-``j`` subband ``label``."""
    for kinds, rs, cs, lab in SUBBANDS:
        if lab == label:
            break
    else:
        raise KeyError(f"unknown subband {label!r}")
    rows = dtcwt_multilevel_filters(f, j, shape[0], first)[f"{kinds[0]}{rs}j"]
    cols = dtcwt_multilevel_filters(f, j, shape[1], first)[f"{kinds[1]}{cs}j"]
    return np.multiply.outer(rows.samples, cols.samples)


def subband_gains(f: DtFilterSet, J: int, shape, first_level=None) -> list[dict[str, float]]:
    """l2 norm of the equivalent filter of every high-pass subband.

    Additive white noise of deviation ``s`` has deviation ``s * gain`` in the
    subband.  Norms are separable, so only 1D symbols are evaluated.
    """
    first = None
    gains: list[dict[str, float]] = []
    if first_level is not None:
        bank = _hybrid_bank(first_level, shape)
        first = (bank.lowpass.rows, None)
        if bank.lowpass.rows is not bank.lowpass.cols and not np.array_equal(
                bank.lowpass.rows.samples, bank.lowpass.cols.samples):
            raise ValueError("hybrid mode needs the same low-pass along both axes")
        gains.append({u.label: float(np.sqrt(np.mean(np.abs(u.rows.resample(shape[0])) ** 2)
                                             * np.mean(np.abs(u.cols.resample(shape[1])) ** 2)))
                      for u in bank.highpass})
    for j in range(1 if first is None else 2, J + 1):
        norms = [{k: np.mean(np.abs(v.samples) ** 2)
                  for k, v in dtcwt_multilevel_filters(f, j, n, first).items()} for n in shape]
        gains.append({lab: float(np.sqrt(norms[0][f"{kinds[0]}{rs}j"] * norms[1][f"{kinds[1]}{cs}j"]))
                      for kinds, rs, cs, lab in SUBBANDS})
    return gains


__all__ = [
    "DtCoeffs", "DtFilterSet", "GridFilters", "HIGHPASS_LABELS", "LOWPASS_LABELS", "MEYER_EPS",
    "MEYER_M", "SUBBANDS", "dtcwt_decompose", "dtcwt_multilevel_filters", "dtcwt_reconstruct",
    "label_angle", "load_dtcoeffs", "orientation_label", "pair_complex", "save_dtcoeffs", "subband_filter",
    "subband_gains", "unpair_complex",
]
