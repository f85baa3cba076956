"""Multilevel decimated framelet transform for 1D and 2D tight framelet banks.

All filtering happens in the frequency domain with periodic boundaries.
Correlation with ``f*`` is a pointwise product with ``conj(f^)``;
downsampling by 2 folds the spectrum and upsampling replicates it.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .filters import FilterBank1D, FilterBank2D, FreqFilter, TensorFilter, tensor_bank_2d


def fold(x: np.ndarray, axis: int) -> np.ndarray:
    """Spectrum of ``y(n) = x(2n)`` along ``axis``: ``(X(k) + X(k + M/2)) / 2``."""
    h = x.shape[axis] // 2
    lo = np.take(x, np.arange(h), axis=axis)
    hi = np.take(x, np.arange(h, 2 * h), axis=axis)
    return 0.5 * (lo + hi)


def replicate(x: np.ndarray, axis: int) -> np.ndarray:
    """Spectrum of the zero-upsampled sequence: the spectrum repeated twice."""
    return np.concatenate([x, x], axis=axis)


def _grid_samples(f, shape: tuple[int, ...]) -> np.ndarray:
    """Samples of a filter on the DFT grid matching ``shape``."""
    if isinstance(f, FreqFilter):
        if len(shape) != 1:
            raise ValueError("1D filter applied to a multi-dimensional signal")
        return f.resample(shape[0])
    if isinstance(f, TensorFilter):
        if len(shape) != 2:
            raise ValueError("2D filter applied to a signal that is not 2D")
        return np.multiply.outer(f.rows.resample(shape[0]), f.cols.resample(shape[1]))
    arr = np.asarray(f, dtype=complex)
    if arr.shape != tuple(shape):
        raise ValueError(f"filter grid {arr.shape} does not match signal {shape}")
    return arr


def _check_even(shape):
    if any(s % 2 for s in shape):
        raise ValueError(f"every transformed axis must have even length, got {shape}")


def transition(v, f) -> np.ndarray:
    """Transition operator ``T_f v = 2^d (v * f*) downsampled by 2``.

    ``f`` is a :class:`FreqFilter` (1D), a :class:`TensorFilter` (2D) or an
    array of symbol samples with the shape of ``v``.
    """
    v = np.asarray(v)
    _check_even(v.shape)
    d = v.ndim
    X = np.fft.fftn(v) * np.conj(_grid_samples(f, v.shape))
    for ax in range(d):
        X = fold(X, ax)
    return (2.0 ** d) * np.fft.ifftn(X)


def subdivision(v, f) -> np.ndarray:
    """Subdivision operator ``S_f v = 2^d (v upsampled by 2) * f``."""
    v = np.asarray(v)
    d = v.ndim
    X = np.fft.fftn(v)
    for ax in range(d):
        X = replicate(X, ax)
    return (2.0 ** d) * np.fft.ifftn(X * _grid_samples(f, X.shape))


@dataclass
class CoefficientPyramid:
    """Coefficients of a ``J``-level decomposition.

    ``highpass[j - 1]`` maps subband labels to level-``j`` arrays;
    ``lowpass`` is the level-``J`` low-pass array.
    """

    lowpass: np.ndarray
    highpass: list[dict[str, np.ndarray]]
    bank_name: str = ""
    ndim: int = 1

    @property
    def levels(self) -> int:
        return len(self.highpass)

    def energy(self) -> float:
        return energy(self)

    def entries(self):
        """``(level, label, kind, array)`` for every stored array."""
        for j, bands in enumerate(self.highpass, start=1):
            for label, arr in bands.items():
                yield j, label, "highpass", arr
        yield self.levels, "lowpass", "lowpass", self.lowpass

    def copy(self) -> "CoefficientPyramid":
        return CoefficientPyramid(self.lowpass.copy(),
                                  [{k: v.copy() for k, v in b.items()} for b in self.highpass],
                                  self.bank_name, self.ndim)


def energy(p) -> float:
    """Sum of squared magnitudes over every stored subband."""
    return float(sum(np.vdot(a, a).real for *_, a in p.entries()))


def as_bank(bank, ndim: int):
    """Return a bank matching the signal dimension (1D banks are tensored for 2D)."""
    if ndim == 1:
        if not isinstance(bank, FilterBank1D):
            raise ValueError("1D signals need a FilterBank1D")
        return bank
    if ndim == 2:
        return bank if isinstance(bank, FilterBank2D) else tensor_bank_2d(bank)
    raise ValueError("only 1D and 2D signals are supported")


def _check_levels(shape, J, grid):
    if J < 1:
        raise ValueError("need at least one level")
    for s in shape:
        if s % (1 << J):
            raise ValueError(f"size {s} is not divisible by 2^{J}")
        if grid % s:
            raise ValueError(f"bank grid {grid} is not a multiple of signal size {s}")


def _split_1d(V, filters):
    out = []
    for f in filters:
        out.append(np.sqrt(2.0) * fold(V * np.conj(f.resample(V.shape[0])), 0))
    return out


def _split_2d(V, filters: Sequence[TensorFilter]):
    # group by row factor so each row fold is done once
    H, W = V.shape
    row_cache: dict[int, np.ndarray] = {}
    out = []
    for f in filters:
        key = id(f.rows)
        if key not in row_cache:
            row_cache[key] = fold(V * np.conj(f.rows.resample(H))[:, None], 0)
        out.append(2.0 * fold(row_cache[key] * np.conj(f.cols.resample(W))[None, :], 1))
    return out


def _merge_1d(spectra, filters):
    M = 2 * spectra[0].shape[0]
    acc = np.zeros(M, dtype=complex)
    for Y, f in zip(spectra, filters):
        acc += f.resample(M) * replicate(Y, 0)
    return np.sqrt(2.0) * acc


def _merge_2d(spectra, filters: Sequence[TensorFilter]):
    h, w = spectra[0].shape
    H, W = 2 * h, 2 * w
    rows: dict[int, list] = {}
    for Y, f in zip(spectra, filters):
        part = f.cols.resample(W)[None, :] * replicate(Y, 1)
        if id(f.rows) in rows:
            rows[id(f.rows)][1] += part
        else:
            rows[id(f.rows)] = [f.rows, part]
    acc = np.zeros((H, W), dtype=complex)
    for r, part in rows.values():
        acc += r.resample(H)[:, None] * replicate(part, 0)
    return 2.0 * acc


def analysis_step(V: np.ndarray, filters) -> list[np.ndarray]:
    """One decimated analysis level in the frequency domain.

    ``V`` is the spectrum of the current low-pass signal; returns the spectra
    of ``2^{-d/2} T_f v`` for every filter, in order.
    """
    return _split_1d(V, filters) if V.ndim == 1 else _split_2d(V, filters)


def synthesis_step(spectra: Sequence[np.ndarray], filters) -> np.ndarray:
    """Adjoint of :func:`analysis_step`: ``sum_f 2^{-d/2} S_f w_f`` as a spectrum."""
    return _merge_1d(spectra, filters) if spectra[0].ndim == 1 else _merge_2d(spectra, filters)


def decompose(v, bank, J: int) -> CoefficientPyramid:
    """``J``-level decomposition ``v_j = 2^{-d/2} T_a v_{j-1}``, ``w_j = 2^{-d/2} T_b v_{j-1}``.

    Parameters
    ----------
    v : ndarray
        1D or 2D signal; every axis divisible by ``2^J``.
    bank : FilterBank1D or FilterBank2D
        A 1D bank is tensored automatically for 2D input.  The bank grid must
        be a multiple of the signal size along each axis.
    J : int
        Number of levels.
    """
    v = np.asarray(v)
    bank = as_bank(bank, v.ndim)
    _check_levels(v.shape, J, bank.grid_size)
    filters = bank.analysis_filters()
    labels = [f.label for f in filters[1:]]
    V = np.fft.fftn(v)
    highpass = []
    for _ in range(J):
        out = analysis_step(V, filters)
        highpass.append({lab: np.fft.ifftn(Y) for lab, Y in zip(labels, out[1:])})
        V = out[0]
    return CoefficientPyramid(np.fft.ifftn(V), highpass, bank.name, v.ndim)


def reconstruct(p: CoefficientPyramid, bank) -> np.ndarray:
    """Inverse of :func:`decompose` (the synthesis operator of the tight frame)."""
    bank = as_bank(bank, p.ndim)
    filters = bank.analysis_filters()
    labels = [f.label for f in filters[1:]]
    V = np.fft.fftn(p.lowpass)
    for j in range(p.levels, 0, -1):
        bands = p.highpass[j - 1]
        if set(bands) != set(labels):
            raise ValueError(f"level {j} subbands do not match the bank")
        spectra = [V] + [np.fft.fftn(bands[lab]) for lab in labels]
        if any(s.shape != V.shape for s in spectra):
            raise ValueError(f"level {j} subband shapes disagree")
        V = synthesis_step(spectra, filters)
    return np.fft.ifftn(V)


# --------------------------------------------------------------------------
# Multilevel filters and discrete affine systems
# --------------------------------------------------------------------------

@dataclass
class DasGenerator:
    """A multilevel filter at level ``j``; its shifts live on ``2^j Z^d``."""

    level: int
    label: str
    freq: np.ndarray
    direction: float | None = None

    @property
    def lattice(self) -> int:
        return 1 << self.level

    @property
    def time(self) -> np.ndarray:
        return np.fft.ifftn(self.freq)

    def norm(self) -> float:
        return float(np.sqrt(np.mean(np.abs(self.freq) ** 2)))


def _chain(low: FreqFilter, last: FreqFilter, j: int, n: int) -> np.ndarray:
    # 2^{j/2} low(xi) low(2 xi) ... low(2^{j-2} xi) last(2^{j-1} xi) on an n-grid
    idx = np.arange(n)
    step = low.grid_size // n
    out = np.full(n, 2.0 ** (j / 2), dtype=complex)
    for i in range(j - 1):
        out *= low.samples[(idx * step * (1 << i)) % low.grid_size]
    out *= last.samples[(idx * step * (1 << (j - 1))) % last.grid_size]
    return out


def multilevel_filter(bank, j: int, which: str, grid: int | None = None) -> DasGenerator:
    """Symbol of ``a_j`` (``which`` = low-pass label) or ``b_{l,j}``.

    ``a_j^(xi) = 2^{dj/2} a^(xi) ... a^(2^{j-1} xi)`` and ``b_{l,j}`` replaces
    the last factor with ``b_l^(2^{j-1} xi)``.
    """
    n = bank.grid_size if grid is None else int(grid)
    if j < 1 or n % (1 << j) or bank.grid_size % n:
        raise ValueError(f"level {j} is not available on a grid of {n}")
    filters = {f.label: f for f in bank.analysis_filters()}
    if which not in filters:
        raise KeyError(f"no filter labeled {which!r}")
    f = filters[which]
    if isinstance(bank, FilterBank2D):
        a = bank.lowpass
        freq = np.multiply.outer(_chain(a.rows, f.rows, j, n), _chain(a.cols, f.cols, j, n))
        return DasGenerator(j, which, freq, f.direction)
    return DasGenerator(j, which, _chain(bank.a, f, j, n))


def das_generators(bank, J: int, grid: int | None = None) -> list[DasGenerator]:
    """``a_J`` followed by every ``b_{l,j}`` for ``j = 1..J``."""
    filters = bank.analysis_filters()
    gens = [multilevel_filter(bank, J, filters[0].label, grid)]
    for j in range(1, J + 1):
        gens.extend(multilevel_filter(bank, j, f.label, grid) for f in filters[1:])
    return gens


def das_coefficients(v, gen: DasGenerator) -> np.ndarray:
    """``<v, g(. - 2^j k)>`` for every ``k`` by direct correlation."""
    v = np.asarray(v)
    step = gen.lattice
    corr = np.fft.ifftn(np.fft.fftn(v) * np.conj(gen.freq))
    sl = tuple(slice(None, None, step) for _ in range(v.ndim))
    return corr[sl]


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------

def save_entries(entries: Iterable, out_dir, meta: dict) -> str:
    """Write ``(level, label, kind, array)`` entries as raw complex128 files.

    Each file is row-major little-endian float64 ``(re, im)`` pairs.  The
    manifest lists level, label, height and width of every subband.
    """
    os.makedirs(out_dir, exist_ok=True)
    items = []
    for level, label, kind, arr in entries:
        a = np.atleast_2d(np.asarray(arr, dtype=complex))
        name = f"{kind}_L{level}_{label}.bin"
        np.ascontiguousarray(a, dtype="<c16").tofile(os.path.join(out_dir, name))
        items.append({"level": level, "label": label, "kind": kind,
                      "height": a.shape[0], "width": a.shape[1], "file": name})
    doc = dict(meta)
    doc["subbands"] = items
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
    return path


def load_entries(in_dir) -> tuple[dict, list]:
    with open(os.path.join(in_dir, "manifest.json")) as fh:
        doc = json.load(fh)
    out = []
    for it in doc["subbands"]:
        a = np.fromfile(os.path.join(in_dir, it["file"]), dtype="<c16")
        if a.size != it["height"] * it["width"]:
            raise ValueError(f"{it['file']}: size does not match manifest")
        out.append((it["level"], it["label"], it["kind"], a.reshape(it["height"], it["width"])))
    return doc, out


def save_pyramid(p: CoefficientPyramid, out_dir, extra: dict | None = None) -> str:
    meta = {"format": "framelet-pyramid", "bank": p.bank_name, "ndim": p.ndim,
            "levels": p.levels}
    meta.update(extra or {})
    return save_entries(p.entries(), out_dir, meta)


def load_pyramid(in_dir) -> CoefficientPyramid:
    doc, entries = load_entries(in_dir)
    ndim = int(doc["ndim"])
    J = int(doc["levels"])
    highpass = [dict() for _ in range(J)]
    lowpass = None
    for level, label, kind, arr in entries:
        a = arr[0] if ndim == 1 else arr
        if kind == "lowpass":
            lowpass = a
        else:
            highpass[level - 1][label] = a
    if lowpass is None:
        raise ValueError("manifest has no low-pass subband")
    return CoefficientPyramid(lowpass, highpass, doc.get("bank", ""), ndim)


__all__ = [
    "CoefficientPyramid", "DasGenerator", "analysis_step", "as_bank", "das_coefficients",
    "das_generators", "decompose", "energy", "fold", "load_entries", "load_pyramid",
    "multilevel_filter", "reconstruct", "replicate", "save_entries", "save_pyramid",
    "subdivision", "synthesis_step", "transition",
]
