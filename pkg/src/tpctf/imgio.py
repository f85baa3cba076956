"""Grayscale image I/O: binary and ASCII PGM, raw float64 dumps."""
from __future__ import annotations

import json
import os
import re
import warnings

import numpy as np

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


class PGMError(ValueError):
    """Malformed or unsupported PGM data."""


def _header(data: bytes):
    pos = 0
    vals = []
    for _ in range(4):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise PGMError("truncated PGM header")
        vals.append(m.group(1))
        pos = m.end()
    magic = vals[0]
    if magic not in (b"P5", b"P2"):
        raise PGMError(f"not a P5/P2 PGM file (magic {magic!r})")
    try:
        width, height, maxval = (int(v) for v in vals[1:])
    except ValueError:
        raise PGMError("non-integer field in PGM header") from None
    if width <= 0 or height <= 0:
        raise PGMError("PGM dimensions must be positive")
    if maxval != 255:
        raise PGMError(f"only maxval 255 is supported, got {maxval}")
    return magic, width, height, pos


def read_pgm(path) -> np.ndarray:
    """Load a P5 or P2 PGM with maxval 255 as a float64 ``(height, width)`` array."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic, width, height, pos = _header(data)
    count = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        raster = data[pos + 1 : pos + 1 + count]
        if len(raster) < count:
            raise PGMError(f"truncated PGM raster: {len(raster)} of {count} bytes")
        pix = np.frombuffer(raster, dtype=np.uint8)
    else:
        fields = data[pos:].split()
        if len(fields) < count:
            raise PGMError(f"truncated PGM raster: {len(fields)} of {count} values")
        try:
            pix = np.array([int(t) for t in fields[:count]])
        except ValueError:
            raise PGMError("non-integer PGM sample") from None
        if pix.min() < 0 or pix.max() > 255:
            raise PGMError("PGM sample outside [0, 255]")
    return pix.reshape(height, width).astype(np.float64)


def quantize(img) -> np.ndarray:
    """Clip to ``[0, 255]`` and round half away from zero."""
    x = np.clip(np.asarray(img, dtype=np.float64), 0.0, 255.0)
    return np.floor(x + 0.5).astype(np.uint8)


def write_pgm(img, path, ascii: bool = False) -> None:
    """Write an 8-bit PGM (P5 by default)."""
    x = np.asarray(img)
    if x.ndim != 2:
        raise ValueError("expected a 2D image")
    if not np.all(np.isfinite(x)):
        raise ValueError("image has non-finite pixels")
    q = quantize(x)
    h, w = q.shape
    with open(path, "wb") as fh:
        if ascii:
            fh.write(f"P2\n{w} {h}\n255\n".encode())
            for row in q:
                fh.write((" ".join(str(int(v)) for v in row) + "\n").encode())
        else:
            fh.write(f"P5\n{w} {h}\n255\n".encode())
            fh.write(q.tobytes())


def to_signal(img) -> np.ndarray:
    """Float64 copy of an image for the transforms."""
    return np.array(img, dtype=np.float64)


def from_signal(sig, tol: float = 1e-6) -> np.ndarray:
    """Real part of a transform output; warns if the imaginary part exceeds ``tol``."""
    s = np.asarray(sig)
    if np.iscomplexobj(s):
        peak = float(np.max(np.abs(s.imag))) if s.size else 0.0
        if peak > tol:
            warnings.warn(f"discarding imaginary part of magnitude {peak:.3g}", RuntimeWarning,
                          stacklevel=2)
        s = s.real
    return np.array(s, dtype=np.float64)


def write_raw(img, path) -> None:
    """Row-major little-endian float64 dump plus a ``.json`` sidecar."""
    x = np.ascontiguousarray(img, dtype="<f8")
    if x.ndim != 2:
        raise ValueError("expected a 2D image")
    x.tofile(path)
    with open(os.fspath(path) + ".json", "w") as fh:
        json.dump({"width": x.shape[1], "height": x.shape[0]}, fh)


def read_raw(path) -> np.ndarray:
    with open(os.fspath(path) + ".json") as fh:
        meta = json.load(fh)
    w, h = int(meta["width"]), int(meta["height"])
    x = np.fromfile(path, dtype="<f8")
    if x.size != w * h:
        raise ValueError(f"raw file holds {x.size} values, sidecar says {w}x{h}")
    return x.reshape(h, w).astype(np.float64)


def read_image(path) -> np.ndarray:
    """PGM, or a raw float64 dump when a ``.json`` sidecar exists."""
    if os.path.exists(os.fspath(path) + ".json"):
        return read_raw(path)
    return read_pgm(path)


# Standard test images are looked up by stem, in $TPCTF_IMAGES first and then
# in the repository's data/ directory.
DATA_DIR = os.path.normpath(os.path.join(os.path.dirname(__file__), "..", "..", "data"))
IMAGE_ENV = "TPCTF_IMAGES"


def find_image(name: str) -> str | None:
    """Path of ``name`` (e.g. ``"barbara512"``) as a PGM, or None if absent."""
    stem = name[:-4] if name.endswith(".pgm") else name
    dirs = [os.environ.get(IMAGE_ENV), DATA_DIR]
    for d in dirs:
        if d and os.path.isfile(os.path.join(d, stem + ".pgm")):
            return os.path.join(d, stem + ".pgm")
    return None


__all__ = ["DATA_DIR", "IMAGE_ENV", "PGMError", "find_image", "from_signal", "quantize",
           "read_image", "read_pgm", "read_raw", "to_signal", "write_pgm", "write_raw"]
