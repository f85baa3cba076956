"""Gaussian noise, bivariate shrinkage, PSNR and the denoising experiment harness."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _shrink_py
from .dtcwt import DtCoeffs, DtFilterSet, dtcwt_decompose, dtcwt_reconstruct, subband_gains
from .filters import FilterBank2D, ctf_bank, tensor_bank_2d
from .imgio import read_image, write_pgm
from .transform import CoefficientPyramid, _chain, decompose, reconstruct

try:  # compiled kernel, optional
    from . import _shrink as _shrink_ext
except ImportError:  # pragma: no cover - exercised when the extension is not built
    _shrink_ext = None

NOISE_GENERATOR = "philox4x64-boxmuller-v1"
TRANSFORMS = ("tpctf3", "tpctf4", "tpctf6", "dtcwt-kingsbury", "dtcwt-meyer", "dtcwt-hybrid6")
DEFAULT_SEEDS = (1, 2, 3, 4, 5)
DEFAULT_WINDOW = 7


def _default_backend() -> str:
    if os.environ.get("TPCTF_PURE_PYTHON") == "1" or _shrink_ext is None:
        return "python"
    return "cython"


KERNEL_BACKEND = _default_backend()


def get_kernel(backend: str | None = None):
    """Shrinkage kernel for ``backend`` (``"cython"`` or ``"python"``)."""
    backend = backend or KERNEL_BACKEND
    if backend == "python":
        return _shrink_py.shrink_subband
    if backend == "cython":
        if _shrink_ext is None:
            raise RuntimeError("compiled kernel is not built")
        return _shrink_ext.shrink_subband
    raise ValueError(f"unknown kernel backend {backend!r}")


# --------------------------------------------------------------------------
# Noise and metrics
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NoiseModel:
    """Additive i.i.d. Gaussian noise with deviation ``sigma_n`` (pixel units)."""

    sigma_n: float
    seed: int = 1

    def __post_init__(self):
        if not self.sigma_n >= 0:
            raise ValueError("sigma_n must be non-negative")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def standard_normal(shape, seed: int) -> np.ndarray:
    """Row-major N(0, 1) samples: Philox-4x64 uniforms through Box-Muller.

    Uniform pairs ``(u1, u2)`` give ``r cos(2 pi u2)`` and ``r sin(2 pi u2)``
    with ``r = sqrt(-2 log u1)``; ``u1`` lies in ``(0, 1]``.
    """
    count = int(np.prod(shape))
    rng = np.random.Generator(np.random.Philox(int(seed)))
    u = rng.random(2 * ((count + 1) // 2))
    u1 = 1.0 - u[0::2]
    u2 = u[1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.empty(u.shape[0])
    z[0::2] = r * np.cos(2.0 * np.pi * u2)
    z[1::2] = r * np.sin(2.0 * np.pi * u2)
    return z[:count].reshape(shape)


def add_gaussian_noise(img, model: NoiseModel) -> np.ndarray:
    """``img + sigma_n g``; the result is not clipped."""
    x = np.asarray(img, dtype=np.float64)
    if model.sigma_n == 0:
        return x.copy()
    return x + model.sigma_n * standard_normal(x.shape, model.seed)


def mse(clean, test) -> float:
    a = np.asarray(clean, dtype=np.float64)
    b = np.clip(np.asarray(test, dtype=np.float64), 0.0, 255.0)
    if a.shape != b.shape:
        raise ValueError(f"image sizes differ: {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def psnr(clean, test) -> float:
    """``10 log10(255^2 / MSE)`` after clipping ``test`` to [0, 255]; ``inf`` if equal."""
    err = mse(clean, test)
    if err == 0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / err)


# --------------------------------------------------------------------------
# Shrinkage
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BandInfo:
    """Noise gain, complexity and parent of one high-pass subband."""

    gain: float
    complex: bool
    parent: tuple[int, str] | None  # (level, label) of the parent, or None
    upsample: int = 2
    undecimated: bool = False


@dataclass
class ShrinkPlan:
    """Per-subband shrinkage metadata, ``bands[j - 1][label]``."""

    bands: list[dict[str, BandInfo]]

    @property
    def levels(self) -> int:
        return len(self.bands)


def _is_real_filter(f) -> bool:
    return f.rows.is_real_in_time() and f.cols.is_real_in_time()


def framelet_plan(bank, J: int, shape) -> ShrinkPlan:
    """Plan for a 2D framelet pyramid: parents share the label one level up."""
    bank = bank if isinstance(bank, FilterBank2D) else tensor_bank_2d(bank)
    a = bank.lowpass
    bands = []
    for j in range(1, J + 1):
        level = {}
        for f in bank.highpass:
            nr = np.mean(np.abs(_chain(a.rows, f.rows, j, shape[0])) ** 2)
            nc = np.mean(np.abs(_chain(a.cols, f.cols, j, shape[1])) ** 2)
            parent = (j + 1, f.label) if j < J else None
            level[f.label] = BandInfo(float(np.sqrt(nr * nc)), not _is_real_filter(f), parent)
        bands.append(level)
    return ShrinkPlan(bands)


def _nearest_label(angle: float | None, labels) -> str:
    def dist(lab):
        if angle is None:
            return 90.0
        d = abs(angle - float(lab.rstrip("*"))) % 180.0
        return min(d, 180.0 - d)
    # ties prefer the primary subband over its conjugate partner
    return min(labels, key=lambda lab: (dist(lab), lab.endswith("*"), lab))


def dtcwt_plan(fs: DtFilterSet, J: int, shape, first_level=None) -> ShrinkPlan:
    """Plan for dual-tree coefficients.

    In hybrid mode each first-level framelet subband takes as parent the
    level-2 dual-tree subband with the nearest orientation (``upsample`` 4).
    """
    gains = subband_gains(fs, J, shape, first_level)
    bands = []
    for j, g in enumerate(gains, start=1):
        level = {}
        for lab, gain in g.items():
            parent = (j + 1, lab) if j < J else None
            level[lab] = BandInfo(gain, True, parent)
        bands.append(level)
    if first_level is not None:
        bank = first_level if isinstance(first_level, FilterBank2D) else tensor_bank_2d(first_level)
        dt_labels = list(gains[1]) if J >= 2 else []
        level = {}
        for u in bank.highpass:
            parent = (2, _nearest_label(u.direction, dt_labels)) if dt_labels else None
            level[u.label] = BandInfo(bands[0][u.label].gain, True, parent, upsample=4,
                                      undecimated=True)
        bands[0] = level
    return ShrinkPlan(bands)


def _upsample(x: np.ndarray, k: int) -> np.ndarray:
    return np.repeat(np.repeat(x, k, axis=0), k, axis=1)


def _highpass_levels(c):
    if isinstance(c, (CoefficientPyramid, DtCoeffs)):
        return c.highpass
    raise TypeError("expected a CoefficientPyramid or DtCoeffs")


def bivariate_shrink(c, sigma_n: float, window: int = DEFAULT_WINDOW, *, plan: ShrinkPlan,
                     backend: str | None = None, complex_stats: str = "magnitude"):
    """Bivariate shrinkage of every high-pass subband; low-pass is untouched.

    Parameters
    ----------
    c : CoefficientPyramid or DtCoeffs
        2D coefficients.
    sigma_n : float
        Noise deviation in the image domain.
    window : int
        Odd side of the local variance window (periodic wrap).  Undecimated
        subbands use ``2 * window + 1``.
    plan : ShrinkPlan
        Gains and parents for each subband.
    backend : {"cython", "python"}, optional
        Kernel to use; both return identical values.
    complex_stats : {"magnitude", "component"}
        ``"magnitude"`` uses the full complex variance;
        ``"component"`` applies the rule to the real and imaginary parts'
        common variance (``sigma_b = sigma_n gain / sqrt 2``).

    Notes
    -----
    The parent is multiplied by ``gain(child) / gain(parent)`` so both
    members of the pair carry the same noise level.  This is a no-op when
    the levels share one normalization and matters for an undecimated first
    level feeding decimated parents.

    Returns
    -------
    Same type as ``c`` with shrunk high-pass subbands.
    """
    if window < 3 or window % 2 == 0:
        raise ValueError("window must be odd and at least 3")
    if sigma_n < 0:
        raise ValueError("sigma_n must be non-negative")
    if complex_stats not in ("component", "magnitude"):
        raise ValueError(f"unknown complex_stats {complex_stats!r}")
    levels = _highpass_levels(c)
    if getattr(c, "ndim", 2) != 2:
        raise ValueError("bivariate shrinkage needs 2D coefficients")
    if plan.levels != len(levels):
        raise ValueError("plan and coefficients have different level counts")
    kernel = get_kernel(backend)
    out = c.copy()
    for j, bands in enumerate(levels, start=1):
        for label, y in bands.items():
            info = plan.bands[j - 1][label]
            if info.parent is None:
                parent = np.zeros(y.shape, dtype=np.complex128)
            else:
                pj, plab = info.parent
                # express the parent at the child's noise scale
                ratio = info.gain / plan.bands[pj - 1][plab].gain
                parent = _upsample(levels[pj - 1][plab], info.upsample) * ratio
                if parent.shape != y.shape:
                    raise ValueError(f"parent of level {j} {label} has shape {parent.shape}")
            sigma_b = sigma_n * info.gain
            scale = 1.0
            if info.complex and complex_stats == "component":
                sigma_b /= math.sqrt(2.0)
                scale = 0.5
            # an undecimated band needs twice the window to span the same area
            w = 2 * window + 1 if info.undecimated else window
            res = kernel(y, parent, sigma_b, w, scale)
            out.highpass[j - 1][label] = res if np.iscomplexobj(y) else res.real
    return out


def shrink_factor(y1: float, y2: float, sigma_b: float, sigma_hat: float) -> float:
    """Scalar form of the rule, for reference and tests."""
    R = math.hypot(y1, y2)
    if R == 0:
        return 0.0
    if sigma_hat == 0:
        return 0.0 if sigma_b > 0 else 1.0
    return max(R - math.sqrt(3.0) * sigma_b ** 2 / sigma_hat, 0.0) / R


# --------------------------------------------------------------------------
# Pipelines and experiments
# --------------------------------------------------------------------------

def default_levels(shape) -> int:
    """6 levels for 512x512, 5 for 256x256 (coarsest subband 8x8)."""
    return max(1, int(math.log2(min(shape))) - 3)


class Pipeline:
    """Forward transform, shrinkage plan and inverse for one named transform."""

    def __init__(self, name: str, shape, levels: int | None = None):
        if name not in TRANSFORMS:
            raise ValueError(f"unknown transform {name!r}; choose from {', '.join(TRANSFORMS)}")
        self.name = name
        self.shape = tuple(shape)
        self.levels = default_levels(shape) if levels is None else int(levels)
        grid = math.lcm(*self.shape)
        self.first_level = None
        if name.startswith("tpctf"):
            self.bank = tensor_bank_2d(ctf_bank(int(name[5:]), grid))
            self.plan = framelet_plan(self.bank, self.levels, self.shape)
        else:
            self.filters = DtFilterSet.meyer() if name == "dtcwt-meyer" else DtFilterSet.kingsbury()
            if name == "dtcwt-hybrid6":
                self.first_level = tensor_bank_2d(ctf_bank(6, grid))
            self.plan = dtcwt_plan(self.filters, self.levels, self.shape, self.first_level)

    def forward(self, img):
        if self.name.startswith("tpctf"):
            return decompose(img, self.bank, self.levels)
        return dtcwt_decompose(img, self.filters, self.levels, self.first_level)

    def inverse(self, c) -> np.ndarray:
        if self.name.startswith("tpctf"):
            return reconstruct(c, self.bank).real
        return dtcwt_reconstruct(c, self.filters, self.first_level)

    def denoise(self, noisy, sigma_n: float, window: int = DEFAULT_WINDOW,
                backend: str | None = None) -> np.ndarray:
        c = bivariate_shrink(self.forward(noisy), sigma_n, window, plan=self.plan, backend=backend)
        return self.inverse(c)


@dataclass
class ExperimentConfig:
    """One table: an image, a transform, noise levels and seeds."""

    image: str
    transform: str
    levels: int | None = None
    sigmas: tuple[float, ...] = (25.0,)
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    window: int = DEFAULT_WINDOW
    threads: int = 1
    backend: str | None = None
    save_images: str | None = None

    @property
    def trials(self) -> int:
        return len(self.seeds)


@dataclass
class ResultRow:
    sigma_n: float
    psnr_mean: float
    psnr_per_trial: list[float]
    runtime_sec: float = 0.0
    transform: str = ""
    image: str = ""
    levels: int = 0


def run_experiment(cfg: ExperimentConfig, image: np.ndarray | None = None) -> list[ResultRow]:
    """Noise, decompose, shrink, reconstruct, clip and score every (sigma, seed).

    Trials run on up to ``cfg.threads`` threads; each trial draws its own noise
    from its seed, so the results do not depend on scheduling.
    """
    if not cfg.seeds:
        raise ValueError("need at least one seed")
    clean = read_image(cfg.image) if image is None else np.asarray(image, dtype=np.float64)
    pipe = Pipeline(cfg.transform, clean.shape, cfg.levels)
    if cfg.save_images:
        os.makedirs(cfg.save_images, exist_ok=True)

    def trial(sigma, seed):
        noisy = add_gaussian_noise(clean, NoiseModel(sigma, seed))
        rec = pipe.denoise(noisy, sigma, cfg.window, cfg.backend)
        if cfg.save_images:
            stem = os.path.join(cfg.save_images, f"{cfg.transform}_s{sigma:g}_seed{seed}")
            write_pgm(noisy, stem + "_noisy.pgm")
            write_pgm(rec, stem + "_denoised.pgm")
        return psnr(clean, rec)

    rows = []
    for sigma in cfg.sigmas:
        start = time.perf_counter()
        if cfg.threads > 1:
            with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
                vals = list(ex.map(lambda s: trial(sigma, s), cfg.seeds))
        else:
            vals = [trial(sigma, s) for s in cfg.seeds]
        rows.append(ResultRow(float(sigma), float(np.mean(vals)), [float(v) for v in vals],
                              time.perf_counter() - start, cfg.transform,
                              os.path.basename(cfg.image), pipe.levels))
    return rows


def format_table(rows: list[ResultRow], fmt: str = "text", timing: bool = False) -> str:
    """Render rows as a text table, CSV or JSON.

    Timing is left out unless requested, so repeated runs give identical output.
    """
    if fmt == "json":
        recs = []
        for r in rows:
            d = asdict(r)
            if not timing:
                d.pop("runtime_sec")
            recs.append(d)
        return json.dumps({"noise": NOISE_GENERATOR, "rows": recs}, indent=1)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = ["image", "transform", "levels", "sigma_n", "psnr_mean", "psnr_trials"]
        w.writerow(head + (["runtime_sec"] if timing else []))
        for r in rows:
            line = [r.image, r.transform, r.levels, f"{r.sigma_n:g}", f"{r.psnr_mean:.4f}",
                    " ".join(f"{v:.4f}" for v in r.psnr_per_trial)]
            w.writerow(line + ([f"{r.runtime_sec:.2f}"] if timing else []))
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown table format {fmt!r}")
    if not rows:
        return ""
    lines = [f"{rows[0].image}  {rows[0].transform}  J={rows[0].levels}  "
             f"trials={len(rows[0].psnr_per_trial)}",
             f"{'sigma':>6} {'PSNR':>8}  per-trial" + ("  time(s)" if timing else "")]
    for r in rows:
        per = " ".join(f"{v:.2f}" for v in r.psnr_per_trial)
        line = f"{r.sigma_n:>6g} {r.psnr_mean:>8.2f}  {per}"
        lines.append(line + (f"  {r.runtime_sec:.1f}" if timing else ""))
    return "\n".join(lines) + "\n"


__all__ = [
    "BandInfo", "DEFAULT_SEEDS", "ExperimentConfig", "KERNEL_BACKEND", "NOISE_GENERATOR",
    "NoiseModel", "Pipeline", "ResultRow", "ShrinkPlan", "TRANSFORMS", "add_gaussian_noise",
    "bivariate_shrink", "default_levels", "dtcwt_plan", "format_table", "framelet_plan",
    "get_kernel", "mse", "psnr", "run_experiment", "shrink_factor", "standard_normal",
]
