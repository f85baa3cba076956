"""Directional complex tight framelets and dual-tree complex wavelets.

Modules
-------
filters
    Frequency-domain filter construction (complex tight framelet banks,
    orthogonal Meyer-type and Kingsbury filters, tensor-product banks).
analysis
    Frame checks, sum rules, vanishing moments, smoothness, separation
    diagnostics and direction counts.
transform
    Multilevel framelet transform through transition/subdivision operators.
dtcwt
    Dual-tree complex wavelet transform, including the hybrid first level.
denoise
    Bivariate shrinkage and denoising experiments.
imgio
    PGM and raw float I/O.
"""
from .filters import (CtfParams, FilterBank1D, FilterBank2D, FreqFilter, TimeFilter, build_ctf,
                      ctf_bank, default_params, special_params, tensor_bank_2d)
from .analysis import check_tight_frame, direction_count
from .transform import CoefficientPyramid, decompose, reconstruct
from .dtcwt import DtCoeffs, DtFilterSet, dtcwt_decompose, dtcwt_reconstruct
from .denoise import Pipeline, bivariate_shrink, psnr, run_experiment
from .imgio import read_pgm, write_pgm

__version__ = "0.1.0"

__all__ = [
    "CoefficientPyramid", "CtfParams", "DtCoeffs", "DtFilterSet", "FilterBank1D", "FilterBank2D",
    "FreqFilter", "Pipeline", "TimeFilter", "bivariate_shrink", "build_ctf", "check_tight_frame",
    "ctf_bank", "decompose", "default_params", "direction_count", "dtcwt_decompose",
    "dtcwt_reconstruct", "psnr", "read_pgm", "reconstruct", "run_experiment", "special_params",
    "tensor_bank_2d", "write_pgm",
]
