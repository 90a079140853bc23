"""Reproducing kernels of Sobolev spaces on R^d.

Closed-form kernels, a Fourier-integral quadrature oracle, embedding
constants, worst-case errors of equal-weight quadrature and minimal-norm
interpolation.
"""
from ._backend import BACKEND
from .embedding import (SobolevBounds, embedding_bound_radial, embedding_bounds_sobolev,
                        embedding_norm, embedding_norm_with_error)
from .errors import ConsistencyError, DomainError, NumericalError, SobkerError
from .fourier_oracle import (QuadratureConfig, SymbolFunction, eval_fourier_batch,
                             eval_fourier_kernel, eval_symbol, tail_bound)
from .kernels_closed import (Family, KernelSpec, diag_value, eval_k1s, eval_k1s_residue,
                             eval_kernel, eval_kinf_1d, kernel_matrix)
from .qmc import (Density, PointSet, WceReport, info_complexity_bound, mean_square_bound,
                  representer_h, representer_norm_sq, search_point_set, sobolev_complexity_cap,
                  worst_case_error)
from .recovery import SplineModel, eval_spline, fit_spline, gram_matrix, spline_norm
from .weights import MultiIndexWeights, multi_indices

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ConsistencyError", "Density", "DomainError", "Family", "KernelSpec",
    "MultiIndexWeights", "NumericalError", "PointSet", "QuadratureConfig", "SobkerError",
    "SobolevBounds", "SplineModel", "SymbolFunction", "WceReport", "diag_value",
    "embedding_bound_radial", "embedding_bounds_sobolev", "embedding_norm",
    "embedding_norm_with_error", "eval_fourier_batch", "eval_fourier_kernel", "eval_k1s",
    "eval_k1s_residue", "eval_kernel", "eval_kinf_1d", "eval_spline", "eval_symbol",
    "fit_spline", "gram_matrix", "info_complexity_bound", "kernel_matrix", "mean_square_bound",
    "multi_indices", "representer_h", "representer_norm_sq", "search_point_set",
    "sobolev_complexity_cap", "spline_norm", "tail_bound", "worst_case_error",
]
