"""Approximate e^{At} for stable A by truncated generalized-Laguerre
series with certified L2 error bounds.

Set LAGEXPM_BACKEND=numpy|numba|auto before import to pick the kernel
backend (auto prefers the compiled kernels and falls back to numpy).
"""

from ._kernels import backend_name
from .errors import (
    AccuracyError,
    AccuracyWarning,
    BracketError,
    ConvergenceError,
    DomainError,
    LagexpmError,
    NumericalError,
    ParameterError,
    ShapeError,
    StabilityError,
)
from .experiments import ExperimentReport, run_experiment
from .generators import (
    LadderConfig,
    SpectrumSampleConfig,
    build_ladder_matrix,
    sample_spectrum,
)
from .matrix import (
    EigenSystem,
    ErrorBounds,
    LaguerreSeries,
    direct_error_oracle,
    eigendecompose,
    error_report,
    eval_series,
    gauss_laguerre_rule,
    is_stable,
    series_coeffs_alpha0,
    series_coeffs_general,
)
from .optimize import (
    OptimizationResult,
    dphi_dtau,
    find_tau0,
    minimize_phi,
    phi,
    psi,
)
from .params import N_MAX, BasisParams, Spectrum, as_spectrum
from .scalar import (
    ScalarCoeffSeq,
    d_coeff,
    dzeta_dtau,
    eval_laguerre_fn,
    eval_laguerre_poly,
    hyp2f1_terminating,
    q_coeff,
    s_coeff,
    s_coeff_seq_alpha0,
    zeta,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "AccuracyWarning",
    "BasisParams",
    "BracketError",
    "ConvergenceError",
    "DomainError",
    "EigenSystem",
    "ErrorBounds",
    "ExperimentReport",
    "LadderConfig",
    "LagexpmError",
    "LaguerreSeries",
    "N_MAX",
    "NumericalError",
    "OptimizationResult",
    "ParameterError",
    "ScalarCoeffSeq",
    "ShapeError",
    "Spectrum",
    "SpectrumSampleConfig",
    "StabilityError",
    "as_spectrum",
    "backend_name",
    "build_ladder_matrix",
    "d_coeff",
    "direct_error_oracle",
    "dphi_dtau",
    "dzeta_dtau",
    "eigendecompose",
    "error_report",
    "eval_laguerre_fn",
    "eval_laguerre_poly",
    "eval_series",
    "find_tau0",
    "gauss_laguerre_rule",
    "hyp2f1_terminating",
    "is_stable",
    "minimize_phi",
    "phi",
    "psi",
    "q_coeff",
    "run_experiment",
    "s_coeff",
    "s_coeff_seq_alpha0",
    "sample_spectrum",
    "series_coeffs_alpha0",
    "series_coeffs_general",
    "zeta",
    "__version__",
]
