"""Approximate functional equations for derivatives of Selberg-class L-functions."""

__version__ = "0.1.0"

from .afe import AfeResult, afe_sharp, afe_smoothed, evaluate, reflect_fdfe  # noqa: E402
from .chi import (BellExpansion, ChiAsymptotic, bell_expansion, chi_asymptotic,  # noqa: E402
                  chi_derivative, chi_exact, chi_log_ratio, g_tower)
from .contour import ContourSpec, g_regularizer, gamma_delta_coeff  # noqa: E402
from .datum import (CoefficientSource, DerivedConstants, SelbergDatum, builtin,  # noqa: E402
                    coefficients, derived_constants, make_datum)
from .descriptor import load_descriptor  # noqa: E402
from .errors import (AccuracyError, CapacityError, CoefficientRangeError,  # noqa: E402
                     ContourDegeneracyError, DomainError, HypothesisError, SelbergError,
                     SmoothnessError, ValidationError)
from .kernels import BACKEND  # noqa: E402
from .oracle import (OracleConfig, cauchy_circle, direct_series,  # noqa: E402
                     euler_maclaurin_zeta, residual_suite)
from .smoothing import (SmoothingFunction, base_bump, make_phi_0alpha,  # noqa: E402
                        make_phi_alpha, mellin_K, sharp_cutoff)
from .special import gamma_ratio_asymptotic, haff_sum_1, haff_sum_l, log_gamma  # noqa: E402

__all__ = [
    "AccuracyError", "AfeResult", "BACKEND", "BellExpansion", "CapacityError",
    "ChiAsymptotic", "CoefficientRangeError", "CoefficientSource", "ContourDegeneracyError",
    "ContourSpec", "DerivedConstants", "DomainError", "HypothesisError", "OracleConfig",
    "SelbergDatum", "SelbergError", "SmoothingFunction", "SmoothnessError",
    "ValidationError", "afe_sharp", "afe_smoothed", "base_bump", "bell_expansion",
    "builtin", "cauchy_circle", "chi_asymptotic", "chi_derivative", "chi_exact",
    "chi_log_ratio", "coefficients", "derived_constants", "direct_series",
    "euler_maclaurin_zeta", "evaluate", "g_regularizer", "g_tower", "gamma_delta_coeff",
    "gamma_ratio_asymptotic", "haff_sum_1", "haff_sum_l", "load_descriptor", "log_gamma",
    "make_datum", "make_phi_0alpha", "make_phi_alpha", "mellin_K", "reflect_fdfe",
    "residual_suite", "sharp_cutoff",
]
