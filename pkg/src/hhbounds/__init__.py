"""Certified Hermite-Hadamard type bounds for generalized convex functions."""

from .cheb import (LINEAR01, ChebyshevSystem, check_chebyshev, interpolant, make_system, omega_det,
                   ratio_inverse)
from .classic import c_coeffs, classic_bounds, xi_point
from .errmodel import (ZERO, CallableError, ConstantError, DyadicErrorModel, ErrorModel, MeasuredResidual,
                       PowerMeasure2, PowerMeasure3, beta_fn, dist_to_integers, dyadic_eta, phi_kernel,
                       phi_kernel_detail, phi_weighted_integral, power_eta2, power_eta3)
from .errors import (ChebyshevError, ConfigError, ContractError, DegeneracyError, EvaluationError,
                     GeneratorError, HHError, InputError, RangeError)
from .functions import Interval, RealFunction, from_callable, linear_combination, make_function
from .lower import (cor4c2_error, i_double_integral, j_functional, lower_bound_cor2hp1, lower_bound_cor4c2,
                    lower_bound_thm3, lower_bound_thm4, lower_error_E)
from .meansys import MeanSystem, check_reproducing, lift_weighted_system, partition_sums
from .measure import (QuadratureConfig, UnitMeasure, atomic, first_moment, integrate, lebesgue,
                      s_functional, with_density)
from .report import BoundReport
from .residual import convexity_residual, is_omega_convex, jensen_eta, jensen_residual, measured_eps
from .upper import (upper_bound_cor6a, upper_bound_cor6b, upper_bound_thm5, upper_bound_thm6,
                    upper_error_thm5)

__version__ = "0.1.0"

__all__ = [
    "LINEAR01", "ChebyshevSystem", "check_chebyshev", "interpolant", "make_system", "omega_det",
    "ratio_inverse", "c_coeffs", "classic_bounds", "xi_point", "ZERO", "CallableError", "ConstantError",
    "DyadicErrorModel", "ErrorModel", "MeasuredResidual", "PowerMeasure2", "PowerMeasure3", "beta_fn",
    "dist_to_integers", "dyadic_eta", "phi_kernel", "phi_kernel_detail", "phi_weighted_integral",
    "power_eta2", "power_eta3", "ChebyshevError", "ConfigError", "ContractError", "DegeneracyError",
    "EvaluationError", "GeneratorError", "HHError", "InputError", "RangeError", "Interval", "RealFunction",
    "from_callable", "linear_combination", "make_function", "cor4c2_error", "i_double_integral",
    "j_functional", "lower_bound_cor2hp1", "lower_bound_cor4c2", "lower_bound_thm3", "lower_bound_thm4",
    "lower_error_E", "MeanSystem", "check_reproducing", "lift_weighted_system", "partition_sums",
    "QuadratureConfig", "UnitMeasure", "atomic", "first_moment", "integrate", "lebesgue", "s_functional",
    "with_density", "BoundReport", "convexity_residual", "is_omega_convex", "jensen_eta", "jensen_residual",
    "measured_eps", "upper_bound_cor6a", "upper_bound_cor6b", "upper_bound_thm5", "upper_bound_thm6",
    "upper_error_thm5",
]
