"""Quadrature rules with jump corrections for piecewise-smooth integrands."""

from .correction import (
    CorrectionContext,
    build_regularized,
    corrected_grid_rule,
    corrected_integrate_analytic,
    corrected_integrate_grid,
    correction_tail_integral,
    jump_taylor_eval,
    theorem1_error_bound,
)
from .detect import DetectionResult, estimate_jumps, locate_discontinuity
from .functions import BUILTIN_NAMES, TestProblem, get_problem, polynomial_problem
from .harness import StudyConfig, exact_integral_oracle, refinement_study
from .model import (
    ConfigurationError,
    GridSamples,
    Interval,
    JumpData,
    NoDiscontinuityError,
    OracleError,
    PiecewiseFunction,
    QuadratureError,
    QuadratureRule,
    RefinementReport,
    eval_piecewise,
    jumps_from_analytic,
)
from .rules import (
    Method,
    gauss_legendre_composite,
    gauss_legendre_integrate,
    gauss_legendre_rule,
    legendre_poly_and_deriv,
    parse_method,
    simpson13_composite,
    simpson38_composite,
    trapezoid_composite,
)

__version__ = "0.1.0"
