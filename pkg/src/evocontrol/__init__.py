"""Certified existence bounds for semilinear evolution equations.

The package turns an approximate trajectory plus three scalar estimators
(datum, differential and integral error) into a certified tube around an
exact solution, via a scalar control inequality. The concrete setting is
the Dirichlet reaction problem on (0, pi) with a power nonlinearity:
spectral reductions give the approximate trajectories, the control
system gives rigorous lower bounds on the lifespan, a positivity
functional gives upper bounds, and independent reference solvers and
verification routines cross-check everything.
"""

from .control import (
    ClosedFormBound,
    ControlProblem,
    ErrorEstimators,
    PolynomialGrowth,
    SemigroupEstimator,
    closed_form_bound,
    control_rhs,
    integral_estimator_eval,
    r_closed,
    tn_closed,
)
from .errors import (
    BracketError,
    EvocontrolError,
    GridDisagreementError,
    GrowthDomainError,
    NotApplicableError,
    OutOfDomainError,
    QuadratureError,
)
from .fd import FdConfig, fd_blowup_time, limit_profile, limit_profile_check
from .galerkin import (
    GalerkinBasis,
    GalerkinModel,
    build_model,
    epsilon_hat,
    growth_estimator,
    initial_coords,
    vector_field,
)
from .heat import (
    C_K,
    C_N,
    SPEC_VERSION,
    HeatScenario,
    ScenarioResult,
    basic_bounds,
    critical_amplitude,
    empirical_lower_curve,
    limit_uncertainty,
    rescaled_limit,
    run_scenario,
    table_rows,
)
from .kaplan import (
    KaplanInput,
    comparison_blowup_time,
    comparison_solution,
    kaplan_time,
    kaplan_time_by_quadrature,
    q_of_sine_coeffs,
    sn_iteration,
)
from .ode import (
    BLOW_UP,
    DOMAIN_EXIT,
    REACHED_HORIZON,
    IvpOutcome,
    IvpSpec,
    bisect_parameter,
    integrate,
)
from .picard import (
    FiniteVolterraProblem,
    TrajectoryGrid,
    iterate_and_check,
    verify_heat_scenario,
    volterra_apply,
)
from .sobolev import (
    algebra_property_test,
    best_ratio,
    convolution_constant,
    ratio_lower_bound,
    sobolev_report,
)
from .wave import (
    WaveDatum,
    exact_solution_sup,
    wave_growth_bound,
    wave_theta,
    wave_tn,
)

__version__ = "0.1.0"

__all__ = [
    "BLOW_UP",
    "BracketError",
    "C_K",
    "C_N",
    "ClosedFormBound",
    "ControlProblem",
    "DOMAIN_EXIT",
    "ErrorEstimators",
    "EvocontrolError",
    "FdConfig",
    "FiniteVolterraProblem",
    "GalerkinBasis",
    "GalerkinModel",
    "GridDisagreementError",
    "GrowthDomainError",
    "HeatScenario",
    "IvpOutcome",
    "IvpSpec",
    "KaplanInput",
    "NotApplicableError",
    "OutOfDomainError",
    "PolynomialGrowth",
    "QuadratureError",
    "REACHED_HORIZON",
    "SPEC_VERSION",
    "ScenarioResult",
    "SemigroupEstimator",
    "TrajectoryGrid",
    "WaveDatum",
    "algebra_property_test",
    "basic_bounds",
    "best_ratio",
    "bisect_parameter",
    "build_model",
    "closed_form_bound",
    "comparison_blowup_time",
    "comparison_solution",
    "control_rhs",
    "convolution_constant",
    "critical_amplitude",
    "empirical_lower_curve",
    "epsilon_hat",
    "exact_solution_sup",
    "fd_blowup_time",
    "growth_estimator",
    "initial_coords",
    "integral_estimator_eval",
    "integrate",
    "iterate_and_check",
    "kaplan_time",
    "kaplan_time_by_quadrature",
    "limit_profile",
    "limit_profile_check",
    "limit_uncertainty",
    "q_of_sine_coeffs",
    "r_closed",
    "ratio_lower_bound",
    "rescaled_limit",
    "run_scenario",
    "sn_iteration",
    "sobolev_report",
    "table_rows",
    "tn_closed",
    "vector_field",
    "verify_heat_scenario",
    "volterra_apply",
    "wave_growth_bound",
    "wave_theta",
    "wave_tn",
]
