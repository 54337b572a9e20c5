"""First-passage time and area of drifted Brownian motion.

For X(t) = x - mu*t + B_t absorbed at zero, this package computes the
joint moments E[tau^m A^n] of the passage time tau and swept area A as
exact polynomials in x with rational Laurent coefficients in mu, evaluates
the known closed forms (inverse Gaussian passage law, zero-drift area
density, exact correlation, discounted area, expected time average), and
simulates (tau, A) with a Brownian-bridge crossing correction and
reproducible per-path RNG streams.
"""

from .closed_forms import (
    RHO_LIMIT_LARGE_DRIFT,
    RHO_LIMIT_ZERO_DRIFT,
    RHO_MAX,
    ModelParams,
    expected_time_average,
    fpa_density_zero_drift,
    fpt_density,
    fpt_laplace,
    mean_fpa,
    mean_tau_a,
    rho_exact,
    second_moment_fpa,
    var_fpa,
    w_joint,
)
from .laurent import Laurent, Poly, parse_polynomial
from .mc import (
    DegenerateVarianceError,
    EstimatorSummary,
    HistogramDensity,
    InsufficientSamplesError,
    PassageSample,
    SimConfig,
    estimate_correlation,
    estimate_density,
    estimate_joint_moment,
    estimate_time_average,
    run,
    simulate_path,
    write_histogram_csv,
    write_samples_csv,
)
from .moments import (
    MissingMomentError,
    MomentTable,
    assemble_rhs,
    correlation_from_moments,
    joint_moment,
    solve_back_substitution,
    solve_explicit_inverse,
    verify_ode_residual,
)
from .quad import QuadratureError, QuadResult, integrate_density, integrate_exp_tail

__version__ = "0.1.0"

__all__ = [
    "RHO_LIMIT_LARGE_DRIFT",
    "RHO_LIMIT_ZERO_DRIFT",
    "RHO_MAX",
    "DegenerateVarianceError",
    "EstimatorSummary",
    "HistogramDensity",
    "InsufficientSamplesError",
    "Laurent",
    "MissingMomentError",
    "ModelParams",
    "MomentTable",
    "PassageSample",
    "Poly",
    "QuadResult",
    "QuadratureError",
    "SimConfig",
    "assemble_rhs",
    "correlation_from_moments",
    "estimate_correlation",
    "estimate_density",
    "estimate_joint_moment",
    "estimate_time_average",
    "expected_time_average",
    "fpa_density_zero_drift",
    "fpt_density",
    "fpt_laplace",
    "integrate_density",
    "integrate_exp_tail",
    "joint_moment",
    "mean_fpa",
    "mean_tau_a",
    "parse_polynomial",
    "rho_exact",
    "run",
    "second_moment_fpa",
    "simulate_path",
    "solve_back_substitution",
    "solve_explicit_inverse",
    "var_fpa",
    "verify_ode_residual",
    "w_joint",
]
