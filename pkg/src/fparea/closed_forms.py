"""Closed-form quantities for the first-passage pair (tau, A).

Everything here is a direct double-precision evaluation of an explicit
formula: the inverse Gaussian law of tau, the zero-drift area density, the
low-order area moments, the exact correlation in gamma = mu*x, the
discounted-area transform, and the expected time average.  This layer is
the oracle both the symbolic moment engine and the simulator are tested
against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quad import QuadResult, integrate_exp_tail

# Limits of the correlation as gamma -> infinity and gamma -> 0+, and its
# global maximum, attained at gamma = 3/2.  The curve is unimodal, not
# monotone: it rises from sqrt(4/5) to sqrt(7/8), then falls through
# sqrt(4/5) again at gamma = 12 on its way down to sqrt(3/4).
RHO_LIMIT_LARGE_DRIFT = math.sqrt(3.0 / 4.0)
RHO_LIMIT_ZERO_DRIFT = math.sqrt(4.0 / 5.0)
RHO_MAX = math.sqrt(7.0 / 8.0)
# The expected time average tends to x/2 as mu -> infinity.
TIME_AVERAGE_FLOOR_FACTOR = 0.5

_FPA0_NORM = 2.0 ** (1.0 / 3.0) / (3.0 ** (2.0 / 3.0) * math.gamma(1.0 / 3.0))


@dataclass(frozen=True)
class ModelParams:
    """Starting point and drift of X(t) = x - mu*t + B_t.

    mu = 0 is admitted at construction for the zero-drift simulation
    regime; operations that need mu > 0 check it themselves.
    """

    x: float
    mu: float

    def __post_init__(self):
        if not self.x > 0:
            raise ValueError(f"x must be positive, got {self.x}")
        if not self.mu >= 0:
            raise ValueError(f"mu must be nonnegative, got {self.mu}")


def _require_drift(params: ModelParams) -> None:
    if params.mu <= 0:
        raise ValueError(f"mu must be positive here, got {params.mu}")


def fpt_laplace(params: ModelParams, lam: float) -> float:
    """E[exp(-lam * tau)] = exp(-x*(sqrt(mu^2 + 2*lam) - mu)); 1 at lam = 0."""
    if lam < 0:
        raise ValueError(f"lambda must be nonnegative, got {lam}")
    root = math.sqrt(params.mu * params.mu + 2.0 * lam)
    return math.exp(-params.x * (root - params.mu))


def fpt_density(params: ModelParams, t: float) -> float:
    """Inverse Gaussian density x/sqrt(2 pi t^3) * exp(-(x - mu t)^2 / 2t)."""
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    dev = params.x - params.mu * t
    return params.x / math.sqrt(2.0 * math.pi * t**3) * math.exp(-dev * dev / (2.0 * t))


def fpa_density_zero_drift(x: float, a: float) -> float:
    """Density of the first-passage area at zero drift.

    f(a) = 2^(1/3)/(3^(2/3) Gamma(1/3)) * x * a^(-4/3) * exp(-2 x^3 / 9a).
    The a^(-4/3) tail makes every moment infinite.
    """
    if x <= 0 or a <= 0:
        raise ValueError(f"x and a must be positive, got x={x}, a={a}")
    return _FPA0_NORM * x * a ** (-4.0 / 3.0) * math.exp(-2.0 * x**3 / (9.0 * a))


def _area_bracket(x: float, r: float) -> float:
    # x^2/(2r) + x/(2r^2); shared between mean_fpa and w_joint so that
    # w_joint at lambda1 = 0 equals mean_fpa bitwise, not merely closely:
    # IEEE round-to-nearest gives sqrt(mu*mu) == mu exactly.
    return x * x / (2.0 * r) + x / (2.0 * (r * r))


def mean_fpa(params: ModelParams) -> float:
    """E[A] = x^2/(2 mu) + x/(2 mu^2)."""
    _require_drift(params)
    return _area_bracket(params.x, params.mu)


def second_moment_fpa(params: ModelParams) -> float:
    """E[A^2] = x^4/(4 mu^2) + 5x^3/(6 mu^3) + 5x^2/(4 mu^4) + 5x/(4 mu^5)."""
    _require_drift(params)
    x, mu = params.x, params.mu
    return (
        x**4 / (4.0 * mu**2)
        + 5.0 * x**3 / (6.0 * mu**3)
        + 5.0 * x**2 / (4.0 * mu**4)
        + 5.0 * x / (4.0 * mu**5)
    )


def var_fpa(params: ModelParams) -> float:
    """Var[A] = x^3/(3 mu^3) + x^2/mu^4 + 5x/(4 mu^5)."""
    _require_drift(params)
    x, mu = params.x, params.mu
    return x**3 / (3.0 * mu**3) + x**2 / mu**4 + 5.0 * x / (4.0 * mu**5)


def mean_tau_a(params: ModelParams) -> float:
    """E[tau * A] = x^3/(2 mu^2) + x^2/mu^3 + x/mu^4."""
    _require_drift(params)
    x, mu = params.x, params.mu
    return x**3 / (2.0 * mu**2) + x**2 / mu**3 + x / mu**4


def rho_exact(gamma: float) -> float:
    """Correlation of (tau, A) as a function of gamma = mu*x.

    sqrt((3 g^2 + 12 g + 12)/(4 g^2 + 12 g + 15)).  Tends to
    RHO_LIMIT_ZERO_DRIFT as gamma -> 0+ and RHO_LIMIT_LARGE_DRIFT as
    gamma -> infinity, but is not monotone between them: the derivative
    of rho^2 is proportional to -(2*gamma - 3)(gamma + 2), so the curve
    peaks at RHO_MAX for gamma = 3/2 and only drops below the zero-drift
    limit past gamma = 12.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    g = gamma
    return math.sqrt((3.0 * g * g + 12.0 * g + 12.0) / (4.0 * g * g + 12.0 * g + 15.0))


def w_joint(params: ModelParams, lambda1: float) -> float:
    """Discounted area E[A * exp(-lambda1 * tau)].

    exp(mu*x - x*r) * (x^2/(2r) + x/(2r^2)) with r = sqrt(mu^2 + 2*lambda1).
    At lambda1 = 0 this is exactly mean_fpa: r collapses to mu and the
    exponent to 0.0, both without rounding.
    """
    if lambda1 < 0:
        raise ValueError(f"lambda1 must be nonnegative, got {lambda1}")
    _require_drift(params)
    x, mu = params.x, params.mu
    root = math.sqrt(mu * mu + 2.0 * lambda1)
    return math.exp(mu * x - x * root) * _area_bracket(x, root)


def expected_time_average(params: ModelParams, tol: float = 1e-10) -> float:
    """E[A/tau] = (x/2) * (1 + integral of exp(-s*x)/(s+mu) over s > 0).

    Always at least x/2, decreasing in mu; diverges as mu -> 0+.
    Quadrature failures propagate.
    """
    _require_drift(params)
    tail: QuadResult = integrate_exp_tail(params.x, params.mu, tol)
    return TIME_AVERAGE_FLOOR_FACTOR * params.x * (1.0 + tail.value)
