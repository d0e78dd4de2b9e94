"""Three-parameter generalized Gamma distribution and its log-likelihood.

Density:

    f(x; alpha, beta, gamma) = beta^alpha * gamma / Gamma(alpha/gamma)
                               * x^(alpha-1) * exp(-(beta*x)^gamma),  x > 0

with alpha, beta, gamma > 0. gamma = 1 recovers the classical Gamma(alpha,
rate beta). Given observations x_1..x_n the log-likelihood is

    l(alpha, beta, gamma) = n*[alpha*log(beta) + log(gamma)
                               - log Gamma(alpha/gamma)]
                            + (alpha-1)*sum(log x_i) - beta^gamma*sum(x_i^gamma)

This module provides l, its first and second partial derivatives in alpha
and gamma (series-truncated, consistent with `ggdfit.series`), the two
curvature lower-bound functions that drive the surrogate iteration, and
moment/CDF utilities used for validation.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .exceptions import NumericError
from .series import (
    EULER_MASCHERONI,
    DEFAULT_SERIES,
    SeriesConfig,
    digamma_series,
    inverse_square_tail,
    log_gamma,
)


@dataclass(frozen=True)
class ParamTriple:
    """Parameter point (alpha, beta, gamma); all strictly positive."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite real, got {v!r}")
            object.__setattr__(self, name, v)

    def astuple(self):
        return (self.alpha, self.beta, self.gamma)

    def __iter__(self):
        return iter(self.astuple())


@dataclass(frozen=True)
class Sample:
    """Immutable observation set with cached count and sum of logs."""

    observations: np.ndarray
    n: int = field(init=False)
    sum_log_x: float = field(init=False)

    def __post_init__(self):
        x = np.asarray(self.observations, dtype=np.float64).reshape(-1)
        if x.size < 1:
            raise ValueError("sample must contain at least one observation")
        if not np.all(np.isfinite(x)) or np.any(x <= 0):
            raise ValueError("all observations must be positive finite reals")
        x = x.copy()
        x.flags.writeable = False
        object.__setattr__(self, "observations", x)
        object.__setattr__(self, "n", int(x.size))
        object.__setattr__(self, "sum_log_x", float(np.sum(np.log(x))))

    def pow_sum(self, g: float) -> float:
        """sum(x_i^g); recomputed per call since g changes every iteration."""
        with np.errstate(over="ignore"):
            return float(np.sum(self.observations**g))


class BoundMode(enum.Enum):
    """Which constant stands in for sum_{m>=1} 1/m^2 inside the bounds.

    CORRECT uses pi^2/6, the actual value of the series, which is what makes
    the lower-bound property hold. PAPER_COMPAT uses pi/6 to reproduce
    reference trajectories computed with that substitution; its bounds may
    sit above the true curvature.
    """

    CORRECT = "correct"
    PAPER_COMPAT = "paper"


@dataclass(frozen=True)
class BoundConstants:
    mode: BoundMode = BoundMode.CORRECT

    @property
    def basel(self) -> float:
        if self.mode is BoundMode.CORRECT:
            return math.pi * math.pi / 6.0
        return math.pi / 6.0


CORRECT_BOUNDS = BoundConstants(BoundMode.CORRECT)
PAPER_COMPAT_BOUNDS = BoundConstants(BoundMode.PAPER_COMPAT)


def _pow(base: float, exponent: float) -> float:
    """base ** exponent with overflow mapped to inf (numpy semantics); the
    likelihood then degrades to -inf instead of raising mid-run."""
    try:
        return base**exponent
    except OverflowError:
        return math.inf


def log_pdf(x: float, theta: ParamTriple) -> float:
    """log f(x; theta) for a single point x > 0."""
    if x <= 0:
        raise ValueError(f"log_pdf requires x > 0, got {x}")
    a, b, g = theta.astuple()
    return (
        a * math.log(b)
        + math.log(g)
        - log_gamma(a / g)
        + (a - 1.0) * math.log(x)
        - _pow(b * x, g)
    )


def log_likelihood(s: Sample, theta: ParamTriple) -> float:
    a, b, g = theta.astuple()
    return (
        s.n * (a * math.log(b) + math.log(g) - log_gamma(a / g))
        + (a - 1.0) * s.sum_log_x
        - _pow(b, g) * s.pow_sum(g)
    )


def dl_dalpha(s: Sample, theta: ParamTriple, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """d l / d alpha = n*[log(beta) - psi(alpha/gamma)/gamma] + sum(log x_i)."""
    a, b, g = theta.astuple()
    return s.n * (math.log(b) - digamma_series(a / g, cfg) / g) + s.sum_log_x


def d2l_dalpha2(s: Sample, theta: ParamTriple, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """d2 l / d alpha2 = -(n/gamma^2) * sum_m 1/(m + alpha/gamma)^2."""
    a, _, g = theta.astuple()
    return -s.n / (g * g) * inverse_square_tail(a / g, cfg)


def _pow_log_sums(s: Sample, b: float, g: float):
    """(sum x^g*log(b*x), sum x^g*log(b*x)^2) for the gamma derivatives."""
    x = s.observations
    lbx = np.log(b * x)
    xg = x**g
    return float(np.sum(xg * lbx)), float(np.sum(xg * lbx * lbx))


def dl_dgamma(s: Sample, theta: ParamTriple, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """d l / d gamma = n*[1/g + (a/g^2)*psi(a/g)] - beta^g*sum(x^g*log(beta*x))."""
    a, b, g = theta.astuple()
    s1, _ = _pow_log_sums(s, b, g)
    return s.n * (1.0 / g + a / (g * g) * digamma_series(a / g, cfg)) - _pow(b, g) * s1


def d2l_dgamma2(s: Sample, theta: ParamTriple, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """Second derivative in gamma.

    n*{-1/g^2 - (2a/g^3)*psi(a/g) - (a^2/g^4)*psi'(a/g)}
    - beta^g * sum(x^g * log(beta*x)^2)
    """
    a, b, g = theta.astuple()
    _, s2 = _pow_log_sums(s, b, g)
    psi = digamma_series(a / g, cfg)
    tail = inverse_square_tail(a / g, cfg)
    return (
        s.n * (-1.0 / g**2 - 2.0 * a / g**3 * psi - a * a / g**4 * tail)
        - _pow(b, g) * s2
    )


def lower_bound_alpha(s: Sample, theta: ParamTriple, k: BoundConstants = CORRECT_BOUNDS) -> float:
    """Curvature lower bound in alpha: -n/alpha^2 - basel*n/gamma^2.

    In CORRECT mode this sits below d2l_dalpha2 everywhere.
    """
    a, _, g = theta.astuple()
    return -s.n / (a * a) - k.basel * s.n / (g * g)


def lower_bound_gamma(
    s: Sample,
    theta: ParamTriple,
    anchor_gamma: float,
    k: BoundConstants = CORRECT_BOUNDS,
) -> float:
    """Curvature lower bound in gamma, anchored at the current iterate.

    Valid on 0 < gamma < 2*anchor_gamma:

        n*[-2/g^2 + 2*a*g0/g^3 - (2+basel)*a^2/g^4]
        - sum_i [ 4*exp(2*max(anchor*log(b*x_i) - 1, 0)) * 1{x_i > 1/b}
                    / (2*anchor - g)^2
                  + (2/3) * 1{x_i <= 1/b} / g^2 ]

    The two data terms come from bounding -e^t and -e^(-t); ties x_i = 1/b
    go to the "<=" branch.
    """
    a, b, g = theta.astuple()
    if not 0.0 < g < 2.0 * anchor_gamma:
        raise ValueError(
            f"gamma={g} outside the bound's validity window (0, {2.0 * anchor_gamma})"
        )
    x = s.observations
    above = x > 1.0 / b
    with np.errstate(over="ignore"):
        expo = 4.0 * np.exp(
            2.0 * np.maximum(anchor_gamma * np.log(b * x) - 1.0, 0.0)
        )
        data = float(
            np.sum(
                np.where(above, expo / (2.0 * anchor_gamma - g) ** 2, 2.0 / (3.0 * g * g))
            )
        )
    smooth = s.n * (
        -2.0 / g**2
        + 2.0 * a * EULER_MASCHERONI / g**3
        - (2.0 + k.basel) * a * a / g**4
    )
    return smooth - data


def moment(theta: ParamTriple, k: int) -> float:
    """E[X^k] = Gamma((alpha+k)/gamma) / (beta^k * Gamma(alpha/gamma))."""
    if k < 1:
        raise ValueError(f"moment order must be a positive integer, got {k}")
    a, b, g = theta.astuple()
    return math.exp(log_gamma((a + k) / g) - log_gamma(a / g) - k * math.log(b))


def numeric_cdf(x: float, theta: ParamTriple) -> float:
    """P(X <= x) by adaptive quadrature; no closed form exists.

    Absolute error <= 1e-8 (raises `NumericError` if the integrator cannot
    certify that). Clamped to [0, 1].
    """
    if x <= 0:
        raise ValueError(f"numeric_cdf requires x > 0, got {x}")
    value, err = quad(
        lambda t: math.exp(log_pdf(t, theta)),
        0.0,
        x,
        epsabs=1e-10,
        epsrel=1e-10,
        limit=200,
    )
    if err > 1e-8:
        raise NumericError(f"CDF quadrature error {err} exceeds 1e-8 at x={x}")
    return min(1.0, max(0.0, value))
