"""Truncated series evaluation of the special functions the estimator needs.

The first derivative of log Gamma is evaluated as the explicitly truncated
series

    psi_M(x) = -gamma_0 + sum_{m=0}^{M-1} (1/(m+1) - 1/(m+x))

and its derivative as the truncated inverse-square tail

    sum_{m=0}^{M-1} 1/(m+x)^2

so that the analytic first and second derivatives used by the iteration are
term-by-term consistent at any truncation length M.
"""

from dataclasses import dataclass
from math import lgamma

import numpy as np

# Euler-Mascheroni constant; digits beyond double precision are harmless.
EULER_MASCHERONI = 0.5772156649015328606065120900824024310421593359399235988057672348

# Series terms are summed in fixed-size blocks so very large truncations do
# not materialize one giant array. Block size fixed for bit-reproducibility.
_BLOCK = 1 << 20


@dataclass(frozen=True)
class SeriesConfig:
    """Number of terms kept when truncating the infinite series."""

    truncation_terms: int = 1000

    def __post_init__(self):
        if self.truncation_terms < 1:
            raise ValueError(
                f"truncation_terms must be >= 1, got {self.truncation_terms}"
            )


DEFAULT_SERIES = SeriesConfig()


def euler_mascheroni() -> float:
    """Return the Euler-Mascheroni constant gamma_0 = 0.5772156649... ."""
    return EULER_MASCHERONI


def digamma_series(x: float, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """Truncated series for the digamma function Gamma'(x)/Gamma(x).

    Evaluates -gamma_0 + sum_{m=0}^{M-1} (1/(m+1) - 1/(m+x)) with
    M = ``cfg.truncation_terms``. The truncation error is bounded by
    |x - 1| / M, so the default M = 1000 is adequate for iteration updates
    while accuracy-critical checks should pass M = 10**6 or larger.

    Parameters
    ----------
    x : float
        Argument, must be > 0.
    cfg : SeriesConfig
        Truncation length.
    """
    if x <= 0:
        raise ValueError(f"digamma_series requires x > 0, got {x}")
    m_total = cfg.truncation_terms
    total = 0.0
    for start in range(0, m_total, _BLOCK):
        m = np.arange(start, min(start + _BLOCK, m_total), dtype=np.float64)
        total += float(np.sum(1.0 / (m + 1.0) - 1.0 / (m + x)))
    return total - EULER_MASCHERONI


def inverse_square_tail(x: float, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """Truncated sum_{m=0}^{M-1} 1/(m+x)^2, the derivative of `digamma_series`.

    Strictly decreasing in x; converges to the trigamma function as M grows
    (tail error is about 1/(M + x - 1)).
    """
    if x <= 0:
        raise ValueError(f"inverse_square_tail requires x > 0, got {x}")
    m_total = cfg.truncation_terms
    total = 0.0
    for start in range(0, m_total, _BLOCK):
        m = np.arange(start, min(start + _BLOCK, m_total), dtype=np.float64)
        total += float(np.sum(1.0 / ((m + x) * (m + x))))
    return total


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0.

    Thin positivity-checked wrapper over the platform ``lgamma`` (Lanczos
    class; relative error well under 1e-12 across [1e-3, 1e3]).
    """
    if x <= 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return lgamma(x)
