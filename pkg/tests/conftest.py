import numpy as np
import pytest
from scipy.optimize import root

from ggdfit.model import ParamTriple, Sample, dl_dalpha, dl_dgamma
from ggdfit.series import SeriesConfig


def transform_draws(theta: ParamTriple, size: int, rng) -> np.ndarray:
    """Exact generalized-Gamma draws via the power transform.

    If Y ~ Gamma(alpha/gamma, 1) then X = Y**(1/gamma) / beta has the
    target density: substituting u = (beta*x)**gamma in the density shows
    (beta*X)**gamma ~ Gamma(alpha/gamma, 1). Used as an independent oracle
    sampler; the package's SIR generator never sees this route.
    """
    y = rng.gamma(theta.alpha / theta.gamma, 1.0, size=size)
    return y ** (1.0 / theta.gamma) / theta.beta


def random_theta(rng, lo=(0.8, 0.5, 0.7), hi=(3.0, 4.0, 2.5)) -> ParamTriple:
    return ParamTriple(*(rng.uniform(a, b) for a, b in zip(lo, hi)))


def random_state(rng, n=100):
    """A (sample, evaluation point) pair with both drawn at random."""
    truth = random_theta(rng)
    sample = Sample(transform_draws(truth, n, rng))
    return sample, random_theta(rng)


def dl_dalpha_truncation_budget(s: Sample, theta: ParamTriple, m: int) -> float:
    """Provable bias bound of the series-truncated dl_dalpha versus the
    exact derivative.

    The digamma tail sum_{k>=M} (x-1)/((k+1)(k+x)) is bounded in magnitude
    by |x-1| / (M * min(1, x)); the derivative scales it by n/gamma. Any
    finite-difference comparison of the truncated analytic derivative
    against the exact log-likelihood carries this irreducible offset.
    """
    x = theta.alpha / theta.gamma
    return s.n / theta.gamma * abs(x - 1.0) / (m * min(1.0, x))


def dl_dgamma_truncation_budget(s: Sample, theta: ParamTriple, m: int) -> float:
    """Same digamma-tail bound propagated through dl_dgamma's n*a/g^2 factor."""
    x = theta.alpha / theta.gamma
    return s.n * theta.alpha / theta.gamma**2 * abs(x - 1.0) / (m * min(1.0, x))


def dl_dbeta(s: Sample, theta: ParamTriple) -> float:
    """Exact beta derivative: n*a/b - g*b^(g-1)*sum x^g (no series term)."""
    a, b, g = theta.astuple()
    return s.n * a / b - g * b ** (g - 1.0) * s.pow_sum(g)


def truncated_stationary_point(
    s: Sample, cfg: SeriesConfig, start: ParamTriple
) -> ParamTriple:
    """Zero of the series-truncated gradient field; this is the exact fixed
    point of both iterative estimators at the given truncation length."""

    def grad(u):
        theta = ParamTriple(*np.exp(u))
        return [
            dl_dalpha(s, theta, cfg),
            dl_dbeta(s, theta),
            dl_dgamma(s, theta, cfg),
        ]

    sol = root(grad, np.log(start.astuple()), method="hybr", options={"xtol": 1e-13})
    assert sol.success, sol.message
    return ParamTriple(*np.exp(sol.x))


@pytest.fixture(scope="session")
def canonical_sample() -> Sample:
    """n=1000 draws from the (2, 3, 2) target, fixed stream."""
    rng = np.random.default_rng(424242)
    return Sample(transform_draws(ParamTriple(2.0, 3.0, 2.0), 1000, rng))
