"""Parameter estimation for the generalized Gamma distribution.

Two iterative estimators share the same cyclic alpha -> beta -> gamma sweep:

* `run_self` -- the surrogate-equation iteration. Each alpha update solves a
  quadratic and each gamma update a quartic, both obtained by integrating a
  curvature lower bound from the current iterate; beta has a closed form.
  The construction guarantees a log-likelihood ascent and one-sided,
  monotone coordinate paths (after the first step) in CORRECT bound mode.
* `run_newton` -- coordinate-wise Newton-Raphson on the same derivatives,
  used as a comparator. It is not an ascent method and may jump out of the
  positive domain, which halts the run with a recorded error.

`mle_oracle` provides an independent ground-truth maximizer built on
generic numeric optimization (exact digamma, multi-start quasi-Newton plus
a gradient-root polish); it shares no code path with the iterations above.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, root
from scipy.special import digamma as _exact_digamma

from .exceptions import DomainEscapeError, IterationError, NumericError
from .model import (
    CORRECT_BOUNDS,
    BoundConstants,
    ParamTriple,
    Sample,
    dl_dalpha,
    dl_dgamma,
    d2l_dalpha2,
    d2l_dgamma2,
    log_likelihood,
)
from .roots import select_admissible_root, solve_quadratic_real, solve_quartic_real
from .series import DEFAULT_SERIES, EULER_MASCHERONI, SeriesConfig, digamma_series

# Below this absolute gradient the step returns its anchor unchanged,
# avoiding root-selection noise at an exact fixed point.
_GRADIENT_ZERO_TOL = 1e-12


class Algorithm(enum.Enum):
    SELF = "self"
    NEWTON = "newton"


@dataclass(frozen=True)
class StoppingRule:
    """Fixed iteration budget plus an optional sup-norm step tolerance.

    tolerance = 0 (the default) disables early stopping; runs then always
    perform exactly `max_iterations` sweeps.
    """

    max_iterations: int = 200
    tolerance: float = 0.0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance < 0:
            raise ValueError("tolerance must be >= 0")


@dataclass
class IterationTrace:
    """Ordered iterates of one run; index 0 holds the initial values."""

    points: list
    loglik: list
    algorithm: Algorithm

    def param_array(self) -> np.ndarray:
        """Iterates as an (iterations+1, 3) array of (alpha, beta, gamma)."""
        return np.array([p.astuple() for p in self.points], dtype=np.float64)

    def __len__(self):
        return len(self.points)

    @property
    def final(self) -> ParamTriple:
        return self.points[-1]


def alpha_step_coefficients(
    s: Sample,
    theta: ParamTriple,
    cfg: SeriesConfig = DEFAULT_SERIES,
    k: BoundConstants = CORRECT_BOUNDS,
):
    """Quadratic surrogate coefficients (a, b, c) for the alpha update.

    Multiplying the alpha surrogate equation by alpha > 0 gives
    a*alpha^2 + b*alpha + c = 0 with

        a = -basel * n / gamma^2
        b = dl_dalpha(theta) - n/alpha + basel * n * alpha / gamma^2
        c = n
    """
    n = s.n
    g2 = theta.gamma * theta.gamma
    grad = dl_dalpha(s, theta, cfg)
    a = -k.basel * n / g2
    b = grad - n / theta.alpha + k.basel * n * theta.alpha / g2
    return a, b, float(n)


def self_step_alpha(
    s: Sample,
    theta: ParamTriple,
    cfg: SeriesConfig = DEFAULT_SERIES,
    k: BoundConstants = CORRECT_BOUNDS,
) -> float:
    """One surrogate alpha update: largest positive root of the quadratic."""
    if abs(dl_dalpha(s, theta, cfg)) <= _GRADIENT_ZERO_TOL:
        return theta.alpha
    a, b, c = alpha_step_coefficients(s, theta, cfg, k)
    return select_admissible_root(solve_quadratic_real(a, b, c), 0.0, math.inf)


def beta_closed_form(s: Sample, alpha_next: float, gamma_curr: float) -> float:
    """Conditional MLE of beta: (n*alpha / (gamma * sum x_i^gamma))^(1/gamma)."""
    return (s.n * alpha_next / (gamma_curr * s.pow_sum(gamma_curr))) ** (
        1.0 / gamma_curr
    )


def gamma_step_coefficients(
    s: Sample,
    alpha_next: float,
    beta_next: float,
    gamma_curr: float,
    cfg: SeriesConfig = DEFAULT_SERIES,
    k: BoundConstants = CORRECT_BOUNDS,
    indicator_beta: float = None,
):
    """Quartic surrogate coefficients (d4, d3, d2, d1, d0) for the gamma
    update, anchored at gamma_curr.

    Multiplying the gamma surrogate equation by gamma^3 * (2*gamma_curr -
    gamma) clears both poles and yields the quartic. `indicator_beta`
    overrides the beta used inside the branch indicators 1{x_i <=> 1/beta}
    only (compat hook for trajectories that froze the indicators at the
    initial beta); all other terms always use `beta_next`.
    """
    n = s.n
    a_next = alpha_next
    g = gamma_curr
    if indicator_beta is None:
        indicator_beta = beta_next
    x = s.observations
    k3 = (2.0 + k.basel) / 3.0

    # Ties x = 1/beta go to the "<=" branch.
    above = x > 1.0 / indicator_beta
    n_le = float(np.sum(~above))
    with np.errstate(over="ignore"):
        expo = 4.0 * np.exp(
            2.0 * np.maximum(g * np.log(beta_next * x) - 1.0, 0.0)
        )
        s_plus = float(np.sum(expo[above]))

    psi = digamma_series(a_next / g, cfg)
    grad_anchor = (
        n * (1.0 / g + a_next / (g * g) * psi)
        - beta_next**g * float(np.sum(x**g * np.log(beta_next * x)))
    )
    anti_anchor = (
        n * (2.0 / g - a_next * EULER_MASCHERONI / (g * g) + k3 * a_next**2 / g**3)
        - s_plus / g
        + (2.0 / 3.0) * n_le / g
    )

    d4 = -grad_anchor + anti_anchor
    d3 = 2.0 * g * (-d4) - 2.0 * n - (2.0 / 3.0) * n_le - s_plus
    d2 = 2.0 * g * (2.0 * n + (2.0 / 3.0) * n_le) + EULER_MASCHERONI * n * a_next
    d1 = -2.0 * EULER_MASCHERONI * n * a_next * g - k3 * n * a_next**2
    d0 = 2.0 * k3 * n * g * a_next**2
    return d4, d3, d2, d1, d0


def self_step_gamma(
    s: Sample,
    alpha_next: float,
    beta_next: float,
    gamma_curr: float,
    cfg: SeriesConfig = DEFAULT_SERIES,
    k: BoundConstants = CORRECT_BOUNDS,
    indicator_beta: float = None,
) -> float:
    """One surrogate gamma update: largest quartic root in (0, 2*gamma_curr)."""
    anchor = ParamTriple(alpha_next, beta_next, gamma_curr)
    if abs(dl_dgamma(s, anchor, cfg)) <= _GRADIENT_ZERO_TOL:
        return gamma_curr
    coeffs = gamma_step_coefficients(
        s, alpha_next, beta_next, gamma_curr, cfg, k, indicator_beta
    )
    return select_admissible_root(
        solve_quartic_real(*coeffs), 0.0, 2.0 * gamma_curr
    )


def _run(s, theta0, stop, step, algorithm):
    trace = IterationTrace(
        points=[theta0], loglik=[log_likelihood(s, theta0)], algorithm=algorithm
    )
    theta = theta0
    for t in range(1, stop.max_iterations + 1):
        try:
            theta_next = step(theta)
        except Exception as exc:
            raise IterationError(t, trace, exc) from exc
        trace.points.append(theta_next)
        trace.loglik.append(log_likelihood(s, theta_next))
        delta = max(
            abs(a - b) for a, b in zip(theta_next.astuple(), theta.astuple())
        )
        theta = theta_next
        if stop.tolerance > 0 and delta <= stop.tolerance:
            break
    return trace


def run_self(
    s: Sample,
    theta0: ParamTriple,
    stop: StoppingRule = StoppingRule(),
    cfg: SeriesConfig = DEFAULT_SERIES,
    k: BoundConstants = CORRECT_BOUNDS,
    indicator_compat: bool = False,
) -> IterationTrace:
    """Run the surrogate-equation iteration from theta0.

    Each sweep updates alpha (quadratic root), then beta (closed form), then
    gamma (quartic root in (0, 2*gamma_curr)). With indicator_compat=True
    the gamma-step branch indicators are frozen at the initial beta instead
    of being recomputed from the current one (reference-trajectory quirk).

    Raises `IterationError` (carrying the partial trace and the 1-based
    iteration index) if a step fails.
    """
    indicator_beta = theta0.beta if indicator_compat else None

    def step(theta):
        alpha_next = self_step_alpha(s, theta, cfg, k)
        beta_next = beta_closed_form(s, alpha_next, theta.gamma)
        gamma_next = self_step_gamma(
            s, alpha_next, beta_next, theta.gamma, cfg, k, indicator_beta
        )
        return ParamTriple(alpha_next, beta_next, gamma_next)

    return _run(s, theta0, stop, step, Algorithm.SELF)


def newton_step(
    s: Sample, theta: ParamTriple, cfg: SeriesConfig = DEFAULT_SERIES
) -> ParamTriple:
    """One coordinate-wise Newton sweep (alpha, then closed-form beta, then
    gamma, each using the freshest values).

    Raises `DomainEscapeError` if an update leaves the positive domain and
    `NumericError` on a vanishing second derivative.
    """
    curv_a = d2l_dalpha2(s, theta, cfg)
    if abs(curv_a) < 1e-300:
        raise NumericError("second derivative in alpha is numerically zero")
    alpha_next = theta.alpha - dl_dalpha(s, theta, cfg) / curv_a
    if not (math.isfinite(alpha_next) and alpha_next > 0):
        raise DomainEscapeError("alpha", alpha_next)

    beta_next = beta_closed_form(s, alpha_next, theta.gamma)

    probe = ParamTriple(alpha_next, beta_next, theta.gamma)
    curv_g = d2l_dgamma2(s, probe, cfg)
    if abs(curv_g) < 1e-300:
        raise NumericError("second derivative in gamma is numerically zero")
    gamma_next = theta.gamma - dl_dgamma(s, probe, cfg) / curv_g
    if not (math.isfinite(gamma_next) and gamma_next > 0):
        raise DomainEscapeError("gamma", gamma_next)
    return ParamTriple(alpha_next, beta_next, gamma_next)


def run_newton(
    s: Sample,
    theta0: ParamTriple,
    stop: StoppingRule = StoppingRule(),
    cfg: SeriesConfig = DEFAULT_SERIES,
) -> IterationTrace:
    """Run the Newton comparator from theta0; contract as `run_self`."""

    def step(theta):
        return newton_step(s, theta, cfg)

    return _run(s, theta0, stop, step, Algorithm.NEWTON)


def _exact_gradient(s: Sample, a: float, b: float, g: float):
    """Gradient of the log-likelihood using the exact digamma function.

    Deliberately independent of the truncated-series derivatives used by
    the iterations this oracle validates. Overflow at extreme exploration
    points degrades to inf rather than raising.
    """
    x = s.observations
    psi = float(_exact_digamma(a / g))
    with np.errstate(over="ignore"):
        xg = x**g
        b_pow = np.float64(b) ** np.float64(g)
        ga = s.n * (math.log(b) - psi / g) + s.sum_log_x
        gb = s.n * a / b - g * np.float64(b) ** np.float64(g - 1.0) * np.sum(xg)
        gg = s.n * (1.0 / g + a / (g * g) * psi) - b_pow * np.sum(xg * np.log(b * x))
    return np.array([ga, float(gb), float(gg)])


def _newton_polish_gradient(s, point, iters=40):
    """Drive the exact gradient toward zero with damped Newton steps using
    a finite-difference Jacobian; returns the best point seen."""
    point = np.asarray(point, dtype=np.float64)
    grad = _exact_gradient(s, *point)
    best, best_norm = point, float(np.max(np.abs(grad)))
    for _ in range(iters):
        jac = np.empty((3, 3))
        for j in range(3):
            h = 1e-6 * max(1.0, abs(point[j]))
            up, dn = point.copy(), point.copy()
            up[j] += h
            dn[j] -= h
            jac[:, j] = (_exact_gradient(s, *up) - _exact_gradient(s, *dn)) / (2 * h)
        try:
            delta = np.linalg.solve(jac, grad)
        except np.linalg.LinAlgError:
            break
        stepped = False
        scale = 1.0
        for _ in range(20):
            cand = point - scale * delta
            if np.all(cand > 0):
                cand_grad = _exact_gradient(s, *cand)
                cand_norm = float(np.max(np.abs(cand_grad)))
                if cand_norm < best_norm:
                    point, grad = cand, cand_grad
                    best, best_norm = cand, cand_norm
                    stepped = True
                    break
            scale *= 0.5
        if not stepped or best_norm == 0.0:
            break
    return best, best_norm


def mle_oracle(s: Sample, gradient_tol: float = 1e-7) -> ParamTriple:
    """Independent numeric maximizer of the log-likelihood.

    Multi-start bounded quasi-Newton in log-parameter space followed by a
    gradient-root polish; the returned point has gradient sup-norm <=
    `gradient_tol` (raises `NumericError` otherwise). Shares no code with
    the iterative estimators it is used to validate.
    """
    x = s.observations
    mean = float(np.mean(x))
    var = float(np.var(x)) or mean * mean
    alpha0 = min(max(mean * mean / var, 0.05), 50.0)
    beta0 = min(max(mean / var, 0.05), 50.0)

    def neg_ll(u):
        a, b, g = np.exp(u)
        try:
            return -log_likelihood(s, ParamTriple(a, b, g))
        except (OverflowError, ValueError):
            return math.inf

    def neg_grad_log(u):
        a, b, g = np.exp(u)
        return -_exact_gradient(s, a, b, g) * np.exp(u)

    bounds = [(math.log(1e-3), math.log(1e3))] * 3
    candidates = []
    for g0 in (0.5, 1.0, 2.0, 4.0):
        u0 = np.log([alpha0, beta0, g0])
        res = minimize(
            neg_ll,
            u0,
            jac=neg_grad_log,
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": 500, "ftol": 1e-15, "gtol": 1e-12},
        )
        if np.all(np.isfinite(res.x)):
            candidates.append(np.exp(res.x))
    if not candidates:
        raise NumericError("all optimizer starts failed")

    best_point, best_ll = None, -math.inf
    for cand in candidates:
        sol = root(
            lambda u: _exact_gradient(s, *np.exp(u)),
            np.log(cand),
            method="hybr",
            options={"xtol": 1e-13},
        )
        point = np.exp(sol.x) if np.all(np.isfinite(sol.x)) else cand
        point, sup = _newton_polish_gradient(s, point)
        if sup > gradient_tol:
            continue
        ll = log_likelihood(s, ParamTriple(*point))
        if ll > best_ll:
            best_point, best_ll = point, ll
    if best_point is None:
        raise NumericError(
            f"no stationary point reached gradient sup-norm <= {gradient_tol}"
        )
    return ParamTriple(*best_point)
