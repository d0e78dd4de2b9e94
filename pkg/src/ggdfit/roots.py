"""Real-root extraction for the surrogate equations (degree <= 4).

Roots are found in closed form (stable quadratic formula, Cardano cubic,
depressed quartic + resolvent cubic) rather than via eigenvalues. Closed
forms lose roots when coefficients span many decades, so candidates are
also regenerated from deflated quotients, every candidate is polished with
damped Newton steps against the original polynomial, and only candidates
meeting the residual contract

    |p(r)| <= 1e-10 * max|coeff| * max(1, |r|)^degree

are returned.
"""

import math
from dataclasses import dataclass

from .exceptions import DegenerateInputError, NoAdmissibleRootError

# A conjugate pair counts as a real double root when the imaginary part is
# below this scale; quartic closed forms generate spurious tiny imaginaries.
_IMAG_TOL = 1e-9
# Roots closer than this are merged (keep the smaller residual).
_MERGE_TOL = 1e-9
_RESIDUAL_SCALE = 1e-10


@dataclass(frozen=True)
class RealRoots:
    """Real solutions of one polynomial, ascending, with |p(root)| residuals."""

    roots: tuple
    residuals: tuple

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)


def residual_bound(coeffs, root: float) -> float:
    """Residual contract for one returned root: scale- and size-aware."""
    degree = len(coeffs) - 1
    return _RESIDUAL_SCALE * max(abs(c) for c in coeffs) * max(1.0, abs(root)) ** degree


def _horner(coeffs, x):
    acc = 0.0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _derivative(coeffs):
    n = len(coeffs) - 1
    return tuple(c * (n - i) for i, c in enumerate(coeffs[:-1]))


def _polish(coeffs, r):
    """Damped Newton refinement; returns (root, |p(root)|)."""
    deriv = _derivative(coeffs)
    fr = _horner(coeffs, r)
    for _ in range(60):
        if fr == 0.0 or not math.isfinite(r):
            break
        dfr = _horner(deriv, r)
        if dfr == 0.0 or not math.isfinite(dfr):
            break
        step = fr / dfr
        moved = False
        for _ in range(10):
            cand = r - step
            fc = _horner(coeffs, cand)
            if abs(fc) < abs(fr):
                r, fr = cand, fc
                moved = True
                break
            step *= 0.5
        if not moved:
            break
    return r, abs(fr)


def _deflate(coeffs, r):
    """Synthetic division by (x - r), remainder dropped."""
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(c + r * out[-1])
    return tuple(out)


def _quadratic_factor_real(b: float, c: float):
    """Real roots of the monic factor y^2 + b*y + c, rejecting complex pairs."""
    disc = b * b - 4.0 * c
    if disc < 0.0:
        if math.sqrt(-disc) / 2.0 <= _IMAG_TOL * (1.0 + abs(b / 2.0)):
            return [-b / 2.0]
        return []
    if disc == 0.0:
        return [-b / 2.0]
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    if q == 0.0:
        r = math.sqrt(-c) if c < 0 else 0.0
        return [r, -r]
    return [q, c / q]


def _cubic_real(a: float, b: float, c: float, d: float):
    """Real roots of a*x^3 + ... + d with a != 0 (Cardano/trigonometric)."""
    b, c, d = b / a, c / a, d / a
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc > 0.0:
        sq = math.sqrt(disc)
        u = math.copysign(abs(-q / 2.0 + sq) ** (1.0 / 3.0), -q / 2.0 + sq)
        v = math.copysign(abs(-q / 2.0 - sq) ** (1.0 / 3.0), -q / 2.0 - sq)
        return [u + v - shift]
    if p == 0.0 and q == 0.0:
        return [-shift]
    if disc == 0.0:
        return [3.0 * q / p - shift, -3.0 * q / (2.0 * p) - shift]
    # Three distinct real roots.
    rho = math.sqrt(-p * p * p / 27.0)
    theta = math.acos(max(-1.0, min(1.0, -q / (2.0 * rho))))
    mag = 2.0 * math.sqrt(-p / 3.0)
    return [
        mag * math.cos((theta + 2.0 * math.pi * k) / 3.0) - shift for k in (0, 1, 2)
    ]


def _quartic_candidates(coeffs):
    """Depressed-quartic factorization into two quadratics (resolvent cubic)."""
    d4, d3, d2, d1, d0 = coeffs
    a, b, c, d = d3 / d4, d2 / d4, d1 / d4, d0 / d4
    # Depress: x = y - a/4 gives y^4 + p*y^2 + q*y + r.
    p = b - 3.0 * a * a / 8.0
    q = c - a * b / 2.0 + a**3 / 8.0
    r = d - a * c / 4.0 + a * a * b / 16.0 - 3.0 * a**4 / 256.0
    shift = a / 4.0

    ys = []
    if abs(q) <= 1e-14 * max(1.0, abs(p), abs(r)):
        # Biquadratic in y^2.
        for z in _quadratic_factor_real(p, r):
            if z > 0.0:
                ys.extend([math.sqrt(z), -math.sqrt(z)])
            elif z > -(_IMAG_TOL * _IMAG_TOL):
                ys.append(0.0)
    else:
        # Resolvent cubic 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0; its
        # largest real root is positive because the value at m = 0 is -q^2.
        m = max(_cubic_real(8.0, 8.0 * p, 2.0 * p * p - 8.0 * r, -q * q))
        if m <= 0.0:
            m = abs(q)  # rounding pushed it non-positive; polish will rescue
        s = math.sqrt(2.0 * m)
        half = p / 2.0 + m
        ys.extend(_quadratic_factor_real(-s, half + q / (2.0 * s)))
        ys.extend(_quadratic_factor_real(s, half - q / (2.0 * s)))
    return [y - shift for y in ys]


def _closed_form_candidates(coeffs):
    degree = len(coeffs) - 1
    if degree == 1:
        return [-coeffs[1] / coeffs[0]]
    if degree == 2:
        return _quadratic_factor_real(coeffs[1] / coeffs[0], coeffs[2] / coeffs[0])
    if degree == 3:
        return _cubic_real(*coeffs)
    return _quartic_candidates(coeffs)


def _gather_candidates(coeffs, out):
    """Closed-form candidates of `coeffs` plus those of deflated quotients.

    Deflating by the best root of the current polynomial and re-solving the
    quotient recovers roots that the one-shot closed form loses when the
    root magnitudes span many decades.
    """
    cands = _closed_form_candidates(coeffs)
    if not cands:
        return
    out.extend(cands)
    if len(coeffs) <= 2:
        return
    best, best_score = None, math.inf
    for c in cands:
        r, res = _polish(coeffs, c)
        if not math.isfinite(r):
            continue
        score = res / max(1.0, abs(r)) ** (len(coeffs) - 1)
        if score < best_score:
            best, best_score = r, score
    if best is None:
        return
    _gather_candidates(_deflate(coeffs, best), out)


def _bisect(coeffs, lo, hi, flo):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fmid = _horner(coeffs, mid)
        if fmid == 0.0:
            return mid
        if (flo < 0.0) == (fmid < 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _sign_change_sweep(coeffs, found):
    """Catch simple roots the closed forms lost: bracket every sign change
    of p between consecutive critical points and bisect."""
    crit = []
    _gather_candidates(_derivative(coeffs), crit)
    deriv = _derivative(coeffs)
    crit = sorted({_polish(deriv, c)[0] for c in crit if math.isfinite(c)})
    bound = 1.0 + max(abs(c) for c in coeffs[1:]) / abs(coeffs[0])
    points = [-bound] + [c for c in crit if -bound < c < bound] + [bound]
    values = [_horner(coeffs, p) for p in points]
    extra = []
    for (lo, flo), (hi, fhi) in zip(zip(points, values), zip(points[1:], values[1:])):
        if flo == 0.0 or fhi == 0.0 or (flo < 0.0) == (fhi < 0.0):
            continue
        if any(lo <= r <= hi for r in found):
            continue
        extra.append(_bisect(coeffs, lo, hi, flo))
    return extra


def _finish(coeffs, candidates, sweep=False):
    """Polish against the original polynomial, filter by the residual
    contract, merge near-duplicates, sort ascending."""
    polished = []
    for c in candidates:
        if not math.isfinite(c):
            continue
        r, res = _polish(coeffs, c)
        if math.isfinite(r) and res <= residual_bound(coeffs, r):
            polished.append((r, res))
    if sweep:
        for c in _sign_change_sweep(coeffs, [r for r, _ in polished]):
            r, res = _polish(coeffs, c)
            if math.isfinite(r) and res <= residual_bound(coeffs, r):
                polished.append((r, res))
    polished.sort(key=lambda pair: pair[0])
    kept = []
    for r, res in polished:
        if kept and abs(r - kept[-1][0]) <= _MERGE_TOL * (1.0 + abs(r)):
            if res < kept[-1][1]:
                kept[-1] = (r, res)
        else:
            kept.append((r, res))
    return RealRoots(
        roots=tuple(r for r, _ in kept),
        residuals=tuple(res for _, res in kept),
    )


def solve_quadratic_real(a: float, b: float, c: float) -> RealRoots:
    """All real roots of a*x^2 + b*x + c, cancellation-free.

    Falls back to the linear equation when a = 0. Returns an empty root set
    for a negative discriminant or for the inconsistent case a = b = 0,
    c != 0; raises `DegenerateInputError` when all coefficients vanish.
    """
    if a == 0.0:
        if b == 0.0:
            if c == 0.0:
                raise DegenerateInputError("all quadratic coefficients are zero")
            return RealRoots(roots=(), residuals=())
        return _finish((b, c), [-c / b])
    return _finish((a, b, c), _quadratic_factor_real(b / a, c / a))


def solve_quartic_real(
    d4: float, d3: float, d2: float, d1: float, d0: float
) -> RealRoots:
    """All real roots of d4*x^4 + d3*x^3 + d2*x^2 + d1*x + d0.

    Exactly-zero leading coefficients fall through to the cubic, quadratic
    and linear solvers. Every returned root is Newton-polished against the
    original coefficients and meets the residual contract.
    """
    if d4 == 0.0:
        if d3 == 0.0:
            return solve_quadratic_real(d2, d1, d0)
        coeffs = (d3, d2, d1, d0)
    else:
        coeffs = (d4, d3, d2, d1, d0)
    candidates = []
    _gather_candidates(coeffs, candidates)
    if coeffs[-1] != 0.0:
        # The reversed polynomial has reciprocal roots; solving it recovers
        # tiny roots that the direct factorization loses to cancellation.
        mirrored = []
        _gather_candidates(tuple(reversed(coeffs)), mirrored)
        candidates.extend(1.0 / c for c in mirrored if c != 0.0)
    return _finish(coeffs, candidates, sweep=True)


def select_admissible_root(roots: RealRoots, lower: float, upper: float) -> float:
    """Largest root strictly inside (lower, upper); the iteration's update.

    Raises `NoAdmissibleRootError` (carrying the interval and all candidate
    roots) when the interval contains none.
    """
    if not lower < upper:
        raise ValueError(f"empty interval ({lower!r}, {upper!r})")
    admissible = [r for r in roots.roots if lower < r < upper]
    if not admissible:
        raise NoAdmissibleRootError(lower, upper, roots.roots)
    return max(admissible)
