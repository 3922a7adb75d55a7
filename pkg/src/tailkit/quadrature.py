"""Deterministic quadrature oracles used as ground truth for the estimators
and the closed-form asymptotics.

All integrals are adaptive (QUADPACK through scipy) on log-transformed
coordinates where the integrands are smooth and unimodal; results carry a
zero standard error and the integrator's node count.  A tolerance miss
raises QuadratureError with the achieved estimate attached.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.special import log_ndtr, ndtr

from .claims import ClaimCountSpec
from .errors import DomainError, QuadratureError
from .estimators import METHOD_QUADRATURE, Estimate
from .normal import LOG_SQRT_2PI

_REL_TOL = 1e-9
_QUAD_LIMIT = 400


def _phi(t: float) -> float:
    return math.exp(-0.5 * t * t - LOG_SQRT_2PI)


def _psi(t: float) -> float:
    return float(ndtr(-t))


def _checked_quad(f, lo, hi, rel_tol=_REL_TOL, abs_floor=0.0, limit=_QUAD_LIMIT):
    """quad wrapper returning (value, abserr, neval); raises on tolerance miss."""
    out = quad(f, lo, hi, epsabs=abs_floor, epsrel=rel_tol * 0.1, limit=limit, full_output=1)
    value, abserr, info = out[0], out[1], out[2]
    neval = int(info["neval"])
    if abserr > max(rel_tol * abs(value), abs_floor, 1e-320):
        raise QuadratureError(
            f"quadrature tolerance not reached: value={value}, error={abserr}",
            estimate=value,
            error_bound=abserr,
        )
    return value, abserr, neval


def _estimate(value: float, neval: int) -> Estimate:
    return Estimate(
        value=value,
        std_error=0.0,
        n_samples=max(neval, 1),
        method=METHOD_QUADRATURE,
        seed=0,
    )


def exact_sum2_quadrature(u: float, split_at_half: bool = True) -> Estimate:
    """P(Y1 + Y2 > u) for iid LN(0,1) claims by adaptive quadrature.

    The default decomposition splits at u/2:

        P = 2 * int_0^{u/2} Psi(log(u - y)) f(y) dy + Psi(log(u/2))^2

    with f the LN(0,1) density; the region where both claims exceed u/2 is
    exact.  ``split_at_half=False`` integrates the conditional tail over the
    full range instead, an algebraically identical form used as a
    self-check.  Relative tolerance 1e-9.
    """
    u = float(u)
    if not u > 2e-12:
        raise DomainError(f"threshold must exceed 2e-12, got {u}")
    hi = math.log(u / 2.0)

    def first(x):
        return _psi(math.log(u - math.exp(x))) * _phi(x)

    i1, _, n1 = _checked_quad(first, -np.inf, hi)
    if split_at_half:
        return _estimate(2.0 * i1 + _psi(hi) ** 2, n1)

    def second(t):
        w = math.exp(t)
        y = u - w
        return _psi(t) * _phi(math.log(y)) / y * w

    i2, _, n2 = _checked_quad(second, -np.inf, hi)
    return _estimate(i1 + i2 + _psi(math.log(u)), n1 + n2)


def max_tail_quadrature(n: int, rho: float, u: float) -> Estimate:
    """P(max of n equicorrelated factor-model claims > u) with
    standard-normal idiosyncratics:

        1 - int Phi((log u - rho z)/sqrt(1-rho^2))^n phi(z) dz

    evaluated through the log of the inner CDF so the complement stays
    accurate when the probability is tiny.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n}")
    rho = float(rho)
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"rho must be in [0, 1), got {rho}")
    u = float(u)
    if not u > 0.0:
        raise DomainError(f"threshold must be positive, got {u}")
    a = math.log(u)
    s = math.sqrt(1.0 - rho * rho)

    def f(z):
        return -math.expm1(n * float(log_ndtr((a - rho * z) / s))) * _phi(z)

    value, _, neval = _checked_quad(f, -np.inf, np.inf)
    return _estimate(value, neval)


def max_tail_quadrature_random(counts: ClaimCountSpec, rho: float, u: float) -> Estimate:
    """P(max of N claims > u) for the equicorrelated factor model with a
    random claim count, as the pmf mixture of the fixed-n quadratures.

    The mixture is truncated once the count's moment bound certifies the
    remaining mass is below 1e-12 of the accumulated value (the summand is
    a probability, so P(N > n) bounds the remainder).
    """
    moment = counts.moment_value()
    growth = 1.0 + counts.delta
    upper = counts.support_upper()
    acc = 0.0
    neval = 0
    n = 0
    while True:
        n += 1
        if upper is not None and n > upper:
            break
        p = counts.pmf(n)
        if p > 0.0:
            est = max_tail_quadrature(n, rho, u)
            acc += p * est.value
            neval += est.n_samples
        if upper is None and n >= max(4, int(counts.mean()) + 1) and acc > 0.0:
            if moment * growth ** (-n) < 1e-12 * acc:
                break
        if n >= 100_000:
            raise DomainError("claim-count mixture did not converge")
    return _estimate(acc, max(neval, 1))


def log_bivariate_joint_tail(r: float, a: float, b: float) -> float:
    """log P(Y1 > a, Y2 > b) for jointly log-normal claims whose logs are
    standard bivariate normal with correlation r.

    Computed entirely in the log domain (Laplace rescaling of the integrand)
    so thresholds far beyond linear underflow are exact; relative tolerance
    1e-8 on the log scale.
    """
    r = float(r)
    if not -1.0 < r < 1.0:
        raise DomainError(f"correlation must be in (-1, 1), got {r}")
    a = float(a)
    b = float(b)
    if not (a > 0.0 and b > 0.0):
        raise DomainError("thresholds must be positive")
    alpha, beta = math.log(a), math.log(b)
    s = math.sqrt(1.0 - r * r)

    def g(x):
        return float(log_ndtr(-(beta - r * x) / s)) - 0.5 * x * x - LOG_SQRT_2PI

    # locate the maximum of g on [alpha, inf) with a coarse grid then refine
    span = max(10.0, 2.0 * abs(beta), 2.0 * abs(alpha))
    xs = np.linspace(alpha, alpha + span, 2001)
    gv = np.array([g(x) for x in xs])
    k = int(np.argmax(gv))
    lo = xs[max(k - 1, 0)]
    hi = xs[min(k + 1, len(xs) - 1)]
    for _ in range(60):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if g(m1) < g(m2):
            lo = m1
        else:
            hi = m2
    g_star = g(0.5 * (lo + hi))

    def f(x):
        return math.exp(g(x) - g_star)

    value, _, _ = _checked_quad(f, alpha, np.inf, rel_tol=1e-9)
    return g_star + math.log(value)


def bivariate_joint_tail(r: float, a: float, b: float) -> Estimate:
    """Linear-domain wrapper around ``log_bivariate_joint_tail``; the value
    underflows to 0.0 when the log is below about -690."""
    lv = log_bivariate_joint_tail(r, a, b)
    value = math.exp(lv) if lv >= math.log(1e-300) else 0.0
    return _estimate(value, 1)


def product_tail_exact(sigma1: float, sigma2: float, u: float) -> Estimate:
    """Exact tail Psi(log u / sigma) of exp(sigma1*Z1 + sigma2*Z2) for
    independent standard normal Z's (constant tail perturbations only)."""
    if sigma1 <= 0.0 or sigma2 <= 0.0:
        raise DomainError("sigmas must be positive")
    u = float(u)
    if not u > 0.0:
        raise DomainError(f"threshold must be positive, got {u}")
    sigma = math.hypot(sigma1, sigma2)
    return _estimate(_psi(math.log(u) / sigma), 1)


def log_product_tail_exact(sigma1: float, sigma2: float, u: float) -> float:
    if sigma1 <= 0.0 or sigma2 <= 0.0:
        raise DomainError("sigmas must be positive")
    sigma = math.hypot(sigma1, sigma2)
    return float(log_ndtr(-math.log(float(u)) / sigma))
