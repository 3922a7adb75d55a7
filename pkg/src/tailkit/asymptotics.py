"""Closed-form tail asymptotics, all evaluated in the log domain.

Covers the tail of a product of two independent log-normal-like factors,
the marginal tail of a common-factor claim, the finite-sum tail, and the
random-sum / random-maximum tails for the factor model and for the plain
log-normal constant.

Prefactor convention for the product tail
-----------------------------------------
Two algebraically inequivalent prefactors circulate for the product-tail
asymptotic: ``sigma**2 * L1 * L2 * Psi(log u / sigma)`` and
``sigma * L1 * L2 / (sqrt(2 pi) log u) * exp(-(log u)^2 / (2 sigma^2))``.
After applying the Mills ratio these differ by a factor sigma**2.  The
single-sigma form is the one consistent with the exact computation: for
sigma1 = sigma2 = 1 and constant L the product of two iid LN(0,1) factors
has exact tail Psi(log u / sqrt(2)), which matches the single-sigma form
and is half the sigma-squared form.  This module implements the
single-sigma form; the CLI's ``asym`` command states the convention in its
output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .claims import ClaimCountSpec
from .errors import DomainError
from .normal import LOG_SQRT_2PI, Probability, log_mills_tail, log_std_normal_sf
from .regvar import CONSTANT_ONE, RegVaryingSpec

_THETA_RELATIVE_TOL = 1e-12
_THETA_MAX_TERMS = 1_000_000


def _require_above_e(u: float) -> float:
    """Validate u > e and return log u."""
    u = float(u)
    if not u > math.e:
        raise DomainError(f"asymptotic formulas require u > e, got {u}")
    return math.log(u)


@dataclass(frozen=True)
class ProductTailParams:
    """Parameters for the tail of exp(sigma1*Z1 + sigma2*Z2).

    Z1, Z2 are independent with P(e^{Z_i} > u) ~ tail_i(u) * Psi(log u).
    Derived quantities: gamma = sigma1^2/(sigma1^2+sigma2^2), the combined
    sigma, and sigma_star with sigma_star^2 = gamma*(1-gamma)*sigma^2.
    """

    sigma1: float
    sigma2: float
    tail1: RegVaryingSpec = CONSTANT_ONE
    tail2: RegVaryingSpec = CONSTANT_ONE

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma1) and self.sigma1 > 0.0):
            raise DomainError(f"sigma1 must be positive, got {self.sigma1}")
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0.0):
            raise DomainError(f"sigma2 must be positive, got {self.sigma2}")

    @property
    def gamma(self) -> float:
        return self.sigma1**2 / (self.sigma1**2 + self.sigma2**2)

    @property
    def sigma(self) -> float:
        return math.hypot(self.sigma1, self.sigma2)

    @property
    def sigma_star(self) -> float:
        return self.sigma1 * self.sigma2 / self.sigma


def product_tail(p: ProductTailParams, u: float) -> Probability:
    """Asymptotic tail of exp(sigma1*Z1 + sigma2*Z2) at level u > e.

    Single-sigma prefactor convention (see module docstring):

        sigma * exp(sigma_star^2 (b1-b2)^2 / 2) * L1(u^g) * L2(u^(1-g))
          / (sqrt(2 pi) log u) * exp(-(log u)^2 / (2 sigma^2))

    with g = gamma and b_i the regular-variation indices of the L_i.
    """
    log_u = _require_above_e(u)
    g = p.gamma
    diff = p.tail1.index - p.tail2.index
    log_val = (
        math.log(p.sigma)
        + 0.5 * p.sigma_star**2 * diff * diff
        + p.tail1.log_value_at(g * log_u)
        + p.tail2.log_value_at((1.0 - g) * log_u)
        - LOG_SQRT_2PI
        - math.log(log_u)
        - log_u * log_u / (2.0 * p.sigma**2)
    )
    return Probability.from_log(log_val)


@dataclass(frozen=True)
class TailRatios:
    """Per-claim tail-ratio constants c_i >= 0, i >= 1.

    Stored as a finite head plus a default used beyond it, so the supremum
    is finite by construction.
    """

    head: tuple[float, ...] = ()
    default: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "head", tuple(float(c) for c in self.head))
        for c in (*self.head, self.default):
            if not (math.isfinite(c) and c >= 0.0):
                raise DomainError(f"tail ratios must be finite and >= 0, got {c}")

    @classmethod
    def constant(cls, c: float) -> "TailRatios":
        return cls(head=(), default=c)

    def at(self, i: int) -> float:
        """c_i for 1-based claim index i."""
        if i < 1:
            raise DomainError(f"claim index must be >= 1, got {i}")
        return self.head[i - 1] if i <= len(self.head) else self.default

    def prefix_sum(self, n: int) -> float:
        """Sum of c_1 .. c_n."""
        if n < 0:
            raise DomainError(f"count must be >= 0, got {n}")
        k = min(n, len(self.head))
        return math.fsum(self.head[:k]) + self.default * (n - k)

    @property
    def sup(self) -> float:
        return max((*self.head, self.default))


@dataclass(frozen=True)
class FactorModelSpec:
    """Common-factor claim model X_i = rho*Z0 + sqrt(1-rho^2)*Z_i.

    The Z_i (i >= 0) are iid from the idiosyncratic family; ``base_tail``
    is the slowly/regularly varying perturbation of the base risk's tail,
    P(e^Z0 > u) ~ base_tail(u) * Psi(log u).  ``ratios`` are the per-claim
    tail-ratio constants entering the closed-form asymptotics.

    ``idiosyncratic`` is "standard-normal" or "perturbed"; the perturbed
    family draws from the spliced law built on ``base_tail`` with splice
    point ``splice_point`` (required in that case).
    """

    rho: float
    base_tail: RegVaryingSpec = CONSTANT_ONE
    ratios: TailRatios = field(default_factory=TailRatios)
    idiosyncratic: str = "standard-normal"
    splice_point: float | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.rho) and 0.0 <= self.rho < 1.0):
            raise DomainError(f"rho must be in [0, 1), got {self.rho}")
        if self.idiosyncratic not in ("standard-normal", "perturbed"):
            raise DomainError(
                f"idiosyncratic family must be 'standard-normal' or 'perturbed', "
                f"got {self.idiosyncratic!r}"
            )
        if self.idiosyncratic == "perturbed" and self.splice_point is None:
            raise DomainError("perturbed idiosyncratic family needs a splice_point")


def _split_tail_log(base_tail: RegVaryingSpec, rho: float, log_u: float) -> float:
    """log of the L(u^{rho^2}) * L(u^{1-rho^2}) factor.

    At rho = 0 the common factor exp(rho*Z0) degenerates to the constant 1
    and u^{rho^2} = 1 falls outside the family's domain; the correct limit
    is the single factor L(u).
    """
    r2 = rho * rho
    if r2 == 0.0:
        return base_tail.log_value_at(log_u)
    return base_tail.log_value_at(r2 * log_u) + base_tail.log_value_at((1.0 - r2) * log_u)


def factor_marginal_tail(model: FactorModelSpec, u: float, i: int = 1) -> Probability:
    """Marginal claim-tail asymptotic for claim i of the factor model:

        c_i * L(u^{rho^2}) * L(u^{1-rho^2}) / (sqrt(2 pi) log u)
            * exp(-(log u)^2 / 2)

    For constant L this does not depend on rho; for non-constant L the
    dependence parameter redistributes the slowly varying mass.
    """
    log_u = _require_above_e(u)
    c = model.ratios.at(i)
    if c == 0.0:
        return Probability.zero()
    log_val = math.log(c) + _split_tail_log(model.base_tail, model.rho, log_u) + log_mills_tail(log_u)
    return Probability.from_log(log_val)


def finite_sum_tail(n: int, u: float) -> Probability:
    """Tail asymptotic n * Psi(log u) for the sum of n dependent log-normal
    claims with standard marginals (exact survival function, not its Mills
    form)."""
    if int(n) != n or n < 1:
        raise DomainError(f"claim count must be an integer >= 1, got {n}")
    log_u = _require_above_e(u)
    return Probability.from_log(math.log(int(n)) + log_std_normal_sf(log_u))


def expected_total_tail_ratio(model: FactorModelSpec, counts: ClaimCountSpec) -> float:
    """E[ c_1 + ... + c_N ], the constant multiplying the random-sum tail.

    Requires the claim-count moment condition for the declared delta
    (raises MomentConditionError through ``counts.moment_value``).  The
    outer sum over n is truncated once the geometric tail bound
    ``M * (1+delta)^-n * sup_c * n / delta`` drops below 1e-12 of the
    accumulated value.
    """
    moment = counts.moment_value()
    ratios = model.ratios
    if ratios.sup == 0.0:
        return 0.0
    upper = counts.support_upper()
    if upper is not None:
        return math.fsum(
            counts.pmf(n) * ratios.prefix_sum(n) for n in range(1, upper + 1)
        )
    delta = counts.delta
    growth = 1.0 + delta
    acc = 0.0
    n = 0
    floor = max(4, int(counts.mean()) + 1)
    while True:
        n += 1
        acc += counts.pmf(n) * ratios.prefix_sum(n)
        if n >= floor and acc > 0.0:
            tail_bound = moment * growth ** (-n) * ratios.sup * n / delta
            if tail_bound < _THETA_RELATIVE_TOL * acc:
                return acc
        if n >= _THETA_MAX_TERMS:
            raise DomainError("tail-ratio sum did not converge within 1e6 terms")


def random_sum_tail_factor(
    model: FactorModelSpec, counts: ClaimCountSpec, u: float
) -> Probability:
    """Random-sum (and random-maximum) tail asymptotic for the factor model:

        E[sum c_i] * L(u^{rho^2}) * L(u^{1-rho^2}) / (sqrt(2 pi) log u)
            * exp(-(log u)^2 / 2)

    The same value serves the random maximum; sum and maximum are tail
    equivalent in this regime.
    """
    log_u = _require_above_e(u)
    theta = expected_total_tail_ratio(model, counts)
    if theta == 0.0:
        return Probability.zero()
    log_val = math.log(theta) + _split_tail_log(model.base_tail, model.rho, log_u) + log_mills_tail(log_u)
    return Probability.from_log(log_val)


def random_sum_tail_lognormal(mean_count: float, u: float) -> Probability:
    """Random-sum tail asymptotic for standard log-normal claims under the
    general correlation regime:

        E[N] / (sqrt(2 pi) log u) * exp(-(log u)^2 / 2)
    """
    mean_count = float(mean_count)
    if not (math.isfinite(mean_count) and mean_count > 0.0):
        raise DomainError(f"mean claim count must be positive, got {mean_count}")
    log_u = _require_above_e(u)
    return Probability.from_log(math.log(mean_count) + log_mills_tail(log_u))
