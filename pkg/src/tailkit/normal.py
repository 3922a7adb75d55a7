"""Standard normal tail primitives with log-domain evaluation.

Everything downstream rests on two scalar functions: the N(0,1) survival
function and its natural logarithm.  The log form stays finite far beyond
the point where the linear value underflows (around t = 38.6), which
matters because the tail formulas in this package involve factors like
exp(-(log u)^2 / 2) at log u of 100 and more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import log_ndtr, ndtr, ndtri

from .errors import DomainError

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Linear probabilities are reconstructed from logs only above this level;
# below it the linear field collapses to exactly 0.0.
_MIN_LINEAR_LOG = math.log(1e-300)


@dataclass(frozen=True)
class Probability:
    """A probability carried in both linear and log form.

    ``value`` equals ``exp(log_value)`` whenever that is representable above
    1e-300; below that ``value`` is 0.0 and ``log_value`` remains the
    faithful representation.  Asymptotic formulas can nominally exceed 1 at
    small arguments; construction clamps the log at 0 so the linear value
    stays a probability.
    """

    value: float
    log_value: float

    @classmethod
    def from_log(cls, log_value: float) -> "Probability":
        lv = float(log_value)
        if math.isnan(lv):
            raise DomainError("log-probability is NaN")
        if lv > 0.0:
            lv = 0.0
        value = math.exp(lv) if lv >= _MIN_LINEAR_LOG else 0.0
        return cls(value=value, log_value=lv)

    @classmethod
    def from_linear(cls, value: float) -> "Probability":
        v = float(value)
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"probability must be in [0, 1], got {v}")
        return cls(value=v, log_value=math.log(v) if v > 0.0 else -math.inf)

    @classmethod
    def zero(cls) -> "Probability":
        return cls(value=0.0, log_value=-math.inf)

    def __float__(self) -> float:
        return self.value


def _require_finite(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x}")
    return x


def std_normal_sf(t: float) -> Probability:
    """Survival function Psi(t) = P(W > t) for W ~ N(0,1).

    Linear accuracy is that of the complementary error function (about 1e-16
    relative); the log field is accurate for arguments far into the tail.
    """
    t = _require_finite(t, "t")
    return Probability(value=float(ndtr(-t)), log_value=float(log_ndtr(-t)))


def log_std_normal_sf(t: float) -> float:
    """Natural log of the N(0,1) survival function, underflow safe."""
    t = _require_finite(t, "t")
    return float(log_ndtr(-t))


def std_normal_cdf(t: float) -> float:
    t = _require_finite(t, "t")
    return float(ndtr(t))


def std_normal_pdf(t: float) -> float:
    t = _require_finite(t, "t")
    return math.exp(-0.5 * t * t - LOG_SQRT_2PI)


def log_std_normal_pdf(t: float) -> float:
    t = _require_finite(t, "t")
    return -0.5 * t * t - LOG_SQRT_2PI


def std_normal_quantile(p: float) -> float:
    """Inverse CDF on (0, 1)."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile argument must be in (0, 1), got {p}")
    return float(ndtri(p))


def log_mills_tail(log_u: float) -> float:
    """log of exp(-(log u)^2 / 2) / (sqrt(2 pi) log u), the shared kernel of
    the random-sum and marginal tail formulas.  Requires log_u > 0."""
    if log_u <= 0.0:
        raise DomainError(f"log u must be positive, got {log_u}")
    return -0.5 * log_u * log_u - LOG_SQRT_2PI - math.log(log_u)
