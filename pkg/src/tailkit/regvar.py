"""Parametric regularly varying functions L(u) = C * u^beta * (log u)^alpha.

The three-parameter family covers the constant case, pure powers, and
log-perturbed tails while staying invertible and cheap to evaluate.  It is
defined for u > 1 only (log u must be positive so the log power is real).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class RegVaryingSpec:
    """Regularly varying function with index ``index`` at infinity.

    ``scale`` is C > 0, ``index`` is the power of u, ``log_exponent`` the
    power of log u.  For any fixed s > 0, L(u s)/L(u) -> s**index as u grows.
    """

    scale: float = 1.0
    index: float = 0.0
    log_exponent: float = 0.0

    def __post_init__(self) -> None:
        for name in ("scale", "index", "log_exponent"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v}")
        if self.scale <= 0.0:
            raise DomainError(f"scale must be positive, got {self.scale}")

    @property
    def is_constant(self) -> bool:
        return self.index == 0.0 and self.log_exponent == 0.0

    def log_value_at(self, log_u):
        """log L evaluated at the point whose natural log is ``log_u``.

        Accepts scalars or arrays; every entry must be positive.
        """
        arr = np.asarray(log_u, dtype=float)
        if np.any(arr <= 0.0):
            raise DomainError("log u must be positive (u > 1)")
        out = math.log(self.scale) + self.index * arr + self.log_exponent * np.log(arr)
        return float(out) if np.isscalar(log_u) or arr.ndim == 0 else out

    def log_value(self, u: float) -> float:
        u = float(u)
        if u <= 1.0:
            raise DomainError(f"regularly varying family defined for u > 1, got {u}")
        return self.log_value_at(math.log(u))

    def value(self, u: float) -> float:
        """L(u) in the linear domain; overflows to inf rather than raising."""
        lv = self.log_value(u)
        try:
            return math.exp(lv)
        except OverflowError:
            return math.inf


#: The constant function L = 1, the plain log-normal case.
CONSTANT_ONE = RegVaryingSpec(1.0, 0.0, 0.0)
