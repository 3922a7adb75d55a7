"""Claim-count models and the light-tail moment condition E[(1+delta)^N].

Each spec declares the delta for which the moment is supposed to be finite;
``moment_value`` either evaluates it in closed form or raises
``MomentConditionError`` naming the violated inequality.  Divergent specs
are constructible on purpose so validators can report the failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MomentConditionError

FAMILIES = ("fixed", "geometric", "poisson", "truncated")


@dataclass(frozen=True)
class ClaimCountSpec:
    """Distribution of the claim number N on {0, 1, 2, ...}.

    Families: fixed(n), geometric(p) with P(N=n) = p*(1-p)^n so P(N=0) > 0,
    poisson(lam), and truncated(probs) with an explicit finite pmf.
    """

    family: str
    delta: float = 1.0
    n: int | None = None
    p: float | None = None
    lam: float | None = None
    probs: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise DomainError(f"unknown claim-count family {self.family!r}")
        if not (math.isfinite(self.delta) and self.delta > 0.0):
            raise DomainError(f"delta must be positive, got {self.delta}")
        if self.family == "fixed":
            if self.n is None or int(self.n) != self.n or self.n < 0:
                raise DomainError(f"fixed count needs an integer n >= 0, got {self.n}")
            object.__setattr__(self, "n", int(self.n))
        elif self.family == "geometric":
            if self.p is None or not 0.0 < self.p <= 1.0:
                raise DomainError(f"geometric needs p in (0, 1], got {self.p}")
        elif self.family == "poisson":
            if self.lam is None or not (math.isfinite(self.lam) and self.lam >= 0.0):
                raise DomainError(f"poisson needs lam >= 0, got {self.lam}")
        else:
            if not self.probs:
                raise DomainError("truncated needs a nonempty probability list")
            probs = tuple(float(q) for q in self.probs)
            if any(q < 0.0 for q in probs):
                raise DomainError("truncated probabilities must be >= 0")
            total = math.fsum(probs)
            if abs(total - 1.0) > 1e-12:
                raise DomainError(f"truncated probabilities sum to {total}, need 1")
            object.__setattr__(self, "probs", probs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def fixed(cls, n: int, delta: float = 1.0) -> "ClaimCountSpec":
        return cls(family="fixed", n=n, delta=delta)

    @classmethod
    def geometric(cls, p: float, delta: float = 1.0) -> "ClaimCountSpec":
        return cls(family="geometric", p=p, delta=delta)

    @classmethod
    def poisson(cls, lam: float, delta: float = 1.0) -> "ClaimCountSpec":
        return cls(family="poisson", lam=lam, delta=delta)

    @classmethod
    def truncated(cls, probs, delta: float = 1.0) -> "ClaimCountSpec":
        return cls(family="truncated", probs=tuple(probs), delta=delta)

    # -- exact quantities --------------------------------------------------

    def mean(self) -> float:
        if self.family == "fixed":
            return float(self.n)
        if self.family == "geometric":
            return (1.0 - self.p) / self.p
        if self.family == "poisson":
            return float(self.lam)
        return float(sum(n * q for n, q in enumerate(self.probs)))

    def pmf(self, n: int) -> float:
        if n < 0:
            return 0.0
        if self.family == "fixed":
            return 1.0 if n == self.n else 0.0
        if self.family == "geometric":
            return self.p * (1.0 - self.p) ** n
        if self.family == "poisson":
            if self.lam == 0.0:
                return 1.0 if n == 0 else 0.0
            return math.exp(-self.lam + n * math.log(self.lam) - math.lgamma(n + 1))
        return self.probs[n] if n < len(self.probs) else 0.0

    def support_upper(self) -> int | None:
        """Largest attainable value, or None for unbounded support."""
        if self.family == "fixed":
            return self.n
        if self.family == "truncated":
            return len(self.probs) - 1
        return None

    def moment_value(self) -> float:
        """E[(1+delta)^N] in closed form, or MomentConditionError on divergence."""
        g = 1.0 + self.delta
        if self.family == "fixed":
            return g**self.n
        if self.family == "geometric":
            ratio = g * (1.0 - self.p)
            if ratio >= 1.0:
                raise MomentConditionError(
                    f"E[(1+delta)^N] diverges for geometric(p={self.p}) with "
                    f"delta={self.delta}: (1+delta)*(1-p) = {ratio} >= 1",
                    inequality="(1+delta)*(1-p) >= 1",
                )
            return self.p / (1.0 - ratio)
        if self.family == "poisson":
            return math.exp(self.lam * self.delta)
        return float(sum(q * g**n for n, q in enumerate(self.probs)))

    # -- sampling ----------------------------------------------------------

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw from the spec's law; returns an int for size=None, else an
        int array.  The caller owns the generator."""
        if self.family == "fixed":
            if size is None:
                return self.n
            return np.full(size, self.n, dtype=np.int64)
        if self.family == "geometric":
            draws = rng.geometric(self.p, size=size) - 1
            return int(draws) if size is None else draws.astype(np.int64)
        if self.family == "poisson":
            draws = rng.poisson(self.lam, size=size)
            return int(draws) if size is None else draws.astype(np.int64)
        support = np.arange(len(self.probs))
        draws = rng.choice(support, size=size, p=np.asarray(self.probs))
        return int(draws) if size is None else draws.astype(np.int64)
