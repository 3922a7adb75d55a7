"""Semantic exception hierarchy for tailkit.

Public functions raise these instead of bare ValueError so callers (and the
CLI) can tell a bad argument from a violated model condition or a numerical
failure.
"""

from __future__ import annotations


class TailkitError(Exception):
    """Base class for all tailkit errors."""


class DomainError(TailkitError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class ConfigError(TailkitError, ValueError):
    """An experiment configuration is malformed or inconsistent."""


class MomentConditionError(TailkitError):
    """The claim-count moment E[(1+delta)^N] diverges for the declared delta.

    ``inequality`` spells out the violated requirement, e.g.
    ``"(1+delta)*(1-p) >= 1"`` for a geometric count.
    """

    def __init__(self, message: str, inequality: str):
        super().__init__(message)
        self.inequality = inequality


class FactorizationError(TailkitError):
    """Cholesky factorization failed; ``pivot_index`` names the bad pivot."""

    def __init__(self, message: str, pivot_index: int):
        super().__init__(message)
        self.pivot_index = pivot_index


class QuadratureError(TailkitError):
    """Adaptive quadrature did not reach its tolerance.

    ``estimate`` carries the value achieved so far and ``error_bound`` the
    integrator's own error estimate for it.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound
