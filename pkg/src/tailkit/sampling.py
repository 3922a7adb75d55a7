"""Claim samplers: the spliced perturbed-tail law, factor-model claims, and
correlated Gaussian claims.

The perturbed law realizes a prescribed tail survival G(u) = L(u) *
Psi(log u) exactly above a splice point u*, with a rescaled log-normal body
below it so the survival function is continuous and strictly decreasing.
Only the region above u* carries asymptotic meaning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr, ndtr, ndtri

from .asymptotics import FactorModelSpec
from .dependence import CorrelationModel, cholesky_factor
from .errors import DomainError, TailkitError
from .regvar import RegVaryingSpec

_GRID_POINTS = 2048
_BISECT_ITERS = 90


@dataclass(frozen=True)
class PerturbedTailSpec:
    """Positive random variable with survival exactly G(u) = L(u)*Psi(log u)
    above the splice point.

    Construction validates, on a dense log-grid from the splice point out to
    where a Mills bound takes over, that G is strictly decreasing and below
    1 there; beyond the grid the bound phi/Psi(t) >= t guarantees decrease
    analytically.
    """

    tail: RegVaryingSpec
    splice: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.splice) and self.splice > math.e):
            raise DomainError(f"splice point must exceed e, got {self.splice}")
        t0 = math.log(self.splice)
        # decrease is guaranteed analytically once t > index + |log_exponent| + 1
        t_safe = max(t0 + 50.0, self.tail.index + abs(self.tail.log_exponent) + 2.0)
        grid = np.linspace(t0, t_safe, _GRID_POINTS)
        log_g = self.tail.log_value_at(grid) + log_ndtr(-grid)
        if log_g[0] >= 0.0:
            raise DomainError(
                f"survival at the splice point is {math.exp(log_g[0])}, need < 1"
            )
        if np.any(np.diff(log_g) >= 0.0):
            raise DomainError("perturbed survival is not strictly decreasing above the splice")
        object.__setattr__(self, "_log_splice", t0)
        object.__setattr__(self, "_log_g_splice", float(log_g[0]))
        object.__setattr__(self, "_body_cdf_splice", float(ndtr(t0)))

    @property
    def splice_survival(self) -> float:
        return math.exp(self._log_g_splice)

    def _log_tail_survival(self, log_x):
        return self.tail.log_value_at(log_x) + log_ndtr(-np.asarray(log_x, dtype=float))

    def survival(self, x):
        """P(X > x) for scalars or arrays."""
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.ones_like(x_arr)
        pos = x_arr > 0.0
        log_x = np.full_like(x_arr, -np.inf)
        log_x[pos] = np.log(x_arr[pos])
        body = pos & (log_x < self._log_splice)
        tail = log_x >= self._log_splice
        if np.any(body):
            scale = (1.0 - self.splice_survival) / self._body_cdf_splice
            out[body] = 1.0 - scale * ndtr(log_x[body])
        if np.any(tail):
            out[tail] = np.exp(self._log_tail_survival(log_x[tail]))
        return float(out[0]) if np.isscalar(x) or np.asarray(x).ndim == 0 else out

    def inverse_survival(self, q):
        """x with P(X > x) = q for q in (0, 1]; vectorized.

        Tail levels (q below the splice survival) are inverted by bracketed
        bisection on the log scale; body levels in closed form through the
        normal quantile.
        """
        q_arr = np.atleast_1d(np.asarray(q, dtype=float))
        if np.any(q_arr <= 0.0) or np.any(q_arr > 1.0):
            raise DomainError("survival level must be in (0, 1]")
        out = np.empty_like(q_arr)
        tail = q_arr < self.splice_survival
        body = ~tail
        if np.any(body):
            scale = (1.0 - self.splice_survival) / self._body_cdf_splice
            p = (1.0 - q_arr[body]) / scale
            # q = 1 maps to p = 0, i.e. x = 0
            x = np.zeros_like(p)
            inner = p > 0.0
            x[inner] = np.exp(ndtri(p[inner]))
            out[body] = x
        if np.any(tail):
            out[tail] = np.exp(self._invert_tail_log(np.log(q_arr[tail])))
        return float(out[0]) if np.isscalar(q) or np.asarray(q).ndim == 0 else out

    def _invert_tail_log(self, log_q: np.ndarray) -> np.ndarray:
        lo = np.full_like(log_q, self._log_splice)
        hi_val = self._log_splice + 10.0
        for _ in range(200):
            if self._log_tail_survival(hi_val) < log_q.min():
                break
            hi_val += 10.0
        else:
            raise TailkitError("failed to bracket the tail inversion")
        hi = np.full_like(log_q, hi_val)
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            above = self._log_tail_survival(mid) > log_q
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
        return 0.5 * (lo + hi)

    def sample(self, rng: np.random.Generator, size=None):
        q = np.clip(rng.random(size if size is not None else 1), 1e-300, None)
        x = self.inverse_survival(q)
        return float(np.asarray(x).ravel()[0]) if size is None else x


# -- factor-model claims -------------------------------------------------------


def _base_log_draws(model: FactorModelSpec, rng: np.random.Generator, shape):
    """Draws of the base variables Z (logs of the marginal claims before the
    factor mixing), iid from the idiosyncratic family."""
    if model.idiosyncratic == "standard-normal":
        return rng.standard_normal(shape)
    spec = perturbed_spec_for(model)
    return np.log(spec.sample(rng, size=shape))


def perturbed_spec_for(model: FactorModelSpec) -> PerturbedTailSpec:
    if model.idiosyncratic != "perturbed":
        raise DomainError("factor model does not use the perturbed family")
    return PerturbedTailSpec(tail=model.base_tail, splice=model.splice_point)


def sample_factor_claims(model: FactorModelSpec, n: int, rng: np.random.Generator):
    """One path of the factor model: returns (z0, claims) with
    claims_i = exp(rho*z0) * exp(sqrt(1-rho^2)*Z_i).

    The common factor z0 is returned so conditional estimators can reuse it;
    n = 0 yields an empty claims vector.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"claim count must be an integer >= 0, got {n}")
    z0 = float(_base_log_draws(model, rng, None))
    if n == 0:
        return z0, np.empty(0)
    s = math.sqrt(1.0 - model.rho**2)
    zs = _base_log_draws(model, rng, int(n))
    return z0, np.exp(model.rho * z0 + s * zs)


def residual_log_survival(model: FactorModelSpec):
    """Closed-form log survival of one residual claim exp(sqrt(1-rho^2)*Z).

    Returns a vectorized callable of positive arguments; used by the
    conditional estimator.
    """
    s = math.sqrt(1.0 - model.rho**2)
    if model.idiosyncratic == "standard-normal":
        def log_sf(x):
            return log_ndtr(-np.log(np.asarray(x, dtype=float)) / s)
    else:
        spec = perturbed_spec_for(model)

        def log_sf(x):
            base = np.exp(np.log(np.asarray(x, dtype=float)) / s)
            return np.log(np.clip(spec.survival(base), 1e-320, None))

    return log_sf


# -- correlated Gaussian claims -------------------------------------------------


def sample_gaussian_claims(chol: np.ndarray, rng: np.random.Generator, size: int | None = None):
    """Claims exp(X) with X = T W, W iid standard normal, T a Cholesky factor.

    With size given, returns a (size, n) array of paths.
    """
    n = chol.shape[0]
    if size is None:
        w = rng.standard_normal(n)
        return np.exp(chol @ w)
    w = rng.standard_normal((size, n))
    return np.exp(w @ chol.T)


def gaussian_claims_for_model(model: CorrelationModel, rng: np.random.Generator, size=None):
    return sample_gaussian_claims(cholesky_factor(model), rng, size=size)
