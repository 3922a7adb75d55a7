"""Independent oracles used only by the tests.

These deliberately avoid the package's own code paths wherever feasible:
series expansions, brute-force partial sums, and dense Gauss-Hermite grids.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import log_ndtr, ndtr


def mills_log_sf(t: float) -> float:
    """Asymptotic series log Psi(t) = -t^2/2 - log(t sqrt(2 pi)) + log(1 - 1/t^2 + 3/t^4)."""
    return -t * t / 2.0 - math.log(t * math.sqrt(2.0 * math.pi)) + math.log(1.0 - t**-2 + 3.0 * t**-4)


def geometric_partial_moment(p: float, delta: float, terms: int = 10_000) -> float:
    """Brute-force partial sum of E[(1+delta)^N] for the geometric count."""
    g = 1.0 + delta
    return math.fsum(p * (1.0 - p) ** n * g**n for n in range(terms))


def geometric_partial_mean(p: float, terms: int = 100_000) -> float:
    return math.fsum(n * p * (1.0 - p) ** n for n in range(terms))


def share_and_tail_gh(rho: float, u: float, nodes: int = 190):
    """(E[max share | S_2 > u], P(S_2 > u)) for the two-claim factor model
    with standard normal components, by a dense 2-D Gauss-Hermite grid over
    the idiosyncratic pair with the common factor integrated in closed form.
    """
    a = math.log(u)
    s = math.sqrt(1.0 - rho * rho)
    x, w = np.polynomial.hermite.hermgauss(nodes)
    z = math.sqrt(2.0) * x
    lw = np.log(w) - 0.5 * math.log(math.pi)
    e1 = s * z[:, None]
    e2 = s * z[None, :]
    lw2 = lw[:, None] + lw[None, :]
    m = np.maximum(e1, e2)
    log_sum = m + np.log1p(np.exp(-np.abs(e1 - e2)))
    log_hit = log_ndtr(-(a - log_sum) / rho)  # P(Z0 > (a - log_sum)/rho)
    share = 1.0 / (1.0 + np.exp(-np.abs(e1 - e2)))
    lt = lw2 + log_hit
    peak = lt.max()
    den = np.exp(lt - peak).sum()
    num = (np.exp(lt - peak) * share).sum()
    return num / den, math.exp(peak) * den


def lognormal_sum2_mc(u: float, n: int, seed: int) -> tuple[float, float]:
    """Crude Monte Carlo for P(Y1+Y2 > u), iid LN(0,1); returns (p, stderr)."""
    rng = np.random.default_rng(seed)
    y = np.exp(rng.standard_normal((n, 2)))
    p = float((y.sum(axis=1) > u).mean())
    return p, math.sqrt(p * (1.0 - p) / n)


def equicorrelation_eigenvalues(n: int, r: float) -> list[float]:
    """Closed-form spectrum {1 + (n-1) r, 1 - r (n-1 times)}."""
    return [1.0 + (n - 1) * r] + [1.0 - r] * (n - 1)


def std_normal_sf_erfc(t: float) -> float:
    """Survival via the complementary error function."""
    return 0.5 * math.erfc(t / math.sqrt(2.0))
