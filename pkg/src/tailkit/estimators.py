"""Monte Carlo estimators for P(S_N > u) and P(max claim > u).

Sharding and reproducibility
----------------------------
Work is split into ``workers`` shards.  Shard i draws from a counter-based
Philox stream keyed by (seed, i), so results are bit-identical for a fixed
(seed, workers) pair regardless of whether shards run serially or on a
thread pool.  Shard moments are merged in shard order with the standard
mean/M2 combination.

The conditional estimator follows the factorization of the random sum
through the common factor: given (Z0, N = n) the residual claims are iid
with a closed-form survival, and the single-claim conditioning identity

    P(xi_1 + ... + xi_n > v) = n * E[ Fbar(max(M_{n-1}, v - S_{n-1})) ]

collapses the rare event of the residual sum.  For standard-normal
idiosyncratics the remaining variance from Z0 itself is removed by drawing
Z0 from a mean-shifted proposal N(rho*log u, 1) and carrying the exact
density ratio, which keeps the estimator unbiased while the shifted draws
concentrate where the conditional tail actually lives.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .asymptotics import FactorModelSpec
from .claims import ClaimCountSpec
from .dependence import GaussianModelSpec, cholesky_factor
from .errors import DomainError
from .sampling import _base_log_draws, residual_log_survival

METHOD_CRUDE = "crude"
METHOD_CONDITIONAL = "conditional-ak"
METHOD_QUADRATURE = "quadrature"


@dataclass(frozen=True)
class Estimate:
    """Point estimate with its standard error and provenance."""

    value: float
    std_error: float
    n_samples: int
    method: str
    seed: int


@dataclass(frozen=True)
class ShareDiagnostic:
    """Self-normalized estimate of E[max claim / S_N | S_N > u]."""

    value: float
    std_error: float
    n_samples: int
    effective_samples: float
    seed: int


def _worker_rng(seed: int, worker: int) -> np.random.Generator:
    key = np.array([seed % (1 << 64), worker], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _shard_sizes(total: int, workers: int) -> list[int]:
    base, extra = divmod(total, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def _merge_moments(parts):
    """Combine (n, mean, M2) shard moments in order."""
    n, mean, m2 = 0, 0.0, 0.0
    for pn, pmean, pm2 in parts:
        if pn == 0:
            continue
        if n == 0:
            n, mean, m2 = pn, pmean, pm2
            continue
        delta = pmean - mean
        tot = n + pn
        mean += delta * pn / tot
        m2 += pm2 + delta * delta * n * pn / tot
        n = tot
    return n, mean, m2


def _moments_of(values: np.ndarray):
    n = values.size
    if n == 0:
        return 0, 0.0, 0.0
    mean = float(values.mean())
    m2 = float(((values - mean) ** 2).sum())
    return n, mean, m2


def _run_shards(shard_fn, n_samples: int, seed: int, workers: int):
    if n_samples < 1:
        raise DomainError(f"n_samples must be >= 1, got {n_samples}")
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")
    sizes = _shard_sizes(n_samples, workers)
    jobs = [(i, m) for i, m in enumerate(sizes) if m > 0]
    if workers == 1 or len(jobs) == 1:
        parts = [shard_fn(i, m) for i, m in jobs]
    else:
        with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
            parts = list(pool.map(lambda job: shard_fn(*job), jobs))
    return _merge_moments(parts)


def _draw_claim_aggregates(model, counts, statistic, m, rng):
    """Aggregate statistic (sum or max) of one batch of m paths."""
    ns = counts.sample(rng, size=m)
    agg = np.zeros(m)
    if isinstance(model, FactorModelSpec):
        s = math.sqrt(1.0 - model.rho**2)
        z0 = _base_log_draws(model, rng, m)
        common = np.exp(model.rho * z0)
        for n in np.unique(ns):
            if n == 0:
                continue
            idx = np.flatnonzero(ns == n)
            claims = np.exp(s * _base_log_draws(model, rng, (idx.size, int(n))))
            claims *= common[idx][:, None]
            agg[idx] = claims.sum(axis=1) if statistic == "sum" else claims.max(axis=1)
    elif isinstance(model, GaussianModelSpec):
        chol_cache = {}
        for n in np.unique(ns):
            if n == 0:
                continue
            n = int(n)
            if n not in chol_cache:
                chol_cache[n] = cholesky_factor(model.correlation(n))
            idx = np.flatnonzero(ns == n)
            w = rng.standard_normal((idx.size, n))
            claims = np.exp(w @ chol_cache[n].T)
            agg[idx] = claims.sum(axis=1) if statistic == "sum" else claims.max(axis=1)
    else:
        raise DomainError(f"unsupported model type {type(model).__name__}")
    return agg


def crude_mc_tail(
    model,
    counts: ClaimCountSpec,
    u: float,
    statistic: str = "sum",
    n_samples: int = 100_000,
    seed: int = 1,
    workers: int = 1,
) -> Estimate:
    """Plain indicator-frequency estimate of P(S_N > u) or P(max > u).

    Unbiased with a binomial standard error; deterministic for fixed
    (seed, workers).  Works for both the factor model and Gaussian
    correlation models.
    """
    u = float(u)
    if not u > 0.0:
        raise DomainError(f"threshold must be positive, got {u}")
    if statistic not in ("sum", "max"):
        raise DomainError(f"statistic must be 'sum' or 'max', got {statistic!r}")

    def shard(worker: int, m: int):
        rng = _worker_rng(seed, worker)
        agg = _draw_claim_aggregates(model, counts, statistic, m, rng)
        hits = int(np.count_nonzero(agg > u))
        # binomial moments: mean p, M2 = n p (1 - p)
        p = hits / m
        return m, p, m * p * (1.0 - p)

    n, mean, m2 = _run_shards(shard, n_samples, seed, workers)
    std_error = math.sqrt(mean * (1.0 - mean) / n)
    return Estimate(value=mean, std_error=std_error, n_samples=n, method=METHOD_CRUDE, seed=seed)


def ak_conditional_tail(
    model: FactorModelSpec,
    counts: ClaimCountSpec,
    u: float,
    n_samples: int = 100_000,
    seed: int = 1,
    workers: int = 1,
) -> Estimate:
    """Conditional estimator of P(S_N > u) for the factor model.

    Per path: draw N and the common factor Z0, set v = u * exp(-rho*Z0),
    draw the first n-1 residual claims, and evaluate
    n * Fbar(max(M_{n-1}, v - S_{n-1})) with the residual survival Fbar in
    closed form.  Unbiased; the Z0 mean shift (standard-normal family only)
    is corrected by its exact likelihood ratio.
    """
    u = float(u)
    if not u > 0.0:
        raise DomainError(f"threshold must be positive, got {u}")
    rho = model.rho
    s = math.sqrt(1.0 - rho * rho)
    log_u = math.log(u)
    log_sf = residual_log_survival(model)
    shift = rho * max(log_u, 0.0) if model.idiosyncratic == "standard-normal" else 0.0

    def shard(worker: int, m: int):
        rng = _worker_rng(seed, worker)
        ns = counts.sample(rng, size=m)
        if model.idiosyncratic == "standard-normal":
            z0 = rng.standard_normal(m) + shift
            log_weight = 0.5 * shift * shift - shift * z0
        else:
            z0 = _base_log_draws(model, rng, m)
            log_weight = np.zeros(m)
        vals = np.zeros(m)
        v = u * np.exp(-rho * z0)
        for n in np.unique(ns):
            if n == 0:
                continue
            n = int(n)
            idx = np.flatnonzero(ns == n)
            if n == 1:
                arg = v[idx]
            else:
                resid = np.exp(s * _base_log_draws(model, rng, (idx.size, n - 1)))
                arg = np.maximum(resid.max(axis=1), v[idx] - resid.sum(axis=1))
            # arg > 0 always: the running maximum of positive claims
            vals[idx] = n * np.exp(log_sf(arg) + log_weight[idx])
        return _moments_of(vals)

    n, mean, m2 = _run_shards(shard, n_samples, seed, workers)
    var = m2 / (n - 1) if n > 1 else 0.0
    return Estimate(
        value=mean,
        std_error=math.sqrt(var / n),
        n_samples=n,
        method=METHOD_CONDITIONAL,
        seed=seed,
    )


def big_jump_share(
    model: FactorModelSpec,
    counts: ClaimCountSpec,
    u: float,
    n_samples: int = 100_000,
    seed: int = 1,
) -> ShareDiagnostic:
    """Mean share of the largest claim in the sum, conditional on S_N > u.

    Measured by self-normalized importance sampling: the common factor is
    mean shifted to rho*log u and one uniformly chosen claim is mean shifted
    to sqrt(1-rho^2)*log u, so proposal paths actually reach the rare set;
    the exact mixture likelihood ratio reweights back to the model.  Only
    for standard-normal idiosyncratics.
    """
    if model.idiosyncratic != "standard-normal":
        raise DomainError("share diagnostic requires standard-normal idiosyncratics")
    u = float(u)
    if not u > 0.0:
        raise DomainError(f"threshold must be positive, got {u}")
    a = math.log(u)
    rho = model.rho
    s = math.sqrt(1.0 - rho * rho)
    mu0 = rho * max(a, 0.0)
    mu1 = s * max(a, 0.0)
    rng = _worker_rng(seed, 0)

    ns = counts.sample(rng, size=n_samples)
    z0 = rng.standard_normal(n_samples) + mu0
    lw0 = 0.5 * mu0 * mu0 - mu0 * z0

    w_accum = []
    x_accum = []
    for n in np.unique(ns):
        if n == 0:
            continue
        n = int(n)
        idx = np.flatnonzero(ns == n)
        k = idx.size
        z = rng.standard_normal((k, n))
        j = rng.integers(0, n, size=k)
        z[np.arange(k), j] += mu1
        # mixture proposal over which claim was shifted:
        # weight = n / sum_j exp(mu1*z_j - mu1^2/2)
        tilt = mu1 * z - 0.5 * mu1 * mu1
        tmax = tilt.max(axis=1, keepdims=True)
        log_mix = tmax[:, 0] + np.log(np.exp(tilt - tmax).sum(axis=1))
        log_w = lw0[idx] + math.log(n) - log_mix
        claims = np.exp(rho * z0[idx][:, None] + s * z)
        total = claims.sum(axis=1)
        hit = total > u
        share = claims.max(axis=1) / total
        w = np.where(hit, np.exp(log_w), 0.0)
        w_accum.append(w)
        x_accum.append(share)
    if not w_accum:
        raise DomainError("claim count never exceeded 0; share diagnostic undefined")
    w = np.concatenate(w_accum)
    x = np.concatenate(x_accum)
    wsum = w.sum()
    if wsum <= 0.0:
        raise DomainError("no path reached the rare set; increase n_samples")
    mean = float((w * x).sum() / wsum)
    # delta-method error for the self-normalized ratio
    resid = w * (x - mean)
    std_error = float(np.sqrt((resid**2).sum()) / wsum)
    ess = float(wsum**2 / (w**2).sum())
    return ShareDiagnostic(
        value=mean,
        std_error=std_error,
        n_samples=n_samples,
        effective_samples=ess,
        seed=seed,
    )
