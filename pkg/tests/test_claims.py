import math

import numpy as np
import pytest

from tailkit import ClaimCountSpec, DomainError, MomentConditionError

from ._oracles import geometric_partial_moment


def test_fixed_moment():
    assert ClaimCountSpec.fixed(3, delta=1.0).moment_value() == 8.0


def test_fixed_always_admissible():
    for delta in (0.1, 1.0, 10.0, 1000.0):
        assert math.isfinite(ClaimCountSpec.fixed(5, delta=delta).moment_value())


def test_geometric_moment_closed_form_and_partial_sum():
    spec = ClaimCountSpec.geometric(0.5, delta=0.5)
    assert spec.moment_value() == pytest.approx(2.0, rel=1e-14)
    assert spec.moment_value() == pytest.approx(geometric_partial_moment(0.5, 0.5), rel=1e-12)


def test_geometric_divergence():
    spec = ClaimCountSpec.geometric(0.2, delta=0.5)
    with pytest.raises(MomentConditionError) as exc:
        spec.moment_value()
    assert "(1+delta)*(1-p) >= 1" in exc.value.inequality


def test_poisson_moment():
    assert ClaimCountSpec.poisson(3.0, delta=0.5).moment_value() == pytest.approx(
        math.exp(1.5), rel=1e-14
    )


def test_truncated_moment():
    spec = ClaimCountSpec.truncated((0.25, 0.5, 0.25), delta=1.0)
    assert spec.moment_value() == pytest.approx(0.25 + 0.5 * 2 + 0.25 * 4, rel=1e-14)


def test_means():
    assert ClaimCountSpec.fixed(2).mean() == 2.0
    assert ClaimCountSpec.poisson(3.0).mean() == 3.0
    assert ClaimCountSpec.geometric(0.5).mean() == pytest.approx(1.0, rel=1e-14)
    assert ClaimCountSpec.truncated((0.0, 1.0)).mean() == 1.0


def test_pmf_sums_to_one():
    for spec in (
        ClaimCountSpec.geometric(0.3),
        ClaimCountSpec.poisson(2.5),
        ClaimCountSpec.truncated((0.1, 0.2, 0.7)),
    ):
        total = math.fsum(spec.pmf(n) for n in range(200))
        assert total == pytest.approx(1.0, abs=1e-12)


def test_sampling_degenerate_cases():
    rng = np.random.default_rng(0)
    assert ClaimCountSpec.fixed(5).sample(rng) == 5
    draws = ClaimCountSpec.truncated((0.0, 1.0)).sample(rng, size=1000)
    assert np.all(draws == 1)


def test_geometric_sampling_statistics():
    rng = np.random.default_rng(123)
    spec = ClaimCountSpec.geometric(0.5, delta=0.5)
    draws = spec.sample(rng, size=1_000_000)
    p0 = float((draws == 0).mean())
    assert abs(p0 - 0.5) < 0.002
    se = math.sqrt(draws.var() / draws.size)
    assert abs(float(draws.mean()) - spec.mean()) < 4.0 * se


def test_poisson_sampling_mean():
    rng = np.random.default_rng(7)
    spec = ClaimCountSpec.poisson(3.0)
    draws = spec.sample(rng, size=1_000_000)
    se = math.sqrt(draws.var() / draws.size)
    assert abs(float(draws.mean()) - 3.0) < 4.0 * se


def test_validation_errors():
    with pytest.raises(DomainError):
        ClaimCountSpec.fixed(-1)
    with pytest.raises(DomainError):
        ClaimCountSpec.geometric(0.0)
    with pytest.raises(DomainError):
        ClaimCountSpec.truncated((0.5, 0.4))  # sums to 0.9
    with pytest.raises(DomainError):
        ClaimCountSpec.fixed(2, delta=0.0)
    with pytest.raises(DomainError):
        ClaimCountSpec(family="binomial")
