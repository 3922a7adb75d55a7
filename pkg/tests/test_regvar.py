import math

import pytest

from tailkit import CONSTANT_ONE, DomainError, RegVaryingSpec


def test_constant_case():
    assert CONSTANT_ONE.value(100.0) == 1.0
    assert CONSTANT_ONE.is_constant


def test_direct_evaluation():
    spec = RegVaryingSpec(scale=2.0, index=0.5, log_exponent=1.0)
    # 2 * e * 2 at u = e^2
    assert spec.value(math.exp(2.0)) == pytest.approx(4.0 * math.e, rel=1e-14)


def test_pure_power_ratio_exact():
    spec = RegVaryingSpec(scale=1.0, index=0.3, log_exponent=0.0)
    u = 1e6
    assert spec.value(10 * u) / spec.value(u) == pytest.approx(10**0.3, rel=1e-12)


def test_scaling_limit_on_grid():
    # L(u s)/L(u) -> s^index with error shrinking in u
    spec = RegVaryingSpec(scale=3.0, index=0.4, log_exponent=2.0)
    s = 5.0
    errors = []
    for k in (2, 4, 6, 8):
        u = 10.0**k
        ratio = math.exp(spec.log_value(u * s) - spec.log_value(u))
        errors.append(abs(ratio / s**0.4 - 1.0))
    assert all(b < a for a, b in zip(errors, errors[1:]))
    assert errors[-1] < 1e-1


def test_positive_everywhere_above_one():
    spec = RegVaryingSpec(scale=0.5, index=-1.0, log_exponent=-2.0)
    for u in (1.0001, 2.0, math.e, 100.0, 1e10):
        assert spec.value(u) > 0.0


def test_scale_multiplicativity():
    a = RegVaryingSpec(scale=1.3, index=0.2, log_exponent=1.0)
    b = RegVaryingSpec(scale=2.6, index=0.2, log_exponent=1.0)
    for u in (2.0, 10.0, 1e8):
        assert b.value(u) == pytest.approx(2.0 * a.value(u), rel=1e-14)


def test_domain_errors():
    spec = RegVaryingSpec()
    with pytest.raises(DomainError):
        spec.value(1.0)
    with pytest.raises(DomainError):
        spec.value(0.5)
    with pytest.raises(DomainError):
        RegVaryingSpec(scale=0.0)
    with pytest.raises(DomainError):
        RegVaryingSpec(scale=-1.0)
    with pytest.raises(DomainError):
        RegVaryingSpec(index=math.inf)


def test_log_domain_survives_extreme_magnitudes():
    spec = RegVaryingSpec(scale=1.0, index=2.0, log_exponent=0.0)
    assert spec.log_value(math.exp(400.0)) == pytest.approx(800.0, rel=1e-14)
    assert spec.value(math.exp(400.0)) == math.inf
