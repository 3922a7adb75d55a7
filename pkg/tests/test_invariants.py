"""Property-based invariants of the pure math layer."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tailkit import (
    ClaimCountSpec,
    CorrelationDecayParams,
    CorrelationSequence,
    FactorModelSpec,
    Probability,
    ProductTailParams,
    RegVaryingSpec,
    check_decay_bound,
    finite_sum_tail,
    n_of_u,
    product_tail,
    random_sum_tail_factor,
    random_sum_tail_lognormal,
    std_normal_sf,
)

_sigmas = st.floats(min_value=0.2, max_value=4.0, allow_nan=False)
_indices = st.floats(min_value=-1.5, max_value=1.5, allow_nan=False)
_scales = st.floats(min_value=0.1, max_value=10.0, allow_nan=False)
_log_u = st.floats(min_value=1.5, max_value=60.0, allow_nan=False)


@given(
    s1=_sigmas, s2=_sigmas,
    c1=_scales, b1=_indices, a1=_indices,
    c2=_scales, b2=_indices, a2=_indices,
    lu=_log_u,
)
@settings(max_examples=60, deadline=None)
def test_product_tail_swap_symmetry(s1, s2, c1, b1, a1, c2, b2, a2, lu):
    t1 = RegVaryingSpec(scale=c1, index=b1, log_exponent=a1)
    t2 = RegVaryingSpec(scale=c2, index=b2, log_exponent=a2)
    u = math.exp(lu)
    left = product_tail(ProductTailParams(s1, s2, t1, t2), u).log_value
    right = product_tail(ProductTailParams(s2, s1, t2, t1), u).log_value
    assert left == right


@given(scale=_scales, index=_indices, alpha=_indices, lu=st.floats(min_value=0.5, max_value=100.0))
@settings(max_examples=60, deadline=None)
def test_regvar_scale_linearity(scale, index, alpha, lu):
    one = RegVaryingSpec(scale=scale, index=index, log_exponent=alpha)
    two = RegVaryingSpec(scale=2.0 * scale, index=index, log_exponent=alpha)
    assert two.log_value_at(lu) == pytest.approx(one.log_value_at(lu) + math.log(2.0), rel=1e-12)


@given(rho=st.floats(min_value=0.0, max_value=0.99), n=st.integers(min_value=1, max_value=40), lu=_log_u)
@settings(max_examples=60, deadline=None)
def test_reduction_to_constant_formula(rho, n, lu):
    model = FactorModelSpec(rho=rho)
    counts = ClaimCountSpec.fixed(n, delta=1.0)
    u = math.exp(lu)
    assert random_sum_tail_factor(model, counts, u).log_value == random_sum_tail_lognormal(
        float(n), u
    ).log_value


@given(n=st.integers(min_value=1, max_value=1000), lu=_log_u)
@settings(max_examples=60, deadline=None)
def test_finite_sum_linearity_in_count(n, lu):
    u = math.exp(lu)
    single = finite_sum_tail(1, u).log_value
    many = finite_sum_tail(n, u).log_value
    assert many == pytest.approx(single + math.log(n), rel=1e-12)


@given(
    lu1=st.floats(min_value=0.5, max_value=40.0),
    lu2=st.floats(min_value=0.5, max_value=40.0),
    eta=st.floats(min_value=0.05, max_value=3.0),
    delta=st.floats(min_value=0.05, max_value=3.0),
)
@settings(max_examples=60, deadline=None)
def test_claim_horizon_monotone(lu1, lu2, eta, delta):
    p = CorrelationDecayParams(c_star=9.0, eta=eta, delta=delta)
    lo, hi = sorted((lu1, lu2))
    assert n_of_u(math.exp(lo), p) <= n_of_u(math.exp(hi), p)


@given(
    r_small=st.floats(min_value=0.0, max_value=0.9),
    gap=st.floats(min_value=0.0, max_value=0.09),
    lu=st.floats(min_value=2.0, max_value=120.0),
)
@settings(max_examples=60, deadline=None)
def test_decay_check_monotone_in_sequence(r_small, gap, lu):
    params = CorrelationDecayParams(c_star=9.0, eta=0.5, delta=0.5)
    u = math.exp(lu)
    big = CorrelationSequence(kind="constant", value=r_small + gap)
    small = CorrelationSequence(kind="constant", value=r_small)
    if check_decay_bound(big, u, params).passed:
        assert check_decay_bound(small, u, params).passed


@given(lv=st.floats(min_value=-600.0, max_value=0.0))
@settings(max_examples=100, deadline=None)
def test_probability_round_trip(lv):
    p = Probability.from_log(lv)
    assert p.log_value == lv
    assert abs(p.value - math.exp(lv)) <= 1e-15 * math.exp(lv)


@given(t=st.floats(min_value=-30.0, max_value=30.0))
@settings(max_examples=100, deadline=None)
def test_survival_in_unit_interval(t):
    p = std_normal_sf(t)
    assert 0.0 <= p.value <= 1.0
    assert p.log_value <= 0.0
