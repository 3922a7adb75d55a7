import math

import pytest

from tailkit import (
    ClaimCountSpec,
    DomainError,
    FactorModelSpec,
    MomentConditionError,
    ProductTailParams,
    RegVaryingSpec,
    TailRatios,
    expected_total_tail_ratio,
    factor_marginal_tail,
    finite_sum_tail,
    log_std_normal_sf,
    product_tail,
    random_sum_tail_factor,
    random_sum_tail_lognormal,
    std_normal_sf,
)
from tailkit.quadrature import log_product_tail_exact

from ._oracles import geometric_partial_mean

PHI4_OVER_4 = 3.345755644122134e-05  # phi(4)/4, frozen scalar oracle


class TestProductTail:
    def test_exact_unit_case(self):
        # iid LN(0,1) factors: exact tail Psi(log u / sqrt(2)); this pins the
        # single-sigma prefactor (the sigma^2 variant would give ratio ~ 2)
        p = ProductTailParams(sigma1=1.0, sigma2=1.0)
        u = math.exp(10.0 * math.sqrt(2.0))
        ratio = math.exp(product_tail(p, u).log_value - log_product_tail_exact(1.0, 1.0, u))
        assert 0.99 <= ratio <= 1.01

    def test_equal_indices_drop_the_exponential_factor(self):
        t = RegVaryingSpec(scale=2.0, index=0.7, log_exponent=0.0)
        p = ProductTailParams(sigma1=1.0, sigma2=1.0, tail1=t, tail2=t)
        u = math.exp(9.0)
        log_u = 9.0
        g = p.gamma
        manual = (
            math.log(p.sigma)
            + t.log_value_at(g * log_u)
            + t.log_value_at((1 - g) * log_u)
            - 0.5 * math.log(2 * math.pi)
            - math.log(log_u)
            - log_u**2 / (2 * p.sigma**2)
        )
        assert product_tail(p, u).log_value == pytest.approx(manual, rel=1e-15)

    def test_swap_symmetry_exact(self):
        t1 = RegVaryingSpec(scale=1.5, index=0.3, log_exponent=1.0)
        t2 = RegVaryingSpec(scale=0.7, index=-0.2, log_exponent=0.0)
        a = ProductTailParams(sigma1=0.8, sigma2=1.7, tail1=t1, tail2=t2)
        b = ProductTailParams(sigma1=1.7, sigma2=0.8, tail1=t2, tail2=t1)
        for u in (math.exp(3.0), math.exp(7.0), math.exp(15.0)):
            assert product_tail(a, u).log_value == product_tail(b, u).log_value

    def test_derived_quantities(self):
        p = ProductTailParams(sigma1=1.0, sigma2=2.0)
        assert p.gamma == pytest.approx(0.2)
        assert p.sigma == pytest.approx(math.sqrt(5.0))
        assert p.sigma_star**2 == pytest.approx(p.gamma * (1 - p.gamma) * p.sigma**2)

    def test_domain(self):
        p = ProductTailParams(sigma1=1.0, sigma2=1.0)
        with pytest.raises(DomainError):
            product_tail(p, math.e)
        with pytest.raises(DomainError):
            ProductTailParams(sigma1=0.0, sigma2=1.0)


class TestMarginalTail:
    def test_scalar_value_rho_half(self):
        model = FactorModelSpec(rho=0.5)
        value = factor_marginal_tail(model, math.exp(4.0)).value
        assert value == pytest.approx(PHI4_OVER_4, abs=1e-9)
        # sits above the exact tail by the Mills correction, about 1/16
        assert value / std_normal_sf(4.0).value == pytest.approx(1.0564, abs=2e-3)

    def test_rho_invariance_for_constant_one(self):
        u = math.exp(5.0)
        vals = {factor_marginal_tail(FactorModelSpec(rho=r), u).log_value for r in (0.0, 0.3, 0.9)}
        assert len(vals) == 1

    def test_zero_ratio_gives_zero(self):
        model = FactorModelSpec(rho=0.5, ratios=TailRatios.constant(0.0))
        assert factor_marginal_tail(model, math.exp(4.0)).value == 0.0

    def test_claim_specific_ratio(self):
        model = FactorModelSpec(rho=0.2, ratios=TailRatios(head=(0.5, 1.5), default=1.0))
        u = math.exp(6.0)
        v1 = factor_marginal_tail(model, u, i=1).value
        v2 = factor_marginal_tail(model, u, i=2).value
        v3 = factor_marginal_tail(model, u, i=3).value
        assert v2 == pytest.approx(3.0 * v1, rel=1e-12)
        assert v3 == pytest.approx(2.0 * v1, rel=1e-12)


class TestFiniteSum:
    def test_single_claim_is_exact_lognormal_tail(self):
        assert finite_sum_tail(1, math.exp(3.0)).value == pytest.approx(
            std_normal_sf(3.0).value, rel=1e-14
        )

    def test_two_claims(self):
        assert finite_sum_tail(2, math.exp(6.0)).value == pytest.approx(
            2.0 * std_normal_sf(6.0).value, rel=1e-14
        )

    def test_rejects_zero_claims(self):
        with pytest.raises(DomainError):
            finite_sum_tail(0, math.exp(4.0))


class TestExpectedTotalTailRatio:
    def test_unit_ratios_give_mean(self):
        model = FactorModelSpec(rho=0.5)
        for counts in (
            ClaimCountSpec.fixed(4, delta=1.0),
            ClaimCountSpec.poisson(3.0, delta=0.5),
            ClaimCountSpec.geometric(0.5, delta=0.5),
        ):
            assert expected_total_tail_ratio(model, counts) == pytest.approx(
                counts.mean(), rel=1e-11
            )

    def test_fixed_two_with_listed_ratios(self):
        model = FactorModelSpec(rho=0.0, ratios=TailRatios(head=(0.5, 1.5), default=1.0))
        assert expected_total_tail_ratio(model, ClaimCountSpec.fixed(2)) == 2.0

    def test_geometric_matches_partial_sum_oracle(self):
        model = FactorModelSpec(rho=0.0)
        counts = ClaimCountSpec.geometric(0.5, delta=0.5)
        assert expected_total_tail_ratio(model, counts) == pytest.approx(
            geometric_partial_mean(0.5), rel=1e-11
        )

    def test_zero_ratios(self):
        model = FactorModelSpec(rho=0.0, ratios=TailRatios.constant(0.0))
        assert expected_total_tail_ratio(model, ClaimCountSpec.poisson(2.0)) == 0.0

    def test_divergent_count_rejected(self):
        model = FactorModelSpec(rho=0.0)
        with pytest.raises(MomentConditionError):
            expected_total_tail_ratio(model, ClaimCountSpec.geometric(0.2, delta=0.5))


class TestRandomSumTails:
    def test_reduction_to_lognormal_constant(self):
        counts = ClaimCountSpec.fixed(3, delta=1.0)
        for rho in (0.0, 0.5, 0.9):
            model = FactorModelSpec(rho=rho)
            for u in (math.exp(4.0), math.exp(9.0), math.exp(25.0)):
                lhs = random_sum_tail_factor(model, counts, u)
                rhs = random_sum_tail_lognormal(3.0, u)
                assert lhs.log_value == rhs.log_value

    def test_fixed_count_approaches_finite_sum(self):
        model = FactorModelSpec(rho=0.3)
        counts = ClaimCountSpec.fixed(4, delta=1.0)
        u = math.exp(20.0)
        ratio = math.exp(
            random_sum_tail_factor(model, counts, u).log_value
            - finite_sum_tail(4, u).log_value
        )
        assert abs(ratio - 1.0) <= 1.0 / 400.0

    def test_scalar_value(self):
        assert random_sum_tail_lognormal(1.0, math.exp(4.0)).value == pytest.approx(
            PHI4_OVER_4, abs=1e-9
        )

    def test_linearity_in_mean(self):
        u = math.exp(7.0)
        one = random_sum_tail_lognormal(1.0, u).value
        two = random_sum_tail_lognormal(2.0, u).value
        assert two == pytest.approx(2.0 * one, rel=1e-14)

    def test_mills_convergence_to_exact_sf(self):
        u = math.exp(30.0)
        ratio = math.exp(
            random_sum_tail_lognormal(1.0, u).log_value - log_std_normal_sf(30.0)
        )
        assert abs(ratio - 1.0) < 0.0015

    def test_rho_sensitivity_needs_log_exponent(self):
        u = math.exp(10.0)
        # alpha = 0: the split product u^{r^2 b} * u^{(1-r^2) b} collapses, no rho effect
        flat = RegVaryingSpec(scale=1.0, index=0.5, log_exponent=0.0)
        counts = ClaimCountSpec.fixed(2, delta=1.0)
        v0 = random_sum_tail_factor(FactorModelSpec(rho=0.3, base_tail=flat), counts, u)
        v1 = random_sum_tail_factor(FactorModelSpec(rho=0.7, base_tail=flat), counts, u)
        assert v0.log_value == pytest.approx(v1.log_value, rel=1e-14)
        # alpha = 1: the exponents redistribute the slowly varying mass
        curved = RegVaryingSpec(scale=1.0, index=0.5, log_exponent=1.0)
        w0 = random_sum_tail_factor(FactorModelSpec(rho=0.0, base_tail=curved), counts, u)
        w1 = random_sum_tail_factor(FactorModelSpec(rho=0.5, base_tail=curved), counts, u)
        assert abs(w1.log_value - w0.log_value) > 1e-3

    def test_outputs_positive_and_decreasing(self):
        model = FactorModelSpec(rho=0.4, base_tail=RegVaryingSpec(1.0, 0.2, 1.0))
        counts = ClaimCountSpec.geometric(0.5, delta=0.5)
        grid = [math.exp(k) for k in (3.0, 4.0, 6.0, 9.0, 14.0)]
        logs = [random_sum_tail_factor(model, counts, u).log_value for u in grid]
        assert all(math.isfinite(v) for v in logs)
        assert all(b < a for a, b in zip(logs, logs[1:]))

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            random_sum_tail_lognormal(0.0, math.exp(4.0))
        with pytest.raises(DomainError):
            random_sum_tail_lognormal(1.0, 2.0)
