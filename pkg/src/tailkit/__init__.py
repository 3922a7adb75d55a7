"""tailkit: tail asymptotics and rare-event simulation for sums and maxima
of dependent log-normal risks."""

from .asymptotics import (
    FactorModelSpec,
    ProductTailParams,
    TailRatios,
    expected_total_tail_ratio,
    factor_marginal_tail,
    finite_sum_tail,
    product_tail,
    random_sum_tail_factor,
    random_sum_tail_lognormal,
)
from .claims import ClaimCountSpec
from .dependence import (
    ConditionReport,
    CorrelationDecayParams,
    CorrelationModel,
    CorrelationSequence,
    GaussianModelSpec,
    check_decay_bound,
    check_pairwise_cap,
    cholesky_factor,
    epsilon_of_u,
    factor_correlation,
    n_of_u,
)
from .errors import (
    ConfigError,
    DomainError,
    FactorizationError,
    MomentConditionError,
    QuadratureError,
    TailkitError,
)
from .estimators import (
    Estimate,
    ShareDiagnostic,
    ak_conditional_tail,
    big_jump_share,
    crude_mc_tail,
)
from .normal import (
    Probability,
    log_std_normal_sf,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
    std_normal_sf,
)
from .quadrature import (
    bivariate_joint_tail,
    exact_sum2_quadrature,
    log_bivariate_joint_tail,
    max_tail_quadrature,
    max_tail_quadrature_random,
    product_tail_exact,
)
from .regvar import CONSTANT_ONE, RegVaryingSpec
from .sampling import (
    PerturbedTailSpec,
    sample_factor_claims,
    sample_gaussian_claims,
)

__version__ = "0.1.0"

__all__ = [
    "CONSTANT_ONE",
    "ClaimCountSpec",
    "ConditionReport",
    "ConfigError",
    "CorrelationDecayParams",
    "CorrelationModel",
    "CorrelationSequence",
    "DomainError",
    "Estimate",
    "FactorModelSpec",
    "FactorizationError",
    "GaussianModelSpec",
    "MomentConditionError",
    "PerturbedTailSpec",
    "Probability",
    "ProductTailParams",
    "QuadratureError",
    "RegVaryingSpec",
    "ShareDiagnostic",
    "TailRatios",
    "TailkitError",
    "ak_conditional_tail",
    "big_jump_share",
    "bivariate_joint_tail",
    "check_decay_bound",
    "check_pairwise_cap",
    "cholesky_factor",
    "crude_mc_tail",
    "epsilon_of_u",
    "exact_sum2_quadrature",
    "expected_total_tail_ratio",
    "factor_correlation",
    "factor_marginal_tail",
    "finite_sum_tail",
    "log_bivariate_joint_tail",
    "log_std_normal_sf",
    "max_tail_quadrature",
    "max_tail_quadrature_random",
    "n_of_u",
    "product_tail",
    "product_tail_exact",
    "random_sum_tail_factor",
    "random_sum_tail_lognormal",
    "sample_factor_claims",
    "sample_gaussian_claims",
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_quantile",
    "std_normal_sf",
]
