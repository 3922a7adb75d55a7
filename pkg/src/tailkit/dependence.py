"""Dependence structures: the common-factor correlation, general Gaussian
correlation models, and the validators for the correlation growth and
claim-horizon conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, FactorizationError

_SYMMETRY_TOL = 1e-12
_PIVOT_TOL = -1e-10


def factor_correlation(rho: float) -> float:
    """Pairwise correlation induced by the common-factor construction.

    With X_i = rho*Z0 + sqrt(1-rho^2)*Z_i and iid Z's, corr(X_i, X_j) for
    i != j is rho**2.
    """
    rho = float(rho)
    if not (math.isfinite(rho) and 0.0 <= rho < 1.0):
        raise DomainError(f"factor loading must be in [0, 1), got {rho}")
    return rho * rho


@dataclass(frozen=True)
class CorrelationModel:
    """A correlation matrix for one batch of jointly Gaussian log-claims.

    Symmetric with unit diagonal; positive semidefiniteness is established
    by ``cholesky_factor`` (tolerance -1e-10 on pivots).
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise DomainError(f"correlation matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise DomainError("correlation matrix has non-finite entries")
        if np.max(np.abs(m - m.T)) > _SYMMETRY_TOL:
            raise DomainError("correlation matrix is not symmetric")
        if np.max(np.abs(np.diag(m) - 1.0)) > _SYMMETRY_TOL:
            raise DomainError("correlation matrix diagonal must be 1")
        if np.max(np.abs(m)) > 1.0 + _SYMMETRY_TOL:
            raise DomainError("correlation entries must lie in [-1, 1]")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def equicorrelated(cls, n: int, r: float) -> "CorrelationModel":
        """Unit diagonal, constant off-diagonal r in [0, 1); PSD for that range."""
        if int(n) != n or n < 1:
            raise DomainError(f"dimension must be an integer >= 1, got {n}")
        r = float(r)
        if not 0.0 <= r < 1.0:
            raise DomainError(f"equicorrelation must be in [0, 1), got {r}")
        m = np.full((n, n), r)
        np.fill_diagonal(m, 1.0)
        return cls(matrix=m)

    @classmethod
    def independent(cls, n: int) -> "CorrelationModel":
        return cls.equicorrelated(n, 0.0)

    def max_off_diagonal(self) -> float:
        if self.n == 1:
            return 0.0
        off = self.matrix[~np.eye(self.n, dtype=bool)]
        return float(off.max())


def cholesky_factor(model: CorrelationModel) -> np.ndarray:
    """Lower-triangular T with T @ T.T reproducing the matrix within 1e-12.

    Tolerates pivots down to -1e-10 (clamped to zero) so legitimate
    near-boundary matrices factor; smaller pivots raise FactorizationError
    naming the failing index.
    """
    a = model.matrix
    n = model.n
    t = np.zeros_like(a)
    for j in range(n):
        d = a[j, j] - float(t[j, :j] @ t[j, :j])
        if d < _PIVOT_TOL:
            raise FactorizationError(
                f"matrix is not positive semidefinite: pivot {j} = {d}",
                pivot_index=j,
            )
        d = max(d, 0.0)
        t[j, j] = math.sqrt(d)
        if j + 1 < n:
            rest = a[j + 1 :, j] - t[j + 1 :, :j] @ t[j, :j]
            if t[j, j] > 0.0:
                t[j + 1 :, j] = rest / t[j, j]
            # zero pivot: the column must already be represented; leave zeros
    return t


@dataclass(frozen=True)
class GaussianModelSpec:
    """Rule producing the correlation matrix for each claim count n.

    kinds: "equicorrelated" (parameter r), "independent", "explicit" (one
    fixed matrix, usable only with a matching fixed claim count).
    """

    kind: str
    r: float = 0.0
    matrix: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("equicorrelated", "independent", "explicit"):
            raise DomainError(f"unknown gaussian model kind {self.kind!r}")
        if self.kind == "equicorrelated" and not 0.0 <= float(self.r) < 1.0:
            raise DomainError(f"equicorrelation must be in [0, 1), got {self.r}")
        if self.kind == "explicit":
            if self.matrix is None:
                raise DomainError("explicit gaussian model needs a matrix")
            object.__setattr__(self, "matrix", CorrelationModel(self.matrix).matrix)

    def correlation(self, n: int) -> CorrelationModel:
        if self.kind == "equicorrelated":
            return CorrelationModel.equicorrelated(n, self.r)
        if self.kind == "independent":
            return CorrelationModel.independent(n)
        model = CorrelationModel(self.matrix)
        if model.n != n:
            raise DomainError(
                f"explicit correlation matrix is {model.n}x{model.n}, "
                f"cannot serve claim count {n}"
            )
        return model

    @property
    def equivalent_factor_loading(self) -> float | None:
        """sqrt(r) for the equicorrelated kind, 0 for independent, else None."""
        if self.kind == "equicorrelated":
            return math.sqrt(self.r)
        if self.kind == "independent":
            return 0.0
        return None


# -- threshold functions -----------------------------------------------------


@dataclass(frozen=True)
class CorrelationDecayParams:
    """Parameters of the correlation-decay criterion.

    c_star must exceed 8 strictly; eta and delta are positive.  delta is the
    same constant as in the claim-count moment condition.
    """

    c_star: float
    eta: float
    delta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.c_star) and self.c_star > 8.0):
            raise DomainError(f"c_star must be > 8, got {self.c_star}")
        if not (math.isfinite(self.eta) and self.eta > 0.0):
            raise DomainError(f"eta must be positive, got {self.eta}")
        if not (math.isfinite(self.delta) and self.delta > 0.0):
            raise DomainError(f"delta must be positive, got {self.delta}")


def n_of_u(u: float, params: CorrelationDecayParams) -> int:
    """Claim-horizon index floor((1+eta) (log u)^2 / (2 log(1+delta)))."""
    u = float(u)
    if not u > 1.0:
        raise DomainError(f"u must exceed 1, got {u}")
    log_u = math.log(u)
    return int(math.floor((1.0 + params.eta) * log_u * log_u / (2.0 * math.log1p(params.delta))))


def epsilon_of_u(u: float) -> float:
    """Threshold-reduction exponent 4 log(log u) / log u; needs u > e.

    The value can exceed 1 for u below about e^e... callers using the
    reduced threshold u^(1-eps) must guard that regime themselves.
    """
    u = float(u)
    if not u > math.e:
        raise DomainError(f"u must exceed e, got {u}")
    log_u = math.log(u)
    return 4.0 * math.log(log_u) / log_u


# -- condition validators ----------------------------------------------------


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of a dependence-condition check with its computed quantities."""

    passed: bool
    detail: dict = field(default_factory=dict)
    violations: tuple = ()

    def __bool__(self) -> bool:
        return self.passed


def check_pairwise_cap(model: CorrelationModel, rho_n: float, rho: float) -> ConditionReport:
    """Every off-diagonal entry must be <= max(rho_n, rho).

    rho is the global correlation level in (0, 1); rho_n the per-size bound
    sequence value for this n.  Violating index pairs (i, j), i < j, are
    listed in the report.
    """
    rho = float(rho)
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho must be in (0, 1), got {rho}")
    cap = max(float(rho_n), rho)
    m = model.matrix
    bad = []
    for i in range(model.n):
        for j in range(i + 1, model.n):
            if m[i, j] > cap:
                bad.append((i, j))
    return ConditionReport(
        passed=not bad,
        detail={"cap": cap, "max_entry": model.max_off_diagonal()},
        violations=tuple(bad),
    )


@dataclass(frozen=True)
class CorrelationSequence:
    """Bound sequence rho_n supplied as one of three rules.

    kinds: "constant" (value), "log-sqrt" with rho_n = 1 - c*log(n)/sqrt(n),
    and "table" (explicit values, last entry reused beyond the table).
    """

    kind: str
    value: float = 0.0
    c: float = 1.0
    values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "log-sqrt", "table"):
            raise DomainError(f"unknown correlation sequence kind {self.kind!r}")
        if self.kind == "table" and not self.values:
            raise DomainError("table sequence needs at least one value")
        if self.kind == "table":
            object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def at(self, n: int) -> float:
        if n < 1:
            raise DomainError(f"sequence index must be >= 1, got {n}")
        if self.kind == "constant":
            return float(self.value)
        if self.kind == "log-sqrt":
            return 1.0 - self.c * math.log(n) / math.sqrt(n)
        return self.values[min(n, len(self.values)) - 1]


def check_decay_bound(
    rho_seq: CorrelationSequence, u: float, params: CorrelationDecayParams
) -> ConditionReport:
    """Check rho_{n(u)} <= 1 - c_star * log(log u) / log u at level u > e.

    The report carries n(u), the sequence value there, the bound, and the
    threshold-reduction exponent for the same u.
    """
    u = float(u)
    if not u > math.e:
        raise DomainError(f"u must exceed e, got {u}")
    log_u = math.log(u)
    horizon = n_of_u(u, params)
    rho_at = rho_seq.at(max(horizon, 1))
    bound = 1.0 - params.c_star * math.log(log_u) / log_u
    return ConditionReport(
        passed=rho_at <= bound,
        detail={
            "n_u": float(horizon),
            "rho_at_n_u": rho_at,
            "bound": bound,
            "epsilon_u": epsilon_of_u(u),
        },
    )
