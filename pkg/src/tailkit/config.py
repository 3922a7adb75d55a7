"""JSON experiment configuration: parsing, strict validation, canonical form.

Unknown keys are rejected everywhere (a typo should fail loudly, not run a
different experiment).  ``canonical_json`` reserializes the parsed config
with sorted keys so reports can embed a deterministic description of what
produced them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import FactorModelSpec, ProductTailParams, TailRatios
from .claims import ClaimCountSpec
from .dependence import CorrelationDecayParams, CorrelationSequence, GaussianModelSpec
from .errors import ConfigError
from .regvar import RegVaryingSpec

FORMULAS = ("thm1", "thm2", "eqNN", "lemma1", "ff")
ESTIMATORS = ("crude", "conditional-ak", "quadrature")
STATISTICS = ("sum", "max", "both")


def _take(mapping: dict, allowed: set[str], context: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {context}: {sorted(unknown)}")


def _parse_regvar(d, context: str) -> RegVaryingSpec:
    if d is None:
        return RegVaryingSpec()
    if not isinstance(d, dict):
        raise ConfigError(f"{context} must be an object")
    _take(d, {"scale", "index", "log_exponent"}, context)
    try:
        return RegVaryingSpec(
            scale=float(d.get("scale", 1.0)),
            index=float(d.get("index", 0.0)),
            log_exponent=float(d.get("log_exponent", 0.0)),
        )
    except Exception as exc:
        raise ConfigError(f"bad {context}: {exc}") from exc


def _parse_model(d):
    if not isinstance(d, dict) or "type" not in d:
        raise ConfigError("model must be an object with a 'type' key")
    kind = d["type"]
    if kind == "factor":
        _take(d, {"type", "rho", "base_tail", "tail_ratios", "idiosyncratic", "splice_point"}, "model")
        ratios = TailRatios()
        if "tail_ratios" in d:
            rd = d["tail_ratios"]
            if not isinstance(rd, dict):
                raise ConfigError("model.tail_ratios must be an object")
            _take(rd, {"values", "default"}, "model.tail_ratios")
            ratios = TailRatios(
                head=tuple(float(c) for c in rd.get("values", ())),
                default=float(rd.get("default", 1.0)),
            )
        try:
            return FactorModelSpec(
                rho=float(d.get("rho", 0.0)),
                base_tail=_parse_regvar(d.get("base_tail"), "model.base_tail"),
                ratios=ratios,
                idiosyncratic=d.get("idiosyncratic", "standard-normal"),
                splice_point=float(d["splice_point"]) if "splice_point" in d else None,
            )
        except ConfigError:
            raise
        except Exception as exc:
            raise ConfigError(f"bad factor model: {exc}") from exc
    if kind == "gaussian":
        _take(d, {"type", "correlation"}, "model")
        cd = d.get("correlation")
        if not isinstance(cd, dict) or "kind" not in cd:
            raise ConfigError("model.correlation must be an object with a 'kind' key")
        _take(cd, {"kind", "r", "matrix"}, "model.correlation")
        try:
            return GaussianModelSpec(
                kind=cd["kind"],
                r=float(cd.get("r", 0.0)),
                matrix=np.asarray(cd["matrix"], dtype=float) if "matrix" in cd else None,
            )
        except ConfigError:
            raise
        except Exception as exc:
            raise ConfigError(f"bad gaussian model: {exc}") from exc
    raise ConfigError(f"unknown model type {kind!r}")


def _parse_counts(d) -> ClaimCountSpec:
    if not isinstance(d, dict) or "family" not in d:
        raise ConfigError("claim_count must be an object with a 'family' key")
    _take(d, {"family", "n", "p", "lam", "probs", "delta"}, "claim_count")
    try:
        return ClaimCountSpec(
            family=d["family"],
            delta=float(d.get("delta", 1.0)),
            n=d.get("n"),
            p=d.get("p"),
            lam=d.get("lam"),
            probs=tuple(d["probs"]) if "probs" in d else None,
        )
    except Exception as exc:
        raise ConfigError(f"bad claim_count: {exc}") from exc


def _parse_grid(d) -> tuple[float, ...]:
    if d is None:
        return ()
    if isinstance(d, list):
        grid = tuple(float(u) for u in d)
    elif isinstance(d, dict):
        _take(d, {"from_log_u", "to_log_u", "count"}, "grid")
        try:
            lo, hi, count = float(d["from_log_u"]), float(d["to_log_u"]), int(d["count"])
        except KeyError as exc:
            raise ConfigError(f"grid object needs from_log_u, to_log_u, count: missing {exc}")
        if count < 1:
            raise ConfigError("grid count must be >= 1")
        if count == 1:
            grid = (math.exp(lo),)
        else:
            grid = tuple(math.exp(lo + i * (hi - lo) / (count - 1)) for i in range(count))
    else:
        raise ConfigError("grid must be a list of thresholds or a log-spacing object")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("grid must be strictly increasing")
    return grid


def _parse_product(d) -> ProductTailParams | None:
    if d is None:
        return None
    if not isinstance(d, dict):
        raise ConfigError("product must be an object")
    _take(d, {"sigma1", "sigma2", "tail1", "tail2"}, "product")
    try:
        return ProductTailParams(
            sigma1=float(d.get("sigma1", 1.0)),
            sigma2=float(d.get("sigma2", 1.0)),
            tail1=_parse_regvar(d.get("tail1"), "product.tail1"),
            tail2=_parse_regvar(d.get("tail2"), "product.tail2"),
        )
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"bad product params: {exc}") from exc


@dataclass(frozen=True)
class ValidationConfig:
    u: float
    decay: CorrelationDecayParams | None = None
    rho_sequence: CorrelationSequence | None = None
    rho: float | None = None
    rho_n: float | None = None


def _parse_validation(d) -> ValidationConfig | None:
    if d is None:
        return None
    if not isinstance(d, dict):
        raise ConfigError("validation must be an object")
    _take(d, {"u", "c_star", "eta", "rho_sequence", "rho", "rho_n"}, "validation")
    seq = None
    if "rho_sequence" in d:
        sd = d["rho_sequence"]
        if not isinstance(sd, dict) or "kind" not in sd:
            raise ConfigError("validation.rho_sequence needs a 'kind'")
        _take(sd, {"kind", "value", "c", "values"}, "validation.rho_sequence")
        try:
            seq = CorrelationSequence(
                kind=sd["kind"],
                value=float(sd.get("value", 0.0)),
                c=float(sd.get("c", 1.0)),
                values=tuple(sd.get("values", ())),
            )
        except Exception as exc:
            raise ConfigError(f"bad rho_sequence: {exc}") from exc
    return ValidationConfig(
        u=float(d.get("u", math.exp(10.0))),
        decay=None,  # finished in parse_config once delta is known
        rho_sequence=seq,
        rho=float(d["rho"]) if "rho" in d else None,
        rho_n=float(d["rho_n"]) if "rho_n" in d else None,
    ), (float(d["c_star"]) if "c_star" in d else 9.0), (float(d["eta"]) if "eta" in d else 0.5)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: model, claim count, thresholds, what to compute."""

    model: FactorModelSpec | GaussianModelSpec | None = None
    counts: ClaimCountSpec | None = None
    grid: tuple[float, ...] = ()
    statistic: str = "sum"
    estimators: tuple[str, ...] = ()
    formulas: tuple[str, ...] = ()
    n_samples: int = 10_000
    seed: int = 1
    workers: int | None = None
    out: str | None = None
    claim_index: int = 1
    product: ProductTailParams | None = None
    compare_tolerance: float = 0.05
    validation: ValidationConfig | None = None
    raw: dict = field(default_factory=dict, compare=False)

    def canonical_json(self) -> str:
        return json.dumps(self.raw, sort_keys=True, separators=(",", ":"))


_TOP_KEYS = {
    "model",
    "claim_count",
    "grid",
    "statistic",
    "estimators",
    "formulas",
    "n_samples",
    "seed",
    "workers",
    "out",
    "claim_index",
    "product",
    "compare_tolerance",
    "validation",
}


def parse_config(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    _take(raw, _TOP_KEYS, "config")

    statistic = raw.get("statistic", "sum")
    if statistic not in STATISTICS:
        raise ConfigError(f"statistic must be one of {STATISTICS}, got {statistic!r}")

    estimators = tuple(raw.get("estimators", ()))
    for e in estimators:
        if e not in ESTIMATORS:
            raise ConfigError(f"unknown estimator {e!r}; known: {ESTIMATORS}")
    formulas = tuple(raw.get("formulas", ()))
    for f in formulas:
        if f not in FORMULAS:
            raise ConfigError(f"unknown formula {f!r}; known: {FORMULAS}")

    n_samples = int(raw.get("n_samples", 10_000))
    if n_samples < 1:
        raise ConfigError("n_samples must be >= 1")
    seed = int(raw.get("seed", 1))
    if seed < 0:
        raise ConfigError("seed must be a nonnegative integer")
    workers = int(raw["workers"]) if "workers" in raw else None
    if workers is not None and workers < 1:
        raise ConfigError("workers must be >= 1")
    claim_index = int(raw.get("claim_index", 1))
    if claim_index < 1:
        raise ConfigError("claim_index must be >= 1")
    tolerance = float(raw.get("compare_tolerance", 0.05))
    if tolerance <= 0.0:
        raise ConfigError("compare_tolerance must be positive")

    counts = _parse_counts(raw["claim_count"]) if "claim_count" in raw else None

    validation = None
    if "validation" in raw:
        parsed, c_star, eta = _parse_validation(raw["validation"])
        delta = counts.delta if counts is not None else 0.5
        try:
            decay = CorrelationDecayParams(c_star=c_star, eta=eta, delta=delta)
        except Exception as exc:
            raise ConfigError(f"bad validation decay parameters: {exc}") from exc
        validation = ValidationConfig(
            u=parsed.u,
            decay=decay,
            rho_sequence=parsed.rho_sequence,
            rho=parsed.rho,
            rho_n=parsed.rho_n,
        )

    return ExperimentConfig(
        model=_parse_model(raw["model"]) if "model" in raw else None,
        counts=counts,
        grid=_parse_grid(raw.get("grid")),
        statistic=statistic,
        estimators=estimators,
        formulas=formulas,
        n_samples=n_samples,
        seed=seed,
        workers=workers,
        out=raw.get("out"),
        claim_index=claim_index,
        product=_parse_product(raw.get("product")),
        compare_tolerance=tolerance,
        validation=validation,
        raw=raw,
    )


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(raw)
