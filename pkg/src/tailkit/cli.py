"""Command-line experiment harness.

Subcommands
-----------
``asym``      evaluate closed-form tail values over the threshold grid
``simulate``  run the requested estimators over the grid
``compare``   estimators against a formula, with ratio trend summary
``validate``  PASS/FAIL report for the model conditions

Exit codes: 0 success, 1 configuration error, 2 every row failed,
3 validation failures.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from .asymptotics import (
    FactorModelSpec,
    factor_marginal_tail,
    finite_sum_tail,
    product_tail,
    random_sum_tail_factor,
    random_sum_tail_lognormal,
)
from .config import ExperimentConfig, load_config
from .dependence import GaussianModelSpec, check_decay_bound, check_pairwise_cap
from .errors import ConfigError, MomentConditionError, TailkitError
from .estimators import ak_conditional_tail, crude_mc_tail
from .quadrature import (
    exact_sum2_quadrature,
    max_tail_quadrature_random,
    product_tail_exact,
)
from .report import ReportRow, render_report

PREFACTOR_NOTE = (
    "product-tail prefactor convention: sigma * L1(u^g) * L2(u^(1-g))"
    " / (sqrt(2 pi) log u) * exp(-(log u)^2 / (2 sigma^2))"
    " (single power of sigma, consistent with the exact normal tail)"
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # map usage errors onto the config exit code
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="tailkit", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, hlp in (
        ("asym", "evaluate closed-form tail asymptotics"),
        ("simulate", "run Monte Carlo / quadrature estimators"),
        ("compare", "estimators vs a formula with trend summary"),
        ("validate", "check model conditions"),
    ):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--config", required=True, help="path to the JSON experiment config")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--workers", type=int, help="estimator shard count (default: TAILKIT_WORKERS or 1)")
        p.add_argument("--seed", type=int, help="override the config seed")
    return parser


def _resolve_workers(cfg: ExperimentConfig, args) -> int:
    if args.workers is not None:
        return max(int(args.workers), 1)
    if cfg.workers is not None:
        return cfg.workers
    env = os.environ.get("TAILKIT_WORKERS")
    if env:
        try:
            return max(int(env), 1)
        except ValueError as exc:
            raise ConfigError(f"TAILKIT_WORKERS is not an integer: {env!r}") from exc
    return 1


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- formula and estimator dispatch -------------------------------------------


def _formula_log_value(cfg: ExperimentConfig, formula: str, u: float) -> float:
    if formula == "thm1":
        if not isinstance(cfg.model, FactorModelSpec) or cfg.counts is None:
            raise ConfigError("formula 'thm1' needs a factor model and a claim_count")
        return random_sum_tail_factor(cfg.model, cfg.counts, u).log_value
    if formula == "thm2":
        if cfg.counts is None:
            raise ConfigError("formula 'thm2' needs a claim_count")
        return random_sum_tail_lognormal(cfg.counts.mean(), u).log_value
    if formula == "eqNN":
        if cfg.counts is None or cfg.counts.family != "fixed":
            raise ConfigError("formula 'eqNN' needs a fixed claim_count")
        return finite_sum_tail(cfg.counts.n, u).log_value
    if formula == "ff":
        if not isinstance(cfg.model, FactorModelSpec):
            raise ConfigError("formula 'ff' needs a factor model")
        return factor_marginal_tail(cfg.model, u, cfg.claim_index).log_value
    if formula == "lemma1":
        if cfg.product is None:
            raise ConfigError("formula 'lemma1' needs product parameters")
        return product_tail(cfg.product, u).log_value
    raise ConfigError(f"unknown formula {formula!r}")


def _quadrature_estimate(cfg: ExperimentConfig, formula: str, statistic: str, u: float):
    if formula == "lemma1":
        p = cfg.product
        if p is None:
            raise ConfigError("lemma1 quadrature needs product parameters")
        if not (p.tail1.is_constant and p.tail1.scale == 1.0 and p.tail2.is_constant and p.tail2.scale == 1.0):
            raise TailkitError("exact product tail known only for constant unit tail perturbations")
        return product_tail_exact(p.sigma1, p.sigma2, u)
    model, counts = cfg.model, cfg.counts
    if counts is None:
        raise ConfigError("quadrature estimator needs a claim_count")
    if statistic == "max":
        if isinstance(model, FactorModelSpec):
            if model.idiosyncratic != "standard-normal" or not (
                model.base_tail.is_constant and model.base_tail.scale == 1.0
            ):
                raise TailkitError("max-tail quadrature covers standard-normal factor models only")
            return max_tail_quadrature_random(counts, model.rho, u)
        if isinstance(model, GaussianModelSpec):
            loading = model.equivalent_factor_loading
            if loading is None:
                raise TailkitError("max-tail quadrature needs an equicorrelated or independent model")
            return max_tail_quadrature_random(counts, loading, u)
        raise ConfigError("quadrature estimator needs a model")
    # sum statistic: the two-claim iid log-normal oracle
    iid_lognormal = (
        isinstance(model, FactorModelSpec)
        and model.rho == 0.0
        and model.idiosyncratic == "standard-normal"
        and model.base_tail.is_constant
        and model.base_tail.scale == 1.0
    ) or (isinstance(model, GaussianModelSpec) and model.kind == "independent")
    if iid_lognormal and counts.family == "fixed" and counts.n == 2:
        return exact_sum2_quadrature(u)
    raise TailkitError(
        "no quadrature oracle for the sum statistic with this model/count "
        "(available: two fixed iid standard log-normal claims)"
    )


def _estimator_estimate(cfg: ExperimentConfig, estimator: str, formula: str, statistic: str, u: float, workers: int):
    if estimator == "quadrature":
        return _quadrature_estimate(cfg, formula, statistic, u)
    if cfg.model is None or cfg.counts is None:
        raise ConfigError(f"estimator {estimator!r} needs a model and a claim_count")
    if estimator == "crude":
        return crude_mc_tail(
            cfg.model, cfg.counts, u, statistic=statistic,
            n_samples=cfg.n_samples, seed=cfg.seed, workers=workers,
        )
    if estimator == "conditional-ak":
        if not isinstance(cfg.model, FactorModelSpec):
            raise TailkitError("the conditional estimator requires the factor model")
        if statistic != "sum":
            raise TailkitError("the conditional estimator targets the sum statistic")
        return ak_conditional_tail(
            cfg.model, cfg.counts, u,
            n_samples=cfg.n_samples, seed=cfg.seed, workers=workers,
        )
    raise ConfigError(f"unknown estimator {estimator!r}")


def _statistics(cfg: ExperimentConfig) -> tuple[str, ...]:
    return ("sum", "max") if cfg.statistic == "both" else (cfg.statistic,)


def _linear(log_value: float) -> float:
    return math.exp(log_value) if log_value >= math.log(1e-300) else 0.0


# -- subcommands ---------------------------------------------------------------


def _cmd_asym(cfg: ExperimentConfig, args) -> int:
    if not cfg.formulas:
        raise ConfigError("asym needs at least one entry in 'formulas'")
    rows = []
    failed = 0
    for u in cfg.grid:
        for formula in cfg.formulas:
            row = ReportRow(u=u, log_u=math.log(u), formula=formula)
            try:
                row.asym_value = _linear(_formula_log_value(cfg, formula, u))
            except ConfigError:
                raise
            except TailkitError as exc:
                row.error = str(exc)
                failed += 1
            rows.append(row)
    head = [f"config: {cfg.canonical_json()}", "command: asym", PREFACTOR_NOTE]
    _emit(render_report(rows, head_comments=head), args.out)
    if rows and failed == len(rows):
        return 2
    return 0


def _cmd_simulate(cfg: ExperimentConfig, args) -> int:
    if not cfg.estimators:
        raise ConfigError("simulate needs at least one entry in 'estimators'")
    workers = _resolve_workers(cfg, args)
    rows = []
    failed = 0
    for u in cfg.grid:
        for statistic in _statistics(cfg):
            for estimator in cfg.estimators:
                row = ReportRow(u=u, log_u=math.log(u), method=estimator, seed=cfg.seed)
                try:
                    est = _estimator_estimate(cfg, estimator, "", statistic, u, workers)
                    row.estimate = est.value
                    row.std_error = est.std_error
                    row.n_samples = est.n_samples
                    row.method = est.method
                    row.seed = est.seed
                except ConfigError:
                    raise
                except TailkitError as exc:
                    row.error = str(exc)
                    failed += 1
                rows.append(row)
    head = [
        f"config: {cfg.canonical_json()}",
        f"command: simulate statistic={cfg.statistic} workers={workers}",
    ]
    _emit(render_report(rows, head_comments=head), args.out)
    if rows and failed == len(rows):
        return 2
    return 0


def _cmd_compare(cfg: ExperimentConfig, args) -> int:
    if len(cfg.formulas) != 1:
        raise ConfigError("compare needs exactly one formula in 'formulas'")
    if not cfg.estimators:
        raise ConfigError("compare needs at least one estimator in 'estimators'")
    formula = cfg.formulas[0]
    workers = _resolve_workers(cfg, args)
    rows = []
    failed = 0
    trend: dict[str, list[tuple[float, float, float]]] = {}
    for u in cfg.grid:
        for statistic in _statistics(cfg):
            for estimator in cfg.estimators:
                row = ReportRow(u=u, log_u=math.log(u), formula=formula, seed=cfg.seed)
                try:
                    row.asym_value = _linear(_formula_log_value(cfg, formula, u))
                    est = _estimator_estimate(cfg, estimator, formula, statistic, u, workers)
                    row.estimate = est.value
                    row.std_error = est.std_error
                    row.n_samples = est.n_samples
                    row.method = est.method
                    row.seed = est.seed
                    if row.ratio is not None:
                        trend.setdefault(f"{est.method}/{statistic}", []).append(
                            (u, row.ratio, est.std_error / row.asym_value if row.asym_value else 0.0)
                        )
                except ConfigError:
                    raise
                except TailkitError as exc:
                    row.error = str(exc)
                    failed += 1
                rows.append(row)

    tail = []
    overall_pass = True
    for key in sorted(trend):
        points = trend[key]
        ratios = [r for _, r, _ in points]
        devs = [abs(r - 1.0) for r in ratios]
        nonincreasing = all(b <= a for a, b in zip(devs, devs[1:]))
        u_last, ratio_last, rel_se_last = points[-1]
        tol = max(cfg.compare_tolerance, 3.0 * rel_se_last)
        final_ok = abs(ratio_last - 1.0) <= tol
        status = "PASS" if (nonincreasing and final_ok) else "FAIL"
        overall_pass = overall_pass and status == "PASS"
        tail.append(f"compare[{key}] ratios: " + ",".join(repr(r) for r in ratios))
        tail.append(f"compare[{key}] abs-deviation nonincreasing: {str(nonincreasing).lower()}")
        tail.append(
            f"compare[{key}] final |ratio-1| = {abs(ratio_last - 1.0)!r} "
            f"tolerance = {tol!r} at u = {u_last!r}"
        )
        tail.append(f"compare[{key}] result: {status}")
    if trend:
        tail.append(f"compare overall: {'PASS' if overall_pass else 'FAIL'}")

    head = [
        f"config: {cfg.canonical_json()}",
        f"command: compare formula={formula} statistic={cfg.statistic} workers={workers}",
        PREFACTOR_NOTE,
    ]
    _emit(render_report(rows, head_comments=head, tail_comments=tail), args.out)
    if rows and failed == len(rows):
        return 2
    return 0


def _cmd_validate(cfg: ExperimentConfig, args) -> int:
    lines = []
    any_fail = False

    if cfg.counts is not None:
        try:
            value = cfg.counts.moment_value()
            lines.append(
                f"claim-count moment condition: PASS "
                f"E[(1+delta)^N] = {value!r} (delta = {cfg.counts.delta!r})"
            )
        except MomentConditionError as exc:
            any_fail = True
            lines.append(f"claim-count moment condition: FAIL {exc} [{exc.inequality}]")

    v = cfg.validation
    if v is not None and isinstance(cfg.model, GaussianModelSpec) and v.rho is not None:
        n_probe = cfg.model.matrix.shape[0] if cfg.model.kind == "explicit" else max(
            2, cfg.counts.n if (cfg.counts is not None and cfg.counts.family == "fixed") else 2
        )
        report = check_pairwise_cap(
            cfg.model.correlation(n_probe), v.rho_n if v.rho_n is not None else 0.0, v.rho
        )
        status = "PASS" if report.passed else "FAIL"
        any_fail = any_fail or not report.passed
        lines.append(
            f"pairwise correlation cap: {status} "
            f"max entry = {report.detail['max_entry']!r} cap = {report.detail['cap']!r} "
            f"violations = {len(report.violations)}"
        )

    if v is not None and v.rho_sequence is not None and v.decay is not None:
        report = check_decay_bound(v.rho_sequence, v.u, v.decay)
        d = report.detail
        status = "PASS" if report.passed else "FAIL"
        any_fail = any_fail or not report.passed
        lines.append(
            f"correlation decay bound: {status} "
            f"n(u) = {int(d['n_u'])} rho(n(u)) = {d['rho_at_n_u']!r} "
            f"bound = {d['bound']!r} epsilon(u) = {d['epsilon_u']!r} u = {v.u!r}"
        )

    if not lines:
        lines.append("nothing to validate: provide claim_count and/or validation config")
    _emit("\n".join(lines) + "\n", args.out)
    return 3 if any_fail else 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = load_config(args.config)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("seed must be a nonnegative integer")
            object.__setattr__(cfg, "seed", int(args.seed))
        handler = {
            "asym": _cmd_asym,
            "simulate": _cmd_simulate,
            "compare": _cmd_compare,
            "validate": _cmd_validate,
        }[args.command]
        return handler(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        print("usage: tailkit asym|simulate|compare|validate --config <path> "
              "[--out <path>] [--workers k] [--seed s]", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
