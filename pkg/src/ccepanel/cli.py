"""
Command-line interface.

Subcommands::

    ccepanel estimate  --input panel.csv --config model.cfg [--output table.txt]
    ccepanel test cd   --input resid.csv --column residual
    ccepanel test cips --input panel.csv --column tfp [--simulate-critical-values]
    ccepanel construct --input panel.csv --trade trade.csv --config build.cfg
    ccepanel simulate  --config sim.cfg --seed 1 [--threads 4]
    ccepanel summarize --input panel.csv --variables tfp,rd,rf

Every output begins with ``#``-prefixed manifest lines (inputs with content
hashes, config hash, seed, effective settings) and contains no timestamps,
so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import sys
import warnings
from pathlib import Path

import numpy as np
import pandas as pd

from . import __version__
from .config import RunConfig
from .construct import (
    ConstructionConfig,
    TradeMatrix,
    foreign_rd_panel,
    rd_stock_panel,
    tfp_share_based,
)
from .diagnostics import cd_test, cips_test, summary_stats
from .estimators import (
    DYNAMIC_ESTIMATORS,
    STATIC_ESTIMATORS,
    DynamicSpec,
    StaticSpec,
    fit_dynamic,
    fit_static,
)
from .estimators._base import UnitDroppedWarning
from .exceptions import PanelError
from .mcsim import ARDLDGPConfig, FactorDGPConfig, run_experiment
from .panel import load_panel
from .tables import build_table, column_label, summary_table

log = logging.getLogger("ccepanel")

COMMANDS = ("estimate", "test", "construct", "simulate", "summarize")


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class Manifest:
    """Header lines echoed at the top of every output."""

    def __init__(self, command: str):
        self.lines = [f"ccepanel {__version__}", f"command: {command}"]

    def input(self, role: str, path):
        self.lines.append(f"input {role}: {path} sha256={_sha256(path)}")

    def config(self, cfg: RunConfig | None):
        if cfg is not None:
            self.lines.append(f"config: {cfg.source} sha256={cfg.digest}")

    def item(self, key, value):
        self.lines.append(f"{key}: {value}")

    def render(self) -> str:
        return "".join(f"# {line}\n" for line in self.lines)


def _emit(text: str, manifest: Manifest, output):
    payload = manifest.render() + text
    if output:
        Path(output).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def _require_file(path, what):
    if path is None:
        raise PanelError(f"--{what} is required")
    if not Path(path).is_file():
        raise PanelError(f"{what} file not found: {path}")
    return path


def _load(args, cfg, manifest, variables=None):
    _require_file(args.input, "input")
    manifest.input("panel", args.input)
    unit_col = cfg.get_str("unit_col", "unit") if cfg else "unit"
    time_col = cfg.get_str("time_col", "year") if cfg else "year"
    interpolate = cfg.get_bool("interpolate", False) if cfg else False
    return load_panel(args.input, unit_col, time_col, variables=variables, interpolate=interpolate)


def _read_config(args, manifest, required=False):
    if args.config is None:
        if required:
            raise PanelError("--config is required for this command")
        return None
    cfg = RunConfig.read(args.config)
    manifest.config(cfg)
    return cfg


# -- estimate -------------------------------------------------------------


def _parse_estimator_token(token: str):
    name, _, flag = token.partition("+")
    name = name.strip().lower()
    if flag and flag.strip().lower() != "trend":
        raise PanelError(f"unknown estimator modifier in {token!r} (only '+trend')")
    if name not in STATIC_ESTIMATORS and name not in DYNAMIC_ESTIMATORS:
        raise PanelError(
            f"unknown estimator {name!r}; choose from {STATIC_ESTIMATORS + DYNAMIC_ESTIMATORS}"
        )
    return name, bool(flag)


def cmd_estimate(args) -> int:
    manifest = Manifest("estimate")
    cfg = _read_config(args, manifest) or RunConfig()
    dependent = args.dependent or cfg.get_str("dependent", "tfp")
    regressors = args.regressors.split(",") if args.regressors else cfg.get_list("regressors", ["rd", "rf"])
    tokens = args.estimator.split(",") if args.estimator else cfg.get_list("estimators", None)
    if not tokens:
        tokens = [cfg.get_str("estimator", "ccemg")]
    trend_all = args.trend or cfg.get_bool("trend", False)
    lags = [int(v) for v in args.lags.split(",")] if args.lags else cfg.get_list("p", [1], cast=int)
    cs_lags = cfg.get_int("cs_lags", None)
    include_intercept = cfg.get_bool("include_intercept", True)
    min_df = cfg.get_int("min_df", 1)
    order_row = cfg.get_bool("integration_order", None)
    cips_case = cfg.get_str("cips_case", "intercept")
    ds = _load(args, cfg, manifest)
    cfg.require_all_used()

    manifest.item("dependent", dependent)
    manifest.item("regressors", ",".join(regressors))
    manifest.item("estimators", ",".join(tokens))
    manifest.item("trend", trend_all)
    manifest.item("p", ",".join(map(str, lags)))
    manifest.item("cs_lags", "auto" if cs_lags is None else cs_lags)

    results = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", UnitDroppedWarning)
        for token in tokens:
            name, plus_trend = _parse_estimator_token(token)
            trend = trend_all or plus_trend
            if name in STATIC_ESTIMATORS:
                spec = StaticSpec(dependent, tuple(regressors), name, trend, include_intercept, min_df)
                results.append(fit_static(ds, spec))
            else:
                for p in lags:
                    spec = DynamicSpec(
                        dependent,
                        tuple(regressors),
                        p,
                        name,
                        cs_lags if name in ("cs_ardl", "cs_dlmg") else None,
                        trend,
                        min_df,
                    )
                    results.append(fit_dynamic(ds, spec))
    for w in caught:
        print(f"ccepanel: warning: {w.message}", file=sys.stderr)

    labels = [column_label(r) for r in results]
    digits = None if args.full_precision else 3
    table = build_table(results, labels, digits=digits, integration_order=order_row, cips_case=cips_case)
    _emit(table.render(args.format), manifest, args.output)
    return 0


# -- test -------------------------------------------------------------------


def cmd_test(args) -> int:
    manifest = Manifest(f"test {args.kind}")
    cfg = _read_config(args, manifest)
    column = args.column or (cfg.get_str("column") if cfg else None)
    if column is None:
        column = "residual" if args.kind == "cd" else None
    if column is None:
        raise PanelError("--column is required for the CIPS test")
    ds = _load(args, cfg, manifest, variables=[column])
    fmt = (lambda x: repr(float(x))) if args.full_precision else (lambda x: f"{x:.3f}")
    manifest.item("column", column)
    lines = []
    if args.kind == "cd":
        if cfg:
            cfg.require_all_used()
        res = cd_test(ds, column)
        lines += [
            f"CD statistic: {fmt(res.statistic)}",
            f"p-value: {fmt(res.p_value)}",
            f"unit pairs: {res.n_pairs}",
            f"skipped pairs: {res.skipped_pairs}",
            f"average overlap: {fmt(res.avg_overlap)}",
            f"reject weak dependence at 5%: {'yes' if res.rejects(0.05) else 'no'}",
        ]
    else:
        case = args.case or (cfg.get_str("case", "intercept") if cfg else "intercept")
        adf_lags = args.adf_lags if args.adf_lags is not None else (cfg.get_int("adf_lags", 0) if cfg else 0)
        reps = cfg.get_int("reps", 2000) if cfg else 2000
        if cfg:
            cfg.require_all_used()
        seed = args.seed if args.seed is not None else 0
        manifest.item("case", case)
        manifest.item("adf_lags", adf_lags)
        if args.simulate_critical_values:
            manifest.item("seed", seed)
            manifest.item("reps", reps)
        res = cips_test(
            ds, column, case, adf_lags, simulate_critical=args.simulate_critical_values, reps=reps, seed=seed
        )
        lines += [
            f"CIPS statistic: {fmt(res.statistic)}",
            f"units: {res.n_units}",
            f"periods (mean available): {res.n_periods}",
            f"critical values ({res.critical_value_source}): "
            + ", ".join(f"{int(l * 100)}%={fmt(v)}" for l, v in sorted(res.critical_values.items())),
            f"decision at 5%: {res.decision_5pct}",
            f"order of integration: {res.integration_order}",
        ]
        if res.dropped_units:
            lines.append(f"skipped units: {', '.join(map(str, res.dropped_units))}")
    _emit("\n".join(lines) + "\n", manifest, args.output)
    return 0


# -- construct --------------------------------------------------------------


def _window(cfg, key, default):
    vals = cfg.get_list(key, None, cast=int)
    if vals is None:
        return default
    if len(vals) != 2:
        raise PanelError(f"config key {key!r}: expected two years")
    return tuple(vals)


def cmd_construct(args) -> int:
    manifest = Manifest("construct")
    cfg = _read_config(args, manifest, required=True)
    ccfg = ConstructionConfig(
        delta_rd=cfg.get_float("delta_rd", 0.15),
        growth_window=_window(cfg, "growth_window", (1981, 1990)),
        fallback_window=_window(cfg, "fallback_window", (1990, 2000)),
        weight_scheme=cfg.get_str("weight_scheme", "lp"),
        partner_set=cfg.get_list("partner_set", None),
        gnp_to_gdp=cfg.get_str("gnp_to_gdp", None),
    )
    gerd = cfg.get_str("gerd_share", None)
    gdp = cfg.get_str("gdp", "gdp")
    stock_col = cfg.get_str("rd_stock", "rd_stock")
    foreign_col = cfg.get_str("foreign_rd", "rf_stock")
    tfp_out = cfg.get_str("tfp_output", None)
    capital = cfg.get_str("capital", "capital")
    labour = cfg.get_str("labour", "labour")
    xi = cfg.get_float("capital_share", None)
    take_logs = cfg.get_bool("log_outputs", False)
    ds = _load(args, cfg, manifest)
    cfg.require_all_used()

    new = {}
    if gerd is not None:
        new[stock_col] = rd_stock_panel(ds, gerd, gdp, ccfg)
        ds = ds.with_columns({stock_col: new[stock_col]})
    if args.trade:
        _require_file(args.trade, "trade")
        manifest.input("trade", args.trade)
        trade = TradeMatrix.read_csv(args.trade)
        new[foreign_col] = foreign_rd_panel(ds, trade, stock_col, ccfg)
    if tfp_out is not None:
        if xi is None:
            raise PanelError("tfp_output needs capital_share")
        Y, K, L = ds[gdp], ds[capital], ds[labour]
        ok = np.isfinite(Y) & np.isfinite(K) & np.isfinite(L)
        tfp = np.full(ds.shape, np.nan)
        tfp[ok] = tfp_share_based(Y[ok], K[ok], L[ok], xi)
        new[tfp_out] = tfp
    if not new:
        raise PanelError("nothing to construct: set gerd_share, tfp_output, or pass --trade")
    if take_logs:
        with np.errstate(divide="ignore", invalid="ignore"):
            new = {
                k: (np.where(v > 0, np.log(np.where(v > 0, v, 1.0)), np.nan) if k != tfp_out else v)
                for k, v in new.items()
            }
    manifest.item("weight_scheme", ccfg.weight_scheme)
    manifest.item("delta_rd", ccfg.delta_rd)
    manifest.item("new_columns", ",".join(new))
    out = ds.with_columns(new).to_frame()
    float_format = None if args.full_precision else "%.10g"
    _emit(out.to_csv(index=False, float_format=float_format, lineterminator="\n"), manifest, args.output)
    return 0


# -- simulate ---------------------------------------------------------------


def _pair_text(key, text):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise PanelError(f"config key {key!r}: expected two numbers, got {text!r}") from None
    if len(vals) != 2:
        raise PanelError(f"config key {key!r}: expected two numbers, got {text!r}")
    return vals


def _pair(cfg, key, default):
    text = cfg.get_str(key, None)
    return default if text is None else _pair_text(key, text)


def _dgp_from_config(cfg: RunConfig, seed: int):
    kind = cfg.get_str("dgp", "factor").lower()
    if kind == "factor":
        rd_law = cfg.get_str("gamma_rd_law", "0,0.5")
        rf_law = cfg.get_str("gamma_rf_law", "0,0.5")
        if rd_law.lower() == "none" or rf_law.lower() == "none":
            regressor_laws = None
        else:
            regressor_laws = (_pair_text("gamma_rd_law", rd_law), _pair_text("gamma_rf_law", rf_law))
        idio = cfg.get_list("idio_sd", [1.0, 1.0, 1.0], cast=float)
        return FactorDGPConfig(
            n_units=cfg.get_int("n_units", 50),
            n_periods=cfg.get_int("n_periods", 50),
            m=cfg.get_int("m", 1),
            alpha=cfg.get_float("alpha", 1.0),
            beta_true=_pair(cfg, "beta_true", (0.5, 0.3)),
            slope_sd=cfg.get_float("slope_sd", 0.0),
            gamma_law=_pair(cfg, "gamma_law", (0.5, 1.5)),
            gamma_regressor_laws=regressor_laws,
            factor_law=cfg.get_str("factor_law", "ar1"),
            factor_rho=cfg.get_float("factor_rho", 0.5),
            idio_sd=tuple(idio),
            correlate_loadings=cfg.get_bool("correlate_loadings", True),
            intercept_sd=cfg.get_float("intercept_sd", 1.0),
            seed=seed,
        ), ("tfp", ("rd", "rf"))
    if kind == "ardl":
        return ARDLDGPConfig(
            n_units=cfg.get_int("n_units", 30),
            n_periods=cfg.get_int("n_periods", 200),
            phi=cfg.get_float("phi", 0.5),
            b0=cfg.get_float("b0", 0.2),
            b1=cfg.get_float("b1", 0.1),
            x_rho=cfg.get_float("x_rho", 0.5),
            sd_e=cfg.get_float("sd_e", 1.0),
            sd_x=cfg.get_float("sd_x", 1.0),
            intercept_sd=cfg.get_float("intercept_sd", 1.0),
            theta_sd=cfg.get_float("theta_sd", 0.0),
            seed=seed,
        ), ("y", ("x",))
    raise PanelError(f"config key 'dgp': expected factor or ardl, got {kind!r}")


def cmd_simulate(args) -> int:
    manifest = Manifest("simulate")
    cfg = _read_config(args, manifest, required=True)
    seed = args.seed if args.seed is not None else cfg.get_int("seed", 0)
    if args.seed is not None:
        cfg.get_int("seed", None)
    dgp, (dep, regs) = _dgp_from_config(cfg, seed)
    reps = cfg.get_int("reps", 100)
    tokens = cfg.get_list("estimators", ["mg", "fe2", "ccemg"] if dep == "tfp" else ["ardl_mg", "cs_ardl", "cs_dlmg"])
    p = cfg.get_int("p", 1)
    dl_lags = cfg.get_int("dl_lags", None)
    cs_lags = cfg.get_int("cs_lags", None)
    cfg.require_all_used()

    specs, labels = [], []
    for token in tokens:
        name, trend = _parse_estimator_token(token)
        if name in STATIC_ESTIMATORS:
            specs.append(StaticSpec(dep, regs, name, trend))
        else:
            lag_order = dl_lags if (name == "cs_dlmg" and dl_lags is not None) else p
            specs.append(
                DynamicSpec(dep, regs, lag_order, name, cs_lags if name in ("cs_ardl", "cs_dlmg") else None, trend)
            )
        labels.append(token)
    manifest.item("seed", seed)
    manifest.item("reps", reps)
    manifest.item("estimators", ",".join(labels))
    report = run_experiment(dgp, specs, reps, labels=labels, threads=max(1, args.threads))
    if args.format == "csv":
        body = report.to_csv(float_format=None if args.full_precision else "%.6f")
    else:
        body = report.summary(digits=10 if args.full_precision else 4)
    _emit(body, manifest, args.output)
    return 0


# -- summarize --------------------------------------------------------------


def cmd_summarize(args) -> int:
    manifest = Manifest("summarize")
    cfg = _read_config(args, manifest)
    variables = args.variables.split(",") if args.variables else (cfg.get_list("variables") if cfg else None)
    log_input = args.log_input or (cfg.get_bool("log_input", False) if cfg else False)
    ds = _load(args, cfg, manifest, variables=variables)
    if cfg:
        cfg.require_all_used()
    variables = variables or list(ds.variables)
    frames = {v: summary_stats(ds, v, log_input=log_input) for v in variables}
    manifest.item("variables", ",".join(variables))
    table = summary_table(frames, digits=None if args.full_precision else 2)
    _emit(table.render(args.format), manifest, args.output)
    return 0


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="panel CSV (unit, year, variables...)")
    common.add_argument("--config", help="flat key = value configuration file")
    common.add_argument("--output", help="write here instead of standard output")
    common.add_argument("--seed", type=int, help="master random seed")
    common.add_argument("--threads", type=int, default=1, help="worker process cap")
    common.add_argument("--full-precision", action="store_true", help="print numbers at full precision")
    common.add_argument("--format", choices=("text", "csv"), default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="ccepanel", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=f"ccepanel {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", parents=[common], help="fit static or dynamic panel models")
    p.add_argument("--estimator", help="comma list, e.g. pols,fe2,ccemg,ccemg+trend")
    p.add_argument("--dependent")
    p.add_argument("--regressors", help="comma list")
    p.add_argument("--trend", action="store_true", help="add a unit-specific trend to every model")
    p.add_argument("--lags", help="comma list of ARDL orders p for dynamic estimators")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("test", parents=[common], help="CD or CIPS test on one column")
    p.add_argument("kind", choices=("cd", "cips"))
    p.add_argument("--column")
    p.add_argument("--case", choices=("intercept", "intercept_trend"))
    p.add_argument("--adf-lags", type=int)
    p.add_argument("--simulate-critical-values", action="store_true")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("construct", parents=[common], help="build R&D stocks, foreign R&D and TFP")
    p.add_argument("--trade", help="bilateral trade CSV")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo experiment")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("summarize", parents=[common], help="descriptive statistics")
    p.add_argument("--variables", help="comma list (default: all)")
    p.add_argument("--log-input", action="store_true", help="columns are already in logs")
    p.set_defaults(func=cmd_summarize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="ccepanel: %(levelname)s: %(message)s",
    )
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except (PanelError, ValueError, OSError, pd.errors.ParserError) as exc:
        print(f"ccepanel: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
