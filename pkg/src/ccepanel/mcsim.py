"""
Monte Carlo data generators and an experiment runner for comparing panel
estimators under weak and strong cross-section dependence.

Factor DGP (two regressors, ``m`` common factors)::

    rd_it  = a^d_i + Gd_i' f_t + v_it
    rf_it  = a^f_i + Gf_i' f_t + s_it
    tfp_it = a_i + b1_i rd_it + b2_i rf_it + g_i' f_t + e_it

Only the first ``floor(N ** alpha)`` units carry nonzero ``g_i``, so the
aggregate loading mass grows like ``N ** alpha``. With
``correlate_loadings`` the regressor loadings are ``g_i`` plus independent
noise, which makes the omitted factor term correlated with the regressors.

ARDL DGP (one regressor, factor free)::

    y_it = c_i + phi y_{i,t-1} + b0 x_it + b1 x_{i,t-1} + e_it
    x_it = mu_i + rho x_{i,t-1} + u_it

with long-run coefficient ``theta = (b0 + b1) / (1 - phi)``.
"""

from __future__ import annotations

import dataclasses
import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from .estimators._base import UnitDroppedWarning
from .estimators.dynamic import DynamicSpec, fit_dynamic
from .estimators.static import StaticSpec, fit_static
from .exceptions import PanelError
from .panel import PanelDataset

log = logging.getLogger(__name__)

FACTOR_LAWS = ("ar1", "iid_normal")


def _bounds(name, pair):
    lo, hi = (float(v) for v in pair)
    if hi < lo:
        raise PanelError(f"{name}: upper bound below lower bound")
    return lo, hi


def _unit_names(n):
    width = len(str(n))
    return tuple(f"u{i + 1:0{width}d}" for i in range(n))


def _ar1(rng, n_rows, n_periods, rho, sd, burn_in):
    """Stationary AR(1) rows started ``burn_in`` periods before the sample."""
    shocks = rng.standard_normal((n_rows, n_periods + burn_in)) * sd
    out = np.empty_like(shocks)
    out[:, 0] = shocks[:, 0] / np.sqrt(1.0 - rho**2) if abs(rho) < 1 else shocks[:, 0]
    for t in range(1, shocks.shape[1]):
        out[:, t] = rho * out[:, t - 1] + shocks[:, t]
    return out[:, burn_in:]


def n_loaded_units(n_units: int, alpha: float) -> int:
    """``floor(N ** alpha)``, guarded against floating-point round-down."""
    return int(np.floor(n_units**alpha + 1e-9))


@dataclass(frozen=True)
class FactorDGPConfig:
    """Multifactor panel DGP settings.

    Parameters
    ----------
    n_units, n_periods : int
    m : int
        Number of common factors.
    alpha : float in [0, 1]
        Loading exponent; ``floor(N ** alpha)`` units load on the factors.
    beta_true : (float, float)
        Mean slopes on ``rd`` and ``rf``.
    slope_sd : float
        Standard deviation of unit slope deviations (0 gives homogeneous slopes).
    gamma_law : (low, high)
        Uniform bounds for the factor loadings of ``tfp``.
    gamma_regressor_laws : ((low, high), (low, high)) or None
        Uniform bounds for the regressor loadings (or their noise component
        under ``correlate_loadings``). ``None`` sets the regressor loadings to
        zero, making both regressors exogenous to the factors.
    factor_law : {"ar1", "iid_normal"}
    factor_rho : float
        AR coefficient when ``factor_law == "ar1"``.
    idio_sd : (float, float, float)
        Standard deviations of ``e``, ``v`` and ``s``.
    correlate_loadings : bool
    intercept_sd : float
        Standard deviation of the unit intercepts.
    seed : int
    """

    n_units: int = 50
    n_periods: int = 50
    m: int = 1
    alpha: float = 1.0
    beta_true: tuple = (0.5, 0.3)
    slope_sd: float = 0.0
    gamma_law: tuple = (0.5, 1.5)
    gamma_regressor_laws: Optional[tuple] = ((0.0, 0.5), (0.0, 0.5))
    factor_law: str = "ar1"
    factor_rho: float = 0.5
    idio_sd: tuple = (1.0, 1.0, 1.0)
    correlate_loadings: bool = True
    intercept_sd: float = 1.0
    burn_in: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.n_units < 2 or self.n_periods < 2:
            raise PanelError("n_units and n_periods must be at least 2")
        if self.m < 1:
            raise PanelError("m must be at least 1")
        if not 0.0 <= self.alpha <= 1.0:
            raise PanelError("alpha must lie in [0, 1]")
        if len(self.beta_true) != 2:
            raise PanelError("beta_true needs two slopes (rd, rf)")
        if self.factor_law not in FACTOR_LAWS:
            raise PanelError(f"factor_law must be one of {FACTOR_LAWS}")
        if self.factor_law == "ar1" and not abs(self.factor_rho) < 1:
            raise PanelError("factor_rho must lie inside (-1, 1)")
        if len(self.idio_sd) != 3 or min(self.idio_sd) <= 0:
            raise PanelError("idio_sd needs three positive standard deviations")
        if self.slope_sd < 0 or self.intercept_sd < 0:
            raise PanelError("slope_sd and intercept_sd must be nonnegative")
        _bounds("gamma_law", self.gamma_law)
        if self.gamma_regressor_laws is not None:
            if len(self.gamma_regressor_laws) != 2:
                raise PanelError("gamma_regressor_laws needs one law per regressor")
            for law in self.gamma_regressor_laws:
                _bounds("gamma_regressor_laws", law)

    @property
    def targets(self) -> dict:
        return {"rd": float(self.beta_true[0]), "rf": float(self.beta_true[1])}

    def generate(self):
        return generate_dgp(self)


@dataclass(frozen=True)
class DGPTruth:
    """Parameters and latent components behind a generated panel."""

    targets: dict
    n_loaded: int = 0
    unit_slopes: Optional[np.ndarray] = None
    factors: Optional[np.ndarray] = None
    gamma: Optional[np.ndarray] = None
    gamma_rd: Optional[np.ndarray] = None
    gamma_rf: Optional[np.ndarray] = None
    composite_error: Optional[np.ndarray] = None


def generate_dgp(config: FactorDGPConfig):
    """Draw one panel from the factor DGP.

    Returns
    -------
    PanelDataset
        Variables ``tfp``, ``rd``, ``rf``.
    DGPTruth
        ``composite_error`` holds ``g_i' f_t + e_it``.
    """
    c = config
    rng = np.random.default_rng(c.seed)
    N, T, m = c.n_units, c.n_periods, c.m
    sd_e, sd_v, sd_s = c.idio_sd

    if c.factor_law == "ar1":
        f = _ar1(rng, m, T, c.factor_rho, 1.0, c.burn_in)
    else:
        f = rng.standard_normal((m, T))

    n_loaded = n_loaded_units(N, c.alpha)
    gamma = np.zeros((N, m))
    gamma[:n_loaded] = rng.uniform(*c.gamma_law, size=(n_loaded, m))

    if c.gamma_regressor_laws is None:
        g_rd = np.zeros((N, m))
        g_rf = np.zeros((N, m))
    else:
        g_rd = rng.uniform(*c.gamma_regressor_laws[0], size=(N, m))
        g_rf = rng.uniform(*c.gamma_regressor_laws[1], size=(N, m))
        if c.correlate_loadings:
            g_rd = g_rd + gamma
            g_rf = g_rf + gamma

    a = rng.standard_normal((N, 3)) * c.intercept_sd
    slopes = np.asarray(c.beta_true, dtype=float)[None, :] + rng.standard_normal((N, 2)) * c.slope_sd

    rd = a[:, [1]] + g_rd @ f + rng.standard_normal((N, T)) * sd_v
    rf = a[:, [2]] + g_rf @ f + rng.standard_normal((N, T)) * sd_s
    u = gamma @ f + rng.standard_normal((N, T)) * sd_e
    tfp = a[:, [0]] + slopes[:, [0]] * rd + slopes[:, [1]] * rf + u

    ds = PanelDataset(_unit_names(N), np.arange(1, T + 1), {"tfp": tfp, "rd": rd, "rf": rf})
    truth = DGPTruth(
        targets=c.targets,
        n_loaded=n_loaded,
        unit_slopes=slopes,
        factors=f.T,
        gamma=gamma,
        gamma_rd=g_rd,
        gamma_rf=g_rf,
        composite_error=u,
    )
    return ds, truth


@dataclass(frozen=True)
class ARDLDGPConfig:
    """Factor-free ARDL(1, 1) panel DGP with a stationary AR(1) regressor.

    ``theta_sd`` adds unit heterogeneity to the long-run coefficient while
    holding ``phi`` and the ratio ``b1 / b0`` fixed.
    """

    n_units: int = 30
    n_periods: int = 200
    phi: float = 0.5
    b0: float = 0.2
    b1: float = 0.1
    x_rho: float = 0.5
    sd_e: float = 1.0
    sd_x: float = 1.0
    intercept_sd: float = 1.0
    theta_sd: float = 0.0
    burn_in: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.n_units < 2 or self.n_periods < 2:
            raise PanelError("n_units and n_periods must be at least 2")
        if not abs(self.phi) < 1 or not abs(self.x_rho) < 1:
            raise PanelError("phi and x_rho must lie inside (-1, 1) for stationarity")
        if self.sd_e <= 0 or self.sd_x <= 0:
            raise PanelError("sd_e and sd_x must be positive")
        if self.b0 + self.b1 == 0 and self.theta_sd > 0:
            raise PanelError("theta_sd needs b0 + b1 != 0")

    @property
    def theta(self) -> float:
        return (self.b0 + self.b1) / (1.0 - self.phi)

    @property
    def targets(self) -> dict:
        return {"x": self.theta}

    def generate(self):
        return generate_ardl(self)


def generate_ardl(config: ARDLDGPConfig):
    """Draw one panel (variables ``y`` and ``x``) from the ARDL DGP."""
    c = config
    rng = np.random.default_rng(c.seed)
    N, T, B = c.n_units, c.n_periods, c.burn_in
    mu = rng.standard_normal(N) * c.intercept_sd
    ci = rng.standard_normal(N) * c.intercept_sd
    scale = np.ones(N)
    if c.theta_sd > 0:
        theta_i = c.theta + rng.standard_normal(N) * c.theta_sd
        scale = theta_i / c.theta
    b0, b1 = c.b0 * scale, c.b1 * scale

    # x is stationary from its first draw; y starts at its mean and burns in
    x_all = mu[:, None] / (1.0 - c.x_rho) + _ar1(rng, N, T + B, c.x_rho, c.sd_x, 0)
    e = rng.standard_normal((N, T + B)) * c.sd_e
    y_all = np.empty_like(x_all)
    y_all[:, 0] = (ci + (b0 + b1) * mu / (1.0 - c.x_rho)) / (1.0 - c.phi)
    for t in range(1, T + B):
        y_all[:, t] = ci + c.phi * y_all[:, t - 1] + b0 * x_all[:, t] + b1 * x_all[:, t - 1] + e[:, t]
    y = y_all[:, B:]
    x = x_all[:, B:]
    ds = PanelDataset(_unit_names(N), np.arange(1, T + 1), {"y": y, "x": x})
    return ds, DGPTruth(targets=c.targets, unit_slopes=b0 + b1)


def _target_params(spec) -> list:
    return list(spec.regressors)


def _fit(ds, spec):
    if isinstance(spec, DynamicSpec):
        return fit_dynamic(ds, spec)
    if isinstance(spec, StaticSpec):
        return fit_static(ds, spec)
    raise PanelError(f"unsupported specification type {type(spec).__name__}")


def _replicate(args):
    config, specs, level = args
    ds, truth = config.generate()
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnitDroppedWarning)
        for spec in specs:
            try:
                res = _fit(ds, spec)
            except (PanelError, ValueError, np.linalg.LinAlgError) as exc:
                out.append((None, np.nan, f"{type(exc).__name__}: {exc}"))
                continue
            params = _target_params(spec)
            est = res.coefficients[params].to_numpy(dtype=float)
            cd = res.cd
            reject = np.nan if cd is None else float(cd.rejects(level))
            out.append((est, reject, None))
    return out


def replication_seeds(master_seed: int, reps: int) -> list:
    """Independent per-replication seeds spawned from ``master_seed``."""
    children = np.random.SeedSequence(master_seed).spawn(reps)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


@dataclass
class ExperimentReport:
    """Aggregated Monte Carlo results.

    ``table`` has one row per (estimator, parameter) with the true value,
    mean estimate, mean bias, Monte Carlo standard error of the mean
    (``sd / sqrt(reps)``; NaN when fewer than two replications succeed),
    RMSE, CD rejection rate and failure count.
    """

    config: dict
    reps: int
    table: pd.DataFrame
    estimates: dict = field(repr=False, default_factory=dict)
    failures: dict = field(default_factory=dict)
    level: float = 0.05

    @property
    def mc_se_defined(self) -> bool:
        return bool(self.table["n_ok"].ge(2).all())

    def row(self, label: str, param: str) -> pd.Series:
        return self.table.loc[(label, param)]

    def to_csv(self, dest=None, float_format="%.10g"):
        return self.table.to_csv(dest, float_format=float_format)

    def summary(self, digits: int = 4) -> str:
        lines = [f"replications: {self.reps}", f"CD test level: {self.level}"]
        for key, value in self.config.items():
            lines.append(f"{key}: {value}")
        if not self.mc_se_defined:
            lines.append("note: Monte Carlo SE undefined (fewer than two successful replications)")
        if self.config.get("dgp") == "FactorDGPConfig":
            lines.append(f"note: factor process is a modelling choice ({self.config.get('factor_law')})")
        lines.append("")
        with pd.option_context("display.width", 200, "display.max_columns", 20):
            lines.append(self.table.round(digits).to_string())
        return "\n".join(lines) + "\n"


def _config_echo(config) -> dict:
    echo = {"dgp": type(config).__name__}
    for f in dataclasses.fields(config):
        echo[f.name] = getattr(config, f.name)
    return echo


def run_experiment(
    config,
    estimators: Sequence,
    reps: int,
    labels: Optional[Sequence[str]] = None,
    threads: int = 1,
    level: float = 0.05,
) -> ExperimentReport:
    """Simulate ``reps`` panels and fit every specification on each.

    Parameters
    ----------
    config : FactorDGPConfig or ARDLDGPConfig
        ``config.seed`` is the master seed; replication seeds are spawned
        from it, so results do not depend on ``threads``.
    estimators : sequence of StaticSpec or DynamicSpec
        Estimated coefficients are compared with ``config.targets`` by
        regressor name (slopes for static fits, long-run coefficients for
        dynamic fits).
    reps : int
    labels : sequence of str, optional
        Row labels; defaults to each spec's estimator name.
    threads : int
        Worker processes (1 runs in-process).
    """
    if reps < 1:
        raise PanelError("reps must be at least 1")
    specs = list(estimators)
    if not specs:
        raise PanelError("no estimators given")
    labels = list(labels) if labels is not None else [s.estimator for s in specs]
    if len(labels) != len(specs) or len(set(labels)) != len(labels):
        raise PanelError("labels must be unique and match the estimators")
    targets = config.targets
    for spec in specs:
        missing = [p for p in _target_params(spec) if p not in targets]
        if missing:
            raise PanelError(f"no true value for {missing} in {type(config).__name__}")
    if reps < 30:
        log.info("only %d replications; Monte Carlo standard errors are rough", reps)

    jobs = [(dataclasses.replace(config, seed=s), specs, level) for s in replication_seeds(config.seed, reps)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_replicate, jobs, chunksize=max(1, reps // (4 * threads))))
    else:
        results = [_replicate(job) for job in jobs]

    rows, estimates, failures = [], {}, {}
    for j, (label, spec) in enumerate(zip(labels, specs)):
        params = _target_params(spec)
        ok = [r[j] for r in results if r[j][0] is not None]
        errs = [r[j][2] for r in results if r[j][0] is None]
        failures[label] = errs
        est = np.array([o[0] for o in ok]).reshape(len(ok), len(params))
        estimates[label] = est
        rej = np.array([o[1] for o in ok], dtype=float)
        rate = float(np.nanmean(rej)) if np.isfinite(rej).any() else np.nan
        for k, p in enumerate(params):
            truth = targets[p]
            e = est[:, k] - truth
            n_ok = e.size
            rows.append(
                {
                    "estimator": label,
                    "parameter": p,
                    "true": truth,
                    "mean_estimate": float(est[:, k].mean()) if n_ok else np.nan,
                    "mean_bias": float(e.mean()) if n_ok else np.nan,
                    "mc_se": float(e.std(ddof=1) / np.sqrt(n_ok)) if n_ok >= 2 else np.nan,
                    "rmse": float(np.sqrt(np.mean(e**2))) if n_ok else np.nan,
                    "cd_rejection_rate": rate,
                    "n_ok": n_ok,
                    "failures": len(errs),
                }
            )
    table = pd.DataFrame(rows).set_index(["estimator", "parameter"])
    return ExperimentReport(_config_echo(config), reps, table, estimates, failures, level)


def cd_rejection_rate_true_errors(config: FactorDGPConfig, reps: int, level: float = 0.05) -> float:
    """Share of replications in which CD rejects on the composite DGP error."""
    from .diagnostics.cd import cd_test

    hits = 0
    for s in replication_seeds(config.seed, reps):
        _, truth = dataclasses.replace(config, seed=s).generate()
        hits += cd_test(truth.composite_error).rejects(level)
    return hits / reps
