"""
Dynamic panel estimators and long-run coefficient extraction.

ECM form (``ardl_pols``, ``ardl_fe2``, ``ardl_mg``, ``cs_ardl``)::

    dy_it = a_i - lam_i (y_{i,t-1} - theta_i' x_{i,t-1})
            + sum_{l=1}^{p-1} phi_il dy_{i,t-l} + sum_{l=0}^{p-1} pi_il' dx_{i,t-l}
            [+ trend] [+ sum_{l=0}^{q} psi_il' zbar_{t-l}] + u_it

so the coefficient on ``y_{t-1}`` is ``-lam`` (the reported error-correction
coefficient) and on ``x_{t-1}`` is ``lam * theta``.

Distributed-lag form (``cs_dlmg``)::

    y_it = c_i + theta_i' x_it + sum_{l=0}^{p-1} delta_il' dx_{i,t-l}
           + w_i ybar_t + sum_{l=0}^{q} omega_il' xbar_{t-l} [+ trend] + e_it

where ``theta_i`` is read off directly.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..diagnostics.cd import CDResult
from ..exceptions import InsufficientDataError, PanelError
from ..panel import PanelDataset, check_panel, first_difference, lag
from ..regress import ols
from . import _base
from ._base import Design, UnitDroppedWarning

log = logging.getLogger(__name__)

DYNAMIC_ESTIMATORS = ("ardl_pols", "ardl_fe2", "ardl_mg", "cs_ardl", "cs_dlmg")
CS_ESTIMATORS = ("cs_ardl", "cs_dlmg")
POOLED = ("ardl_pols", "ardl_fe2")

LAMBDA_UNDEFINED = 1e-6
LAMBDA_EXCLUDE = 1e-3


def rule_of_thumb_lags(n_periods: int) -> int:
    """Integer part of ``T ** (1/3)``: the default number of lagged averages."""
    return int(np.floor(n_periods ** (1.0 / 3.0) + 1e-12))


def long_run_from_ardl(phi, beta):
    """Map levels ARDL coefficients to ``(lam, theta)``.

    ``lam = 1 - sum(phi)`` and ``theta = sum_{l=0}^{p} beta_l / lam``.

    Parameters
    ----------
    phi : array (p,)
        Coefficients on ``y_{t-1}, ..., y_{t-p}``.
    beta : array (p + 1,) or (p + 1, k)
        Coefficients on ``x_t, ..., x_{t-p}``.

    Raises
    ------
    ValueError
        If ``|lam| < 1e-6`` (unit root in the autoregressive polynomial).
    """
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    beta = np.asarray(beta, dtype=float)
    if beta.ndim == 1:
        beta = beta[:, None]
    lam = 1.0 - phi.sum()
    if abs(lam) < LAMBDA_UNDEFINED:
        raise ValueError(f"lambda = {lam:.3g}: long-run coefficients are undefined")
    theta = beta.sum(axis=0) / lam
    return float(lam), theta


def ar_levels_from_ecm(ec: float, dy_lags) -> np.ndarray:
    """Levels AR coefficients ``phi_1..phi_p`` implied by ECM coefficients.

    ``ec`` is the coefficient on ``y_{t-1}``; ``dy_lags`` those on
    ``dy_{t-1}..dy_{t-p+1}``.
    """
    c = np.asarray(dy_lags, dtype=float)
    p = c.size + 1
    phi = np.zeros(p)
    phi[0] = 1.0 + ec + (c[0] if c.size else 0.0)
    for l in range(1, p - 1):
        phi[l] = c[l] - c[l - 1]
    if p > 1:
        phi[p - 1] = -c[-1]
    return phi


def min_root_modulus(phi) -> float:
    """Smallest modulus among roots of ``1 - sum_l phi_l z^l`` (inf if none)."""
    phi = np.asarray(phi, dtype=float)
    coeffs = np.concatenate([-phi[::-1], [1.0]])
    coeffs = np.trim_zeros(coeffs, "f")
    if coeffs.size <= 1:
        return np.inf
    return float(np.abs(np.roots(coeffs)).min())


@dataclass(frozen=True)
class DynamicSpec:
    """Dynamic model specification.

    ``cs_lags`` is the number of lagged cross-section averages added to the
    contemporaneous ones; ``None`` picks ``floor(T ** (1/3))`` for the CS
    estimators and 0 otherwise.
    """

    dependent: str
    regressors: tuple
    p: int = 1
    estimator: str = "cs_ardl"
    cs_lags: Optional[int] = None
    trend: bool = False
    min_df: int = 1

    def __post_init__(self):
        if isinstance(self.regressors, str):
            object.__setattr__(self, "regressors", (self.regressors,))
        object.__setattr__(self, "regressors", tuple(self.regressors))
        if not self.regressors:
            raise PanelError("at least one regressor is required")
        if self.dependent in self.regressors:
            raise PanelError("the dependent variable cannot also be a regressor")
        if self.estimator not in DYNAMIC_ESTIMATORS:
            raise PanelError(
                f"unknown dynamic estimator {self.estimator!r}; choose from {DYNAMIC_ESTIMATORS}"
            )
        if int(self.p) != self.p or self.p < 1:
            raise PanelError("lag order p must be an integer >= 1")
        if self.cs_lags is not None:
            if self.cs_lags < 0:
                raise PanelError("cs_lags must be nonnegative")
            if self.cs_lags > 0 and self.estimator not in CS_ESTIMATORS:
                raise PanelError(f"cs_lags must be 0 for {self.estimator}")
        if self.trend and self.estimator in POOLED:
            raise PanelError(f"a trend is collinear with the year dummies of {self.estimator}")

    @property
    def variables(self) -> list:
        return [self.dependent, *self.regressors]

    def resolved_cs_lags(self, n_periods: int) -> int:
        if self.estimator not in CS_ESTIMATORS:
            return 0
        return rule_of_thumb_lags(n_periods) if self.cs_lags is None else int(self.cs_lags)

    def ecm_columns(self, ds: PanelDataset) -> tuple:
        dep, regs, p = self.dependent, self.regressors, int(self.p)
        dy = first_difference(ds, dep)
        cols = {"const": np.ones(ds.shape), f"L1.{dep}": lag(ds, dep, 1)}
        for r in regs:
            cols[f"L1.{r}"] = lag(ds, r, 1)
        for l in range(1, p):
            cols[f"L{l}.D.{dep}"] = lag(ds, dy, l)
        for r in regs:
            dx = first_difference(ds, r)
            cols[f"D.{r}"] = dx
            for l in range(1, p):
                cols[f"L{l}.D.{r}"] = lag(ds, dx, l)
        return dy, cols

    def design(self, ds: PanelDataset) -> Design:
        check_panel(ds, self.variables)
        est, dep, regs = self.estimator, self.dependent, self.regressors
        q = self.resolved_cs_lags(ds.n_periods)
        if est == "cs_dlmg":
            y = ds[dep]
            cols = {"const": np.ones(ds.shape)}
            for r in regs:
                cols[r] = ds[r]
            for r in regs:
                dx = first_difference(ds, r)
                cols[f"D.{r}"] = dx
                for l in range(1, int(self.p)):
                    cols[f"L{l}.D.{r}"] = lag(ds, dx, l)
            cols.update(_base.csa_columns(ds, [dep]))
            cols.update(_base.csa_columns(ds, regs, lags=q))
        else:
            y, cols = self.ecm_columns(ds)
            if est in POOLED:
                cols.update(_base.all_dummies(ds, "year"))
                if est == "ardl_fe2":
                    cols.update(_base.all_dummies(ds, "unit"))
                return Design(y, cols, per_unit=False)
            if est == "cs_ardl":
                cols.update(_base.csa_columns(ds, self.variables, lags=q))
        if self.trend:
            cols["trend"] = _base.trend_column(ds)
        return Design(y, cols, per_unit=True)


@dataclass
class DynamicResult:
    """Output of :func:`fit_dynamic`.

    ``ec_coefficient`` is the error-correction coefficient ``-lam`` (absent
    for ``cs_dlmg``). ``root_moduli`` holds, per unit, the smallest root
    modulus of the estimated autoregressive polynomial; values at or inside
    1 flag units where long-run estimates are unreliable.
    """

    spec: DynamicSpec
    long_run: pd.Series
    long_run_se: pd.Series
    ec_coefficient: Optional[float]
    ec_se: Optional[float]
    residuals: np.ndarray
    rmse: float
    nxt: int
    n: int
    units: tuple
    unit_long_run: Optional[pd.DataFrame] = None
    unit_ec: Optional[pd.Series] = None
    unit_coefficients: Optional[pd.DataFrame] = None
    full_coefficients: Optional[pd.Series] = None
    excluded_from_long_run: tuple = ()
    dropped_units: dict = field(default_factory=dict)
    root_moduli: Optional[pd.Series] = None
    cd: Optional[CDResult] = None
    cs_lags: int = 0
    times: Optional[np.ndarray] = None
    units_all: tuple = ()

    @property
    def cd_statistic(self) -> float:
        return np.nan if self.cd is None else self.cd.statistic

    # Shared vocabulary with StaticResult for table rendering.
    @property
    def coefficients(self) -> pd.Series:
        return self.long_run

    @property
    def se(self) -> pd.Series:
        return self.long_run_se

    def residual_panel(self) -> PanelDataset:
        return PanelDataset(self.units_all, self.times, {"residual": self.residuals})


def _ecm_unit_quantities(fit, spec: DynamicSpec):
    dep = spec.dependent
    ec = fit.coef(f"L1.{dep}")
    lam = -ec
    b = np.array([fit.coef(f"L1.{r}") for r in spec.regressors])
    dy_lags = [fit.coef(f"L{l}.D.{dep}") for l in range(1, int(spec.p))]
    modulus = min_root_modulus(ar_levels_from_ecm(ec, dy_lags))
    theta = b / lam if abs(lam) >= LAMBDA_UNDEFINED else np.full(b.size, np.nan)
    return ec, lam, theta, modulus


def _fit_mean_group(ds, spec, design):
    regs = list(spec.regressors)
    uf = _base.fit_units(ds, design, min_df=spec.min_df)
    if len(uf.fits) < 2:
        raise InsufficientDataError(
            f"{len(uf.fits)} unit(s) survive for {spec.estimator}; need at least two"
        )
    units = list(uf.fits)
    frame = uf.coefficient_frame()
    excluded = []
    if spec.estimator == "cs_dlmg":
        unit_lr = frame[regs].copy()
        unit_ec = None
        moduli = _auxiliary_root_moduli(ds, spec, units)
        included = units
    else:
        rows, ecs, mods = [], [], []
        for u in units:
            ec, lam, theta, modulus = _ecm_unit_quantities(uf.fits[u], spec)
            rows.append(theta)
            ecs.append(ec)
            mods.append(modulus)
            if abs(lam) < LAMBDA_EXCLUDE:
                excluded.append(u)
        unit_lr = pd.DataFrame(rows, index=pd.Index(units, name="unit"), columns=regs)
        unit_ec = pd.Series(ecs, index=pd.Index(units, name="unit"), name="ec")
        moduli = pd.Series(mods, index=pd.Index(units, name="unit"), name="min_root_modulus")
        if excluded:
            warnings.warn(
                f"{len(excluded)} unit(s) with |lambda| < {LAMBDA_EXCLUDE} excluded from "
                f"long-run averaging: {excluded}",
                UnitDroppedWarning,
                stacklevel=3,
            )
        included = [u for u in units if u not in excluded]
    if len(included) < 2:
        raise InsufficientDataError("fewer than two units left for long-run averaging")
    lr, lr_se = _base.mean_group(unit_lr.loc[included])
    ec_mean = ec_se = None
    if unit_ec is not None:
        m, s = _base.mean_group(unit_ec.to_numpy())
        ec_mean, ec_se = float(m[0]), float(s[0])
    resid = _base.unit_residuals(ds, uf)
    return DynamicResult(
        spec=spec,
        long_run=lr,
        long_run_se=lr_se,
        ec_coefficient=ec_mean,
        ec_se=ec_se,
        residuals=resid,
        rmse=_base.residual_rmse(resid),
        nxt=int(np.isfinite(resid).sum()),
        n=len(units),
        units=tuple(units),
        unit_long_run=unit_lr,
        unit_ec=unit_ec,
        unit_coefficients=frame,
        excluded_from_long_run=tuple(excluded),
        dropped_units=dict(uf.dropped),
        root_moduli=moduli,
    )


def _auxiliary_root_moduli(ds, spec, units) -> pd.Series:
    """Root moduli from a per-unit CS-ARDL fit with the same lags and trend."""
    aux = DynamicSpec(
        spec.dependent, spec.regressors, spec.p, "cs_ardl", spec.cs_lags, spec.trend, spec.min_df
    )
    design = aux.design(ds)
    X, usable = design.stack(), design.usable()
    out = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnitDroppedWarning)
        for u in units:
            i = ds.unit_index(u)
            r = usable[i]
            try:
                fit = ols(design.y[i, r], X[i, r], names=design.names)
                out[u] = _ecm_unit_quantities(fit, aux)[3]
            except (PanelError, ValueError):
                out[u] = np.nan
    return pd.Series(out, dtype=float, name="min_root_modulus")


def _fit_pooled_ecm(ds, spec, design):
    regs = list(spec.regressors)
    groups = ("year[", "unit[")
    pf = _base.fit_pooled(ds, design, base_groups=groups)
    fit = pf.fit
    names = list(fit.names)
    ia = names.index(f"L1.{spec.dependent}")
    ib = [names.index(f"L1.{r}") for r in regs]
    a = fit.coefficients[ia]
    if abs(a) < LAMBDA_UNDEFINED:
        raise InsufficientDataError("pooled error-correction coefficient is zero")
    theta, theta_se = [], []
    for j in ib:
        b = fit.coefficients[j]
        theta.append(-b / a)
        grad = np.zeros(len(names))
        grad[ia] = b / a**2
        grad[j] = -1.0 / a
        theta_se.append(float(np.sqrt(grad @ fit.covariance @ grad)))
    present = pf.rows.any(axis=1)
    dy_lags = [fit.coef(f"L{l}.D.{spec.dependent}") for l in range(1, int(spec.p))]
    modulus = min_root_modulus(ar_levels_from_ecm(a, dy_lags))
    return DynamicResult(
        spec=spec,
        long_run=pd.Series(theta, index=regs),
        long_run_se=pd.Series(theta_se, index=regs),
        ec_coefficient=float(a),
        ec_se=float(fit.se[ia]),
        residuals=pf.residuals,
        rmse=fit.rmse,
        nxt=fit.nobs,
        n=int(present.sum()),
        units=tuple(u for u, p in zip(ds.units, present) if p),
        full_coefficients=pd.Series(fit.coefficients, index=names),
        root_moduli=pd.Series({"pooled": modulus}, name="min_root_modulus"),
    )


def fit_dynamic(ds: PanelDataset, spec: DynamicSpec) -> DynamicResult:
    """Estimate a dynamic specification and extract long-run coefficients."""
    design = spec.design(ds)
    if design.per_unit:
        result = _fit_mean_group(ds, spec, design)
    else:
        result = _fit_pooled_ecm(ds, spec, design)
    result.cd = _base.safe_cd(result.residuals)
    result.cs_lags = spec.resolved_cs_lags(ds.n_periods)
    result.times = ds.times
    result.units_all = ds.units
    return result


class DynamicPanelRegression(BaseEstimator):
    """Scikit-learn style wrapper around :func:`fit_dynamic`.

    Attributes
    ----------
    result_ : DynamicResult
    long_run_, long_run_se_ : ndarray
    ec_coef_, ec_se_ : float or None
    residuals_ : ndarray of shape (N, T)
    """

    def __init__(
        self,
        dependent="tfp",
        regressors=("rd", "rf"),
        p=1,
        estimator="cs_ardl",
        cs_lags=None,
        trend=False,
        min_df=1,
    ):
        self.dependent = dependent
        self.regressors = regressors
        self.p = p
        self.estimator = estimator
        self.cs_lags = cs_lags
        self.trend = trend
        self.min_df = min_df

    def _spec(self) -> DynamicSpec:
        return DynamicSpec(
            self.dependent,
            tuple(self.regressors),
            self.p,
            self.estimator,
            self.cs_lags,
            self.trend,
            self.min_df,
        )

    def fit(self, X, y=None):
        check_panel(X)
        self.result_ = fit_dynamic(X, self._spec())
        r = self.result_
        self.long_run_ = r.long_run.to_numpy()
        self.long_run_se_ = r.long_run_se.to_numpy()
        self.ec_coef_ = r.ec_coefficient
        self.ec_se_ = r.ec_se
        self.residuals_ = r.residuals
        self.rmse_ = r.rmse
        self.nxt_ = r.nxt
        self.n_units_ = r.n
        return self

    def predict(self, X):
        """Fitted values of the estimating equation (differences for the ECM forms)."""
        check_is_fitted(self, "result_")
        design = self._spec().design(X)
        coefs = self.result_.unit_coefficients
        if coefs is None:
            coefs = self.result_.full_coefficients
        return _base.predict_from(X, design, coefs)
