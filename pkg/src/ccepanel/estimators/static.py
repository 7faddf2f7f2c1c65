"""
Static panel estimators of a levels relation ``y_it = a_i + b_i' x_it + u_it``.

Pooled (homogeneous slope): ``pols``, ``fe2``, ``fd``, ``ccep``.
Heterogeneous (mean group): ``mg``, ``cdmg``, ``ccemg``.
The CCE variants add cross-section averages of the dependent variable and
regressors as proxies for unobserved common factors.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..diagnostics.cd import CDResult
from ..exceptions import InsufficientDataError, PanelError
from ..panel import PanelDataset, check_panel, cs_demean, first_difference
from . import _base
from ._base import Design

log = logging.getLogger(__name__)

STATIC_ESTIMATORS = ("pols", "fe2", "fd", "ccep", "mg", "cdmg", "ccemg")
POOLED = ("pols", "fe2", "fd", "ccep")
YEAR_DUMMY_MODELS = ("pols", "fe2", "fd")


@dataclass(frozen=True)
class StaticSpec:
    """What to regress on what, and how.

    ``include_intercept`` governs the unit intercepts of ``mg``, ``cdmg``,
    ``ccemg`` and ``ccep``; the year-dummy models always carry a constant.
    """

    dependent: str
    regressors: tuple
    estimator: str = "ccemg"
    trend: bool = False
    include_intercept: bool = True
    min_df: int = 1

    def __post_init__(self):
        if isinstance(self.regressors, str):
            object.__setattr__(self, "regressors", (self.regressors,))
        object.__setattr__(self, "regressors", tuple(self.regressors))
        if not self.regressors:
            raise PanelError("at least one regressor is required")
        if self.dependent in self.regressors:
            raise PanelError("the dependent variable cannot also be a regressor")
        if self.estimator not in STATIC_ESTIMATORS:
            raise PanelError(
                f"unknown static estimator {self.estimator!r}; choose from {STATIC_ESTIMATORS}"
            )
        if self.trend and self.estimator in YEAR_DUMMY_MODELS:
            raise PanelError(
                f"a trend is collinear with the year dummies of {self.estimator}; "
                "drop trend or use a heterogeneous estimator"
            )

    @property
    def variables(self) -> list:
        return [self.dependent, *self.regressors]

    @property
    def pooled(self) -> bool:
        return self.estimator in POOLED

    def design(self, ds: PanelDataset) -> Design:
        check_panel(ds, self.variables)
        est = self.estimator
        dep, regs = self.dependent, self.regressors
        if est == "fd":
            y = first_difference(ds, dep)
            cols = {r: first_difference(ds, r) for r in regs}
        elif est == "cdmg":
            y = cs_demean(ds, dep)
            cols = {r: cs_demean(ds, r) for r in regs}
        else:
            y = ds[dep]
            cols = {r: ds[r] for r in regs}

        if est in YEAR_DUMMY_MODELS:
            cols = {"const": np.ones(ds.shape), **cols, **_base.all_dummies(ds, "year")}
            if est == "fe2":
                cols.update(_base.all_dummies(ds, "unit"))
            return Design(y, cols, per_unit=False)

        if est == "ccep":
            avgs = _base.csa_columns(ds, self.variables)
            for unit, dummy in _base.all_dummies(ds, "unit").items():
                if self.include_intercept:
                    cols[unit] = dummy
                if self.trend:
                    cols[f"{unit}:trend"] = dummy * _base.trend_column(ds)
                for name, avg in avgs.items():
                    cols[f"{unit}:{name}"] = dummy * avg
            return Design(y, cols, per_unit=False)

        front = {"const": np.ones(ds.shape)} if self.include_intercept else {}
        cols = {**front, **cols}
        if self.trend:
            cols["trend"] = _base.trend_column(ds)
        if est == "ccemg":
            cols.update(_base.csa_columns(ds, self.variables))
        return Design(y, cols, per_unit=True)


@dataclass
class StaticResult:
    """Aggregate and per-unit output of :func:`fit_static`.

    ``residuals`` is an (N, T) array aligned with the input panel, NaN
    outside the estimation sample.
    """

    spec: StaticSpec
    coefficients: pd.Series
    se: pd.Series
    residuals: np.ndarray
    rmse: float
    nxt: int
    n: int
    units: tuple
    unit_coefficients: Optional[pd.DataFrame] = None
    full_coefficients: Optional[pd.Series] = None
    dropped_units: dict = field(default_factory=dict)
    cd: Optional[CDResult] = None
    times: Optional[np.ndarray] = None
    units_all: tuple = ()

    @property
    def cd_statistic(self) -> float:
        return np.nan if self.cd is None else self.cd.statistic

    @property
    def tvalues(self) -> pd.Series:
        return self.coefficients / self.se

    def residual_panel(self) -> PanelDataset:
        return PanelDataset(self.units_all, self.times, {"residual": self.residuals})


def fit_static(ds: PanelDataset, spec: StaticSpec) -> StaticResult:
    """Estimate ``spec`` on ``ds``; see the module docstring for the roster."""
    design = spec.design(ds)
    regs = list(spec.regressors)
    if design.per_unit:
        uf = _base.fit_units(ds, design, min_df=spec.min_df)
        if len(uf.fits) < 2:
            raise InsufficientDataError(
                f"{len(uf.fits)} unit(s) survive for {spec.estimator}; need at least two"
            )
        frame = uf.coefficient_frame()
        coef, se = _base.mean_group(frame[regs])
        resid = _base.unit_residuals(ds, uf)
        result = StaticResult(
            spec=spec,
            coefficients=coef,
            se=se,
            residuals=resid,
            rmse=_base.residual_rmse(resid),
            nxt=int(np.isfinite(resid).sum()),
            n=len(uf.fits),
            units=tuple(uf.fits),
            unit_coefficients=frame,
            dropped_units=dict(uf.dropped),
        )
    else:
        groups = ("year[", "unit[") if spec.estimator != "ccep" else ()
        pf = _base.fit_pooled(ds, design, base_groups=groups)
        full = pd.Series(pf.fit.coefficients, index=list(pf.fit.names))
        full_se = pd.Series(pf.fit.se, index=list(pf.fit.names))
        present = pf.rows.any(axis=1)
        result = StaticResult(
            spec=spec,
            coefficients=full[regs],
            se=full_se[regs],
            residuals=pf.residuals,
            rmse=pf.fit.rmse,
            nxt=pf.fit.nobs,
            n=int(present.sum()),
            units=tuple(u for u, p in zip(ds.units, present) if p),
            full_coefficients=full,
        )
    result.cd = _base.safe_cd(result.residuals)
    result.times = ds.times
    result.units_all = ds.units
    return result


class StaticPanelRegression(BaseEstimator):
    """Scikit-learn style wrapper around :func:`fit_static`.

    Parameters
    ----------
    dependent : str
    regressors : tuple of str
    estimator : {"pols", "fe2", "fd", "ccep", "mg", "cdmg", "ccemg"}
    trend : bool
        Unit-specific linear trend (rejected for the year-dummy models).
    include_intercept : bool
    min_df : int
        Residual degrees of freedom a unit needs to enter a mean-group fit.

    Attributes
    ----------
    result_ : StaticResult
    coef_, se_ : ndarray
        Aggregate slope estimates and their standard errors.
    unit_coef_ : DataFrame or None
    residuals_ : ndarray of shape (N, T)
    rmse_, nxt_, n_units_ : summary statistics
    """

    def __init__(
        self,
        dependent="tfp",
        regressors=("rd", "rf"),
        estimator="ccemg",
        trend=False,
        include_intercept=True,
        min_df=1,
    ):
        self.dependent = dependent
        self.regressors = regressors
        self.estimator = estimator
        self.trend = trend
        self.include_intercept = include_intercept
        self.min_df = min_df

    def _spec(self) -> StaticSpec:
        return StaticSpec(
            self.dependent,
            tuple(self.regressors),
            self.estimator,
            self.trend,
            self.include_intercept,
            self.min_df,
        )

    def fit(self, X, y=None):
        check_panel(X)
        self.result_ = fit_static(X, self._spec())
        r = self.result_
        self.coef_ = r.coefficients.to_numpy()
        self.se_ = r.se.to_numpy()
        self.unit_coef_ = r.unit_coefficients
        self.residuals_ = r.residuals
        self.rmse_ = r.rmse
        self.nxt_ = r.nxt
        self.n_units_ = r.n
        return self

    def predict(self, X):
        """Fitted values of the estimating equation (first differences for ``fd``)."""
        check_is_fitted(self, "result_")
        design = self._spec().design(X)
        coefs = self.result_.unit_coefficients
        if coefs is None:
            coefs = self.result_.full_coefficients
        return _base.predict_from(X, design, coefs)
