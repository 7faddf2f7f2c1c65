"""Design assembly, per-unit and pooled fitting, and mean-group reduction."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..diagnostics.cd import cd_test
from ..exceptions import CollinearityError, InsufficientDataError, PanelError
from ..panel import PanelDataset, cross_section_average, dummy_columns, lag
from ..regress import RegressionFit, ols

log = logging.getLogger(__name__)


class UnitDroppedWarning(UserWarning):
    """A unit was left out of a heterogeneous estimator."""


@dataclass
class Design:
    """Dependent and named regressor columns, each shaped (N, T)."""

    y: np.ndarray
    columns: dict
    per_unit: bool

    @property
    def names(self) -> list:
        return list(self.columns)

    def stack(self) -> np.ndarray:
        return np.stack([np.asarray(self.columns[c], dtype=float) for c in self.columns], axis=-1)

    def usable(self) -> np.ndarray:
        """(N, T) flags for cells where the dependent and all columns are observed."""
        return np.isfinite(self.y) & np.isfinite(self.stack()).all(axis=-1)


def broadcast_row(ds: PanelDataset, row: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(row, dtype=float)[None, :], ds.shape)


def trend_column(ds: PanelDataset) -> np.ndarray:
    return broadcast_row(ds, np.arange(ds.n_periods, dtype=float))


def csa_columns(ds: PanelDataset, variables, lags: int = 0, contemporaneous: bool = True) -> dict:
    """Contemporaneous and lagged cross-section averages as broadcast columns."""
    out = {}
    for v in variables:
        bar = cross_section_average(ds, v)
        if contemporaneous:
            out[f"csa({v})"] = broadcast_row(ds, bar)
        for l in range(1, lags + 1):
            out[f"L{l}.csa({v})"] = broadcast_row(ds, lag(ds, broadcast_row(ds, bar), l)[0])
    return out


def all_dummies(ds: PanelDataset, kind: str) -> dict:
    return dummy_columns(ds, kind, drop=0)


def is_dummy(name: str) -> bool:
    return "[" in name


def mean_group(unit_coefficients):
    """Unweighted mean of unit coefficients and its dispersion standard error.

    ``se = sqrt(sum_i (b_i - b_mean)**2 / (N (N - 1)))``.

    Parameters
    ----------
    unit_coefficients : array (N, k) or DataFrame
    """
    frame = unit_coefficients if isinstance(unit_coefficients, pd.DataFrame) else None
    b = np.asarray(unit_coefficients, dtype=float)
    if b.ndim == 1:
        b = b[:, None]
    n = b.shape[0]
    if n < 2:
        raise InsufficientDataError("mean-group standard errors need at least two units")
    mean = b.mean(axis=0)
    se = np.sqrt(((b - mean) ** 2).sum(axis=0) / (n * (n - 1)))
    if frame is not None:
        return pd.Series(mean, index=frame.columns), pd.Series(se, index=frame.columns)
    return mean, se


@dataclass
class UnitFits:
    fits: dict  # unit -> RegressionFit
    rows: dict  # unit -> boolean mask over time
    dropped: dict  # unit -> reason
    names: list

    def coefficient_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [self.fits[u].coefficients for u in self.fits],
            index=pd.Index(list(self.fits), name="unit"),
            columns=self.names,
        )


def fit_units(ds: PanelDataset, design: Design, min_df: int = 1, se_kind="robust_hc1") -> UnitFits:
    """Independent OLS per unit; units lacking degrees of freedom or rank are dropped."""
    names = design.names
    X = design.stack()
    usable = design.usable()
    fits, rows, dropped = {}, {}, {}
    for i, unit in enumerate(ds.units):
        r = usable[i]
        nobs = int(r.sum())
        if nobs < len(names) + min_df:
            dropped[unit] = f"{nobs} usable observations for {len(names)} columns"
            continue
        try:
            fits[unit] = ols(design.y[i, r], X[i, r], se_kind=se_kind, names=names)
        except CollinearityError as exc:
            dropped[unit] = str(exc)
            continue
        rows[unit] = r
    for unit, reason in dropped.items():
        warnings.warn(f"unit {unit} dropped: {reason}", UnitDroppedWarning, stacklevel=3)
    return UnitFits(fits, rows, dropped, names)


def unit_residuals(ds: PanelDataset, uf: UnitFits) -> np.ndarray:
    out = np.full(ds.shape, np.nan)
    for unit, fit in uf.fits.items():
        out[ds.unit_index(unit), uf.rows[unit]] = fit.residuals
    return out


def drop_insufficient_units(ds: PanelDataset, spec, min_df: int = None) -> list:
    """Units whose usable span leaves at least ``columns + min_df`` observations.

    For pooled estimators every unit with at least one usable row survives.
    """
    min_df = getattr(spec, "min_df", 1) if min_df is None else min_df
    if min_df < 1:
        raise PanelError("min_df must be at least 1")
    design = spec.design(ds)
    counts = design.usable().sum(axis=1)
    need = len(design.names) + min_df if design.per_unit else 1
    keep = [u for u, c in zip(ds.units, counts) if c >= need]
    if not keep:
        raise InsufficientDataError(
            f"no unit has {need} usable observations for the {spec.estimator} design"
        )
    return keep


@dataclass
class PooledFit:
    fit: RegressionFit
    rows: np.ndarray  # (N, T) sample flags
    residuals: np.ndarray  # (N, T)


def fit_pooled(ds: PanelDataset, design: Design, base_groups=(), se_kind="robust_hc1") -> PooledFit:
    """Stack all units and fit one regression.

    Dummy and interaction columns (names containing ``[``) that are zero on
    the sample are dropped; for each prefix in ``base_groups`` (``"year["``,
    ``"unit["``) the earliest remaining indicator is dropped as the base
    category.
    """
    rows = design.usable()
    if not rows.any():
        raise InsufficientDataError("no usable observations")
    X_all = design.stack()[rows]
    y = design.y[rows]
    names = design.names
    keep = [j for j, n in enumerate(names) if not (is_dummy(n) and not X_all[:, j].any())]
    for prefix in base_groups:
        group = [j for j in keep if names[j].startswith(prefix) and ":" not in names[j]]
        if group:
            keep.remove(group[0])
    fit = ols(y, X_all[:, keep], se_kind=se_kind, names=[names[j] for j in keep])
    resid = np.full(ds.shape, np.nan)
    resid[rows] = fit.residuals
    return PooledFit(fit, rows, resid)


def residual_rmse(residuals: np.ndarray) -> float:
    e = residuals[np.isfinite(residuals)]
    return float(np.sqrt(np.mean(e**2)))


def safe_cd(residuals: np.ndarray):
    try:
        return cd_test(residuals)
    except InsufficientDataError:
        return None


def predict_from(ds: PanelDataset, design: Design, coefficients) -> np.ndarray:
    """Fitted values from named coefficients (a Series, or a units x names frame)."""
    out = np.full(ds.shape, np.nan)
    if isinstance(coefficients, pd.DataFrame):
        for unit, row in coefficients.iterrows():
            if unit not in ds.units:
                continue
            i = ds.unit_index(unit)
            out[i] = sum(row[n] * np.asarray(design.columns[n])[i] for n in row.index)
    else:
        missing = [n for n in coefficients.index if n not in design.columns]
        if missing:
            raise PanelError(f"panel lacks design column(s): {', '.join(missing)}")
        out = sum(coefficients[n] * np.asarray(design.columns[n]) for n in coefficients.index)
    return out
