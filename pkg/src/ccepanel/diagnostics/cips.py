"""
CIPS panel unit root test: the cross-section average of per-unit
cross-sectionally augmented Dickey-Fuller (CADF) t-ratios.

The per-unit regression is

    dy_it = a_i [+ c_i t] + b_i y_{i,t-1} + g_i ybar_{t-1} + h_i0 dybar_t
            + sum_{j=1..p} (d_ij dy_{i,t-j} + h_ij dybar_{t-j}) + e_it

and the test statistic averages the t-ratios of ``b_i``, each truncated to
``[K1, K2]`` so the average has finite moments in small samples.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.interpolate import RegularGridInterpolator

from ..exceptions import CollinearityError, InsufficientDataError, PanelError
from ..panel import PanelDataset, check_panel, cross_section_average, first_difference, lag
from ..regress import ols
from . import _cips_table

log = logging.getLogger(__name__)

CASES = ("intercept", "intercept_trend")
LEVELS = (0.01, 0.05, 0.10)

# Truncation bounds for individual CADF t-ratios.
TRUNCATION = {
    "intercept": (-6.19, 2.61),
    "intercept_trend": (-6.42, 1.70),
}


@dataclass(frozen=True)
class CIPSResult:
    statistic: float
    case: str
    decision_5pct: str
    unit_t_ratios: pd.Series
    critical_values: dict
    n_units: int
    n_periods: int
    critical_value_source: str
    adf_lags: int = 0
    dropped_units: tuple = field(default=())

    @property
    def integration_order(self) -> str:
        """``I(0)`` when the unit-root null is rejected at 5%, else ``I(1)``."""
        return "I(0)" if self.decision_5pct == "reject" else "I(1)"


def _check_case(case):
    if case not in CASES:
        raise PanelError(f"case must be one of {CASES}, got {case!r}")


def cadf_t_ratios(ds: PanelDataset, var: str, case: str = "intercept", adf_lags: int = 0):
    """Untruncated CADF t-ratios per unit, with the units skipped for lack of span."""
    _check_case(case)
    check_panel(ds, [var])
    y = ds[var]
    ybar = cross_section_average(ds, var)[None, :]
    dy = first_difference(ds, y)
    dybar = np.diff(ybar, axis=1, prepend=np.nan)
    # residuals of models with period effects average to zero each period;
    # the average then carries no information and would be collinear
    augment = np.nanstd(ybar) > 1e-10 * max(float(np.nanstd(y)), 1e-300)
    if not augment:
        log.info("cross-section average of %r is constant; CADF reduces to ADF", var)
    cols = {"const": np.ones(ds.shape), "y_lag": lag(ds, y, 1)}
    if augment:
        cols["ybar_lag"] = np.broadcast_to(lag_row(ybar, 1), ds.shape)
        cols["dybar"] = np.broadcast_to(dybar, ds.shape)
    if case == "intercept_trend":
        cols["trend"] = np.broadcast_to(np.arange(ds.n_periods, dtype=float), ds.shape)
    for j in range(1, adf_lags + 1):
        cols[f"dy_lag{j}"] = lag(ds, dy, j)
        if augment:
            cols[f"dybar_lag{j}"] = np.broadcast_to(lag_row(dybar, j), ds.shape)
    names = list(cols)
    stack = np.stack([cols[c] for c in names], axis=-1)
    k = len(names)
    t_ratios, skipped = {}, []
    for i, unit in enumerate(ds.units):
        X = stack[i]
        rows = np.isfinite(dy[i]) & np.isfinite(X).all(axis=1)
        if rows.sum() < k + 5:
            skipped.append(unit)
            continue
        try:
            fit = ols(dy[i, rows], X[rows], se_kind="classical", names=names)
        except CollinearityError:
            skipped.append(unit)
            continue
        j = names.index("y_lag")
        t_ratios[unit] = fit.coefficients[j] / fit.se[j]
    return pd.Series(t_ratios, dtype=float, name="cadf_t"), tuple(skipped)


def lag_row(row: np.ndarray, l: int) -> np.ndarray:
    out = np.full_like(row, np.nan)
    out[..., l:] = row[..., :-l]
    return out


def cadf_balanced(y: np.ndarray, case: str = "intercept") -> np.ndarray:
    """Vectorised CADF t-ratios for a balanced (N, T) panel with no augmentation lags."""
    y = np.asarray(y, dtype=float)
    ybar = y.mean(axis=0)
    dy = np.diff(y, axis=1)
    ylag = y[:, :-1]
    common = [np.ones(y.shape[1] - 1), ybar[:-1], np.diff(ybar)]
    if case == "intercept_trend":
        common.append(np.arange(1, y.shape[1], dtype=float))
    H = np.column_stack(common)
    q, _ = np.linalg.qr(H)
    dy_t = dy - (dy @ q) @ q.T
    yl_t = ylag - (ylag @ q) @ q.T
    sxx = np.einsum("ij,ij->i", yl_t, yl_t)
    sxy = np.einsum("ij,ij->i", yl_t, dy_t)
    syy = np.einsum("ij,ij->i", dy_t, dy_t)
    b = sxy / sxx
    dof = dy.shape[1] - H.shape[1] - 1
    s2 = (syy - b * sxy) / dof
    return b / np.sqrt(s2 / sxx)


def truncate(t_ratios, case: str):
    k1, k2 = TRUNCATION[case]
    return np.clip(np.asarray(t_ratios, dtype=float), k1, k2)


def simulate_critical_values(
    n_units: int,
    n_periods: int,
    case: str = "intercept",
    reps: int = 2000,
    seed: int = 0,
    levels=LEVELS,
) -> dict:
    """Lower-tail quantiles of CIPS under independent driftless random walks."""
    _check_case(case)
    rng = np.random.default_rng(seed)
    out = np.empty(reps)
    for r in range(reps):
        y = np.cumsum(rng.standard_normal((n_units, n_periods)), axis=1)
        out[r] = truncate(cadf_balanced(y, case), case).mean()
    return {lvl: float(np.quantile(out, lvl)) for lvl in levels}


def tabulated_critical_values(n_units: int, n_periods: int, case: str = "intercept") -> dict:
    """Critical values interpolated (in log N, log T) from the embedded table.

    Sizes outside the tabulated grid are clamped to its edges.
    """
    _check_case(case)
    grid_n = np.log(np.asarray(_cips_table.GRID_N, dtype=float))
    grid_t = np.log(np.asarray(_cips_table.GRID_T, dtype=float))
    point = np.array(
        [[
            np.clip(np.log(n_units), grid_n[0], grid_n[-1]),
            np.clip(np.log(n_periods), grid_t[0], grid_t[-1]),
        ]]
    )
    out = {}
    for lvl in LEVELS:
        table = np.asarray(_cips_table.VALUES[case][lvl], dtype=float)
        interp = RegularGridInterpolator((grid_n, grid_t), table)
        out[lvl] = float(interp(point)[0])
    return out


def cips_test(
    ds: PanelDataset,
    var: str,
    case: str = "intercept",
    adf_lags: int = 0,
    simulate_critical: bool = False,
    reps: int = 2000,
    seed: int = 0,
) -> CIPSResult:
    """CIPS test of the null that every unit's series has a unit root.

    Critical values come from the embedded table unless
    ``simulate_critical`` is set, in which case they are simulated for the
    panel's own (N, T) with ``reps`` seeded replications.
    """
    t_ratios, skipped = cadf_t_ratios(ds, var, case, adf_lags)
    if t_ratios.empty:
        raise InsufficientDataError(f"no unit has enough observations of {var!r} for CADF")
    if skipped:
        log.warning("CIPS: skipped %d unit(s) with insufficient span: %s", len(skipped), skipped)
    stat = float(truncate(t_ratios.to_numpy(), case).mean())
    n = int(t_ratios.size)
    obs = ds.mask(var)[[ds.unit_index(u) for u in t_ratios.index]].sum(axis=1)
    t = int(round(float(obs.mean())))
    if simulate_critical:
        crit = simulate_critical_values(n, t, case, reps=reps, seed=seed)
        source = f"simulated({reps} reps, seed {seed})"
    else:
        crit = tabulated_critical_values(n, t, case)
        source = "table"
    return CIPSResult(
        statistic=stat,
        case=case,
        decision_5pct="reject" if stat < crit[0.05] else "fail_to_reject",
        unit_t_ratios=t_ratios,
        critical_values=crit,
        n_units=n,
        n_periods=t,
        critical_value_source=source,
        adf_lags=adf_lags,
        dropped_units=skipped,
    )
