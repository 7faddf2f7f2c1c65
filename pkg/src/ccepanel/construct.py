"""
Variable construction: productivity measures, perpetual-inventory R&D
capital stocks, trade-weighted foreign R&D stocks and gap interpolation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from .exceptions import InsufficientDataError, PanelError
from .panel import PanelDataset, check_panel

log = logging.getLogger(__name__)

WEIGHT_SCHEMES = ("lp", "ch")


@dataclass(frozen=True)
class ConstructionConfig:
    """Settings for building R&D stocks and foreign R&D variables.

    ``partner_set`` of ``None`` means every other unit in the trade data.
    ``fallback_window`` is used for units with no GDP inside
    ``growth_window`` (series that start late).
    """

    delta_rd: float = 0.15
    growth_window: tuple = (1981, 1990)
    fallback_window: tuple = (1990, 2000)
    weight_scheme: str = "lp"
    partner_set: Optional[tuple] = None
    gnp_to_gdp: Optional[str] = None

    def __post_init__(self):
        if not 0.0 < self.delta_rd < 1.0:
            raise PanelError(f"delta_rd must lie in (0, 1), got {self.delta_rd}")
        if self.weight_scheme not in WEIGHT_SCHEMES:
            raise PanelError(f"weight_scheme must be one of {WEIGHT_SCHEMES}")
        if self.partner_set is not None:
            object.__setattr__(self, "partner_set", tuple(str(p) for p in self.partner_set))


def _positive(name, *values):
    for v in values:
        if not np.all(np.asarray(v, dtype=float) > 0):
            raise PanelError(f"{name} must be positive")


def tfp_share_based(Y, K, L, xi):
    """``log Y - xi log K - (1 - xi) log L``."""
    _positive("Y, K and L", Y, K, L)
    if not 0.0 < xi < 1.0:
        raise PanelError("capital share xi must lie in (0, 1)")
    return np.log(Y) - xi * np.log(K) - (1.0 - xi) * np.log(L)


def tornqvist_tfp_ratio(rgdp_ratio, input_quantity_index):
    """Productivity growth factor: real GDP ratio over the input quantity index."""
    _positive("GDP ratio and input index", rgdp_ratio, input_quantity_index)
    return np.asarray(rgdp_ratio, dtype=float) / np.asarray(input_quantity_index, dtype=float)


def perpetual_inventory(rex, y0, avg_rex_share, delta=0.15, g=0.0) -> np.ndarray:
    """R&D capital stock from expenditure flows.

    The initial stock is ``y0 * avg_rex_share / (delta + g)``; afterwards
    ``R_t = (1 - delta) R_{t-1} + rex_t`` for each subsequent flow. ``rex[0]``
    is the flow of the initial period and is not added to ``R_0``.
    """
    if delta + g <= 0:
        raise PanelError(f"delta + g must be positive, got {delta + g}")
    rex = np.asarray(rex, dtype=float)
    if np.any(rex < 0):
        raise PanelError("R&D expenditure must be nonnegative")
    if not np.isfinite(rex).all():
        raise PanelError("R&D expenditure series has missing values; interpolate first")
    out = np.empty(rex.size)
    if rex.size == 0:
        return out
    out[0] = y0 * avg_rex_share / (delta + g)
    for t in range(1, rex.size):
        out[t] = (1.0 - delta) * out[t - 1] + rex[t]
    return out


def average_growth(gdp: pd.Series, window=(1981, 1990), fallback=(1990, 2000)) -> float:
    """Mean annual log growth of ``gdp`` (indexed by year) over a window.

    Falls back to ``fallback`` when the primary window holds fewer than two
    observations.
    """
    gdp = gdp.dropna().sort_index()
    for lo, hi in (window, fallback):
        part = gdp.loc[(gdp.index >= lo) & (gdp.index <= hi)]
        if part.size >= 2:
            _positive("GDP", part.to_numpy())
            return float(np.diff(np.log(part.to_numpy())).mean())
    raise InsufficientDataError("no GDP observations in the growth or fallback window")


def interpolate_gaps(series) -> np.ndarray:
    """Fill interior NaN runs linearly between the nearest observed neighbours.

    Leading and trailing gaps stay masked.
    """
    s = np.asarray(series, dtype=float)
    obs = np.flatnonzero(np.isfinite(s))
    if obs.size < 2:
        raise InsufficientDataError("interpolation needs at least two observations")
    out = s.copy()
    inner = np.arange(obs[0], obs[-1] + 1)
    out[inner] = np.interp(inner, obs, s[obs])
    return out


@dataclass(frozen=True)
class TradeMatrix:
    """Bilateral imports by importer, partner and year.

    Columns: ``importer, partner, year, imports, partner_gdp``.
    """

    frame: pd.DataFrame = field(repr=False)

    COLUMNS = ("importer", "partner", "year", "imports", "partner_gdp")

    def __post_init__(self):
        f = self.frame
        missing = [c for c in self.COLUMNS if c not in f.columns]
        if missing:
            raise PanelError(f"trade data missing column(s): {', '.join(missing)}")
        f = f.loc[:, list(self.COLUMNS)].copy()
        f["importer"] = f["importer"].astype(str)
        f["partner"] = f["partner"].astype(str)
        f["year"] = f["year"].astype(np.int64)
        if (f["importer"] == f["partner"]).any():
            raise PanelError("trade data contains self pairs")
        if (f["imports"] < 0).any():
            raise PanelError("imports must be nonnegative")
        if f.duplicated(["importer", "partner", "year"]).any():
            raise PanelError("duplicate (importer, partner, year) rows in trade data")
        object.__setattr__(self, "frame", f.set_index(["importer", "year", "partner"]).sort_index())

    @classmethod
    def read_csv(cls, source) -> "TradeMatrix":
        return cls(pd.read_csv(source, dtype={"importer": str, "partner": str}, comment="#", float_precision="round_trip"))

    def partners(self, importer, year, partner_set=None) -> pd.DataFrame:
        try:
            rows = self.frame.loc[(str(importer), int(year))]
        except KeyError:
            return self.frame.iloc[:0].reset_index(level=[0, 1], drop=True)
        if partner_set is not None:
            rows = rows.loc[rows.index.isin(list(partner_set))]
        return rows


def _partner_terms(trade, rd_stocks, importer, year, partner_set):
    rows = trade.partners(importer, year, partner_set)
    stocks, weights_m, gdp, skipped = [], [], [], 0
    for partner, row in rows.iterrows():
        value = rd_stocks.get((partner, int(year)), np.nan)
        if not np.isfinite(value):
            skipped += 1
            continue
        stocks.append(value)
        weights_m.append(row["imports"])
        gdp.append(row["partner_gdp"])
    return np.array(stocks), np.array(weights_m, dtype=float), np.array(gdp, dtype=float), skipped, len(rows)


def _as_lookup(rd_stocks):
    if isinstance(rd_stocks, pd.Series):
        return rd_stocks.to_dict()
    return rd_stocks


def lp_foreign_rd(trade: TradeMatrix, rd_stocks, importer, year, partner_set=None) -> float:
    """``sum_c (M_ic / Y_c) * R_c`` over partners with a known R&D stock.

    ``rd_stocks`` maps ``(unit, year)`` to a stock (a MultiIndex Series from
    :meth:`PanelDataset.series` works).
    """
    stocks, m, gdp, skipped, total = _partner_terms(
        trade, _as_lookup(rd_stocks), importer, year, partner_set
    )
    if total and stocks.size == 0:
        raise InsufficientDataError(f"{importer} {year}: every partner lacks an R&D stock")
    if skipped:
        log.debug("%s %s: skipped %d partner(s) without R&D stock", importer, year, skipped)
    live = m > 0
    if np.any(gdp[live] <= 0):
        raise PanelError(f"{importer} {year}: partner GDP must be positive")
    return float(np.sum(m[live] / gdp[live] * stocks[live]))


def ch_weights(imports) -> np.ndarray:
    m = np.asarray(imports, dtype=float)
    total = m.sum()
    if not total > 0:
        raise PanelError("total imports over the partner set are zero")
    return m / total


def ch_foreign_rd(trade: TradeMatrix, rd_stocks, importer, year, partner_set=None) -> float:
    """Import-share weighted average of partner R&D stocks (weights sum to one)."""
    stocks, m, _, skipped, total = _partner_terms(
        trade, _as_lookup(rd_stocks), importer, year, partner_set
    )
    if total and stocks.size == 0:
        raise InsufficientDataError(f"{importer} {year}: every partner lacks an R&D stock")
    return float(ch_weights(m) @ stocks)


def rd_stock_panel(
    ds: PanelDataset,
    gerd_share: str,
    gdp: str,
    config: ConstructionConfig = ConstructionConfig(),
) -> np.ndarray:
    """Domestic R&D stocks for every unit from a GERD/GDP share and real GDP.

    Expenditure is ``share * gdp`` (after the optional GNP-to-GDP ratio
    column is applied to the share). The initial stock uses the unit's mean
    share and growth from :func:`average_growth`.
    """
    names = [gerd_share, gdp] + ([config.gnp_to_gdp] if config.gnp_to_gdp else [])
    check_panel(ds, names)
    share = ds[gerd_share]
    if config.gnp_to_gdp:
        ratio = ds[config.gnp_to_gdp]
        share = np.where(np.isfinite(ratio), share * ratio, share)
    out = np.full(ds.shape, np.nan)
    for i, unit in enumerate(ds.units):
        live = np.isfinite(share[i]) & np.isfinite(ds[gdp][i])
        if not live.any():
            continue
        idx = np.flatnonzero(live)
        span = slice(idx[0], idx[-1] + 1)
        if not live[span].all():
            raise PanelError(f"unit {unit}: gaps in R&D share or GDP; interpolate first")
        y_series = pd.Series(ds[gdp][i], index=ds.times)
        g = average_growth(y_series, config.growth_window, config.fallback_window)
        rex = share[i, span] * ds[gdp][i, span]
        out[i, span] = perpetual_inventory(
            rex, ds[gdp][i, idx[0]], float(np.mean(share[i, span])), config.delta_rd, g
        )
    return out


def foreign_rd_panel(
    ds: PanelDataset,
    trade: TradeMatrix,
    rd_stock: str,
    config: ConstructionConfig = ConstructionConfig(),
) -> np.ndarray:
    """Foreign R&D stock for every (unit, year) cell under the configured scheme."""
    check_panel(ds, [rd_stock])
    lookup = ds.series(rd_stock).to_dict()
    fn = lp_foreign_rd if config.weight_scheme == "lp" else ch_foreign_rd
    out = np.full(ds.shape, np.nan)
    for i, unit in enumerate(ds.units):
        for j, year in enumerate(ds.times):
            if trade.partners(unit, year, config.partner_set).empty:
                continue
            try:
                out[i, j] = fn(trade, lookup, unit, year, config.partner_set)
            except (InsufficientDataError, PanelError) as exc:
                log.debug("foreign R&D %s %s left missing: %s", unit, year, exc)
    return out
