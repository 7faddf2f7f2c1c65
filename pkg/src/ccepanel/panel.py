"""
Unbalanced panel container and the deterministic column transforms that
every estimator consumes.

Variables are stored as ``(N, T)`` float arrays; a masked (unavailable) cell
is ``NaN``. Transforms never un-mask a cell: any arithmetic touching a
masked input yields a masked output.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

import numpy as np
import pandas as pd
from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import PanelError

log = logging.getLogger(__name__)

ArrayOrName = Union[str, np.ndarray]

__all__ = [
    "PanelDataset",
    "load_panel",
    "write_panel",
    "lag",
    "first_difference",
    "cross_section_average",
    "cs_demean",
    "dummy_columns",
    "CrossSectionDemeaner",
    "check_panel",
]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PanelDataset:
    """N x T panel of named real variables.

    Parameters
    ----------
    units : sequence of str
        Unit identifiers, unique, in the order rows are stored.
    times : sequence of int
        Consecutive integer periods (years).
    data : mapping of str to array of shape (N, T)
        Variable values; NaN marks a masked cell.
    """

    units: tuple
    times: np.ndarray
    data: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        units = tuple(str(u) for u in self.units)
        if len(set(units)) != len(units):
            dup = sorted({u for u in units if units.count(u) > 1})
            raise PanelError(f"duplicate unit identifiers: {dup}")
        times = np.asarray(self.times)
        if times.ndim != 1 or times.size == 0:
            raise PanelError("time index must be a non-empty 1-d sequence")
        if not np.issubdtype(times.dtype, np.integer):
            if not np.all(np.equal(np.mod(times, 1), 0)):
                raise PanelError("time index must be integer valued")
            times = times.astype(np.int64)
        if times.size > 1 and not np.all(np.diff(times) == 1):
            raise PanelError("time index must be strictly increasing with unit step")
        times = times.astype(np.int64)
        times.setflags(write=False)
        shape = (len(units), times.size)
        data = {}
        for name, values in self.data.items():
            arr = np.asarray(values, dtype=float)
            if arr.shape != shape:
                raise PanelError(
                    f"variable {name!r} has shape {arr.shape}, expected {shape}"
                )
            if np.isinf(arr).any():
                raise PanelError(f"variable {name!r} contains infinite values")
            data[str(name)] = _frozen(arr)
        object.__setattr__(self, "units", units)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "data", data)

    @property
    def n_units(self) -> int:
        return len(self.units)

    @property
    def n_periods(self) -> int:
        return int(self.times.size)

    @property
    def shape(self) -> tuple:
        return (self.n_units, self.n_periods)

    @property
    def variables(self) -> list:
        return list(self.data)

    def __getitem__(self, name: str) -> np.ndarray:
        try:
            return self.data[name]
        except KeyError:
            raise PanelError(f"unknown variable {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self.data

    def mask(self, name: str) -> np.ndarray:
        """Availability flags (True where observed)."""
        return np.isfinite(self[name])

    def nobs(self, name: str) -> int:
        return int(self.mask(name).sum())

    def observation_counts(self) -> dict:
        return {name: self.nobs(name) for name in self.data}

    def unit_index(self, unit: str) -> int:
        try:
            return self.units.index(str(unit))
        except ValueError:
            raise PanelError(f"unknown unit {unit!r}") from None

    def time_index(self, year: int) -> int:
        pos = int(year) - int(self.times[0])
        if pos < 0 or pos >= self.n_periods:
            raise PanelError(f"year {year} outside panel range")
        return pos

    def with_columns(self, columns: Mapping[str, np.ndarray] = None, **kwargs) -> "PanelDataset":
        """New dataset with columns added or replaced."""
        data = dict(self.data)
        data.update(columns or {})
        data.update(kwargs)
        return PanelDataset(self.units, self.times, data)

    def select(self, variables: Iterable[str] = None, units: Iterable[str] = None) -> "PanelDataset":
        variables = list(self.data) if variables is None else list(variables)
        rows = (
            list(range(self.n_units))
            if units is None
            else [self.unit_index(u) for u in units]
        )
        data = {v: self[v][rows] for v in variables}
        return PanelDataset(tuple(self.units[r] for r in rows), self.times, data)

    def series(self, name: str) -> pd.Series:
        """Available cells of one variable as a (unit, year)-indexed series."""
        arr = self[name]
        ii, tt = np.nonzero(np.isfinite(arr))
        index = pd.MultiIndex.from_arrays(
            [np.asarray(self.units, dtype=object)[ii], self.times[tt]],
            names=["unit", "year"],
        )
        return pd.Series(arr[ii, tt], index=index, name=name)

    def to_frame(self) -> pd.DataFrame:
        """Long format: one row per (unit, year) with at least one observed value."""
        n, t = self.shape
        frame = pd.DataFrame(
            {
                "unit": np.repeat(np.asarray(self.units, dtype=object), t),
                "year": np.tile(self.times, n),
            }
        )
        for name, arr in self.data.items():
            frame[name] = arr.reshape(-1)
        if self.data:
            keep = frame[list(self.data)].notna().any(axis=1)
            frame = frame.loc[keep]
        return frame.reset_index(drop=True)


def check_panel(ds, variables: Iterable[str] = ()) -> PanelDataset:
    """Validate that ``ds`` is a panel holding every name in ``variables``."""
    if not isinstance(ds, PanelDataset):
        raise TypeError(f"expected a PanelDataset, got {type(ds).__name__}")
    missing = [v for v in variables if v not in ds.data]
    if missing:
        raise PanelError(f"unknown variable(s): {', '.join(missing)}")
    return ds


def _values(ds: PanelDataset, var: ArrayOrName) -> np.ndarray:
    if isinstance(var, str):
        return ds[var]
    arr = np.asarray(var, dtype=float)
    if arr.shape != ds.shape:
        raise PanelError(f"column has shape {arr.shape}, expected {ds.shape}")
    return arr


def _gap_units(arr: np.ndarray) -> list:
    bad = []
    for i, row in enumerate(arr):
        idx = np.flatnonzero(np.isfinite(row))
        if idx.size and idx[-1] - idx[0] + 1 != idx.size:
            bad.append(i)
    return bad


def load_panel(
    source,
    unit_col: str = "unit",
    time_col: str = "year",
    variables: Sequence[str] = None,
    interpolate: bool = False,
) -> PanelDataset:
    """Read a long-format delimited table into a :class:`PanelDataset`.

    Parameters
    ----------
    source : path or file-like
        Comma separated, header row, one row per (unit, year); empty fields
        are missing values.
    unit_col, time_col : str
        Names of the identifier columns.
    variables : sequence of str, optional
        Variables to keep; defaults to every other column.
    interpolate : bool
        Fill interior gaps linearly before validation. Without it an interior
        gap in any unit's series is an error.
    """
    frame = pd.read_csv(source, dtype={unit_col: str}, skipinitialspace=True, comment="#", float_precision="round_trip")
    for col in (unit_col, time_col):
        if col not in frame.columns:
            raise PanelError(f"missing column {col!r}")
    if variables is None:
        variables = [c for c in frame.columns if c not in (unit_col, time_col)]
    variables = list(variables)
    if not variables:
        raise PanelError("no variable columns")
    missing = [v for v in variables if v not in frame.columns]
    if missing:
        raise PanelError(f"missing column(s): {', '.join(missing)}")
    if frame.empty:
        raise PanelError("empty panel")

    years = pd.to_numeric(frame[time_col], errors="coerce")
    bad_time = years.isna() | (years != np.floor(years))
    if bad_time.any():
        row = int(np.flatnonzero(bad_time.to_numpy())[0])
        raise PanelError(
            f"row {row + 2}: time value {frame[time_col].iloc[row]!r} is not an integer"
        )
    frame[time_col] = years.astype(np.int64)
    if frame[unit_col].isna().any():
        row = int(np.flatnonzero(frame[unit_col].isna().to_numpy())[0])
        raise PanelError(f"row {row + 2}: missing unit identifier")

    dup = frame.duplicated([unit_col, time_col], keep="first")
    if dup.any():
        row = int(np.flatnonzero(dup.to_numpy())[0])
        raise PanelError(
            f"row {row + 2}: duplicate (unit, year) = "
            f"({frame[unit_col].iloc[row]}, {frame[time_col].iloc[row]})"
        )

    for var in variables:
        col = frame[var]
        numeric = pd.to_numeric(col, errors="coerce")
        bad = numeric.isna() & col.notna() & (col.astype(str).str.strip() != "")
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            raise PanelError(
                f"row {row + 2}: non-numeric value {col.iloc[row]!r} in column {var!r}"
            )
        frame[var] = numeric

    units = list(dict.fromkeys(frame[unit_col]))
    t0, t1 = int(frame[time_col].min()), int(frame[time_col].max())
    times = np.arange(t0, t1 + 1)
    rows = frame[unit_col].map({u: i for i, u in enumerate(units)}).to_numpy()
    cols = frame[time_col].to_numpy() - t0
    data = {}
    for var in variables:
        arr = np.full((len(units), times.size), np.nan)
        arr[rows, cols] = frame[var].to_numpy(dtype=float)
        if interpolate:
            from .construct import interpolate_gaps

            for i in range(arr.shape[0]):
                if np.isfinite(arr[i]).sum() >= 2:
                    arr[i] = interpolate_gaps(arr[i])
        gaps = _gap_units(arr)
        if gaps:
            names = ", ".join(units[i] for i in gaps)
            raise PanelError(
                f"variable {var!r} has interior gaps for unit(s) {names}; "
                "interpolate them first"
            )
        data[var] = arr
    ds = PanelDataset(tuple(units), times, data)
    if not any(ds.nobs(v) for v in variables):
        raise PanelError("empty panel")
    log.info("loaded panel N=%d T=%d obs=%s", ds.n_units, ds.n_periods, ds.observation_counts())
    return ds


def write_panel(ds: PanelDataset, dest, float_format: str = None) -> None:
    """Write ``ds`` in the same long format :func:`load_panel` reads."""
    frame = ds.to_frame()
    if isinstance(dest, (str, Path)):
        frame.to_csv(dest, index=False, float_format=float_format)
    else:
        dest.write(frame.to_csv(index=False, float_format=float_format))


def _shift(arr: np.ndarray, l: int) -> np.ndarray:
    out = np.full_like(arr, np.nan)
    if l < arr.shape[1]:
        out[:, l:] = arr[:, : arr.shape[1] - l]
    return out


def lag(ds: PanelDataset, var: ArrayOrName, l: int = 1) -> np.ndarray:
    """Value at (i, t) is ``var`` at (i, t - l); the first ``l`` periods are masked."""
    if int(l) != l or l < 1:
        raise PanelError(f"lag order must be a positive integer, got {l!r}")
    return _shift(_values(ds, var), int(l))


def first_difference(ds: PanelDataset, var: ArrayOrName) -> np.ndarray:
    arr = _values(ds, var)
    return arr - _shift(arr, 1)


def cross_section_average(ds: PanelDataset, var: ArrayOrName) -> np.ndarray:
    """Equal-weight mean at each t over units observed at t (NaN if none)."""
    arr = _values(ds, var)
    avail = np.isfinite(arr)
    count = avail.sum(axis=0)
    total = np.where(avail, arr, 0.0).sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(count > 0, total / np.maximum(count, 1), np.nan)


def cs_demean(ds: PanelDataset, var: ArrayOrName) -> np.ndarray:
    arr = _values(ds, var)
    return arr - cross_section_average(ds, arr)[None, :]


def dummy_columns(
    ds: PanelDataset, kind: str = "year", drop: int = 1, categories: Sequence = None
) -> dict:
    """Indicator columns for years or units, omitting the earliest ``drop`` categories.

    ``categories`` restricts the set (e.g. to years present in an estimation
    sample); it defaults to every year or unit of the panel.
    """
    if kind not in ("year", "unit"):
        raise PanelError(f"dummy kind must be 'year' or 'unit', got {kind!r}")
    if drop < 0:
        raise PanelError("drop must be nonnegative")
    if kind == "year":
        cats = list(ds.times) if categories is None else sorted(int(c) for c in categories)
    else:
        cats = list(ds.units) if categories is None else [str(c) for c in categories]
    if drop >= len(cats):
        raise PanelError(f"cannot drop {drop} of {len(cats)} {kind} categories")
    n, t = ds.shape
    out = {}
    for cat in cats[drop:]:
        col = np.zeros((n, t))
        if kind == "year":
            col[:, ds.time_index(cat)] = 1.0
        else:
            col[ds.unit_index(cat), :] = 1.0
        out[f"{kind}[{cat}]"] = col
    return out


class CrossSectionDemeaner(TransformerMixin, BaseEstimator):
    """Subtract the period-by-period cross-section average from variables.

    Stateless: ``fit`` only records which variables to transform.
    """

    def __init__(self, variables=None):
        self.variables = variables

    def fit(self, X, y=None):
        check_panel(X)
        self.variables_ = list(X.variables if self.variables is None else self.variables)
        check_panel(X, self.variables_)
        return self

    def transform(self, X):
        check_panel(X, getattr(self, "variables_", ()))
        return X.with_columns({v: cs_demean(X, v) for v in self.variables_})
