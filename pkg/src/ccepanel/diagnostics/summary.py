"""Descriptive statistics in levels, logs and log growth rates."""

from __future__ import annotations

import numpy as np
import pandas as pd

from ..exceptions import InsufficientDataError
from ..panel import PanelDataset, check_panel

STATS = ("mean", "median", "sd", "min", "max")


def _describe(values: np.ndarray) -> dict:
    values = values[np.isfinite(values)]
    if values.size == 0:
        return dict.fromkeys(STATS, np.nan)
    return {
        "mean": float(values.mean()),
        "median": float(np.median(values)),
        "sd": float(values.std(ddof=1)) if values.size > 1 else 0.0,
        "min": float(values.min()),
        "max": float(values.max()),
    }


def summary_stats(ds: PanelDataset, var: str, log_input: bool = False) -> pd.DataFrame:
    """Mean, median, sd, min and max of a variable over all available cells.

    Rows are ``levels``, ``logs`` and ``growth`` (first difference of logs).
    With ``log_input`` the stored column is taken to be in logs already.
    Nonpositive levels are excluded from the log rows.
    """
    check_panel(ds, [var])
    raw = ds[var]
    if not np.isfinite(raw).any():
        raise InsufficientDataError(f"no observations of {var!r}")
    if log_input:
        logs = raw
        levels = np.exp(raw)
    else:
        levels = raw
        with np.errstate(invalid="ignore", divide="ignore"):
            logs = np.where(raw > 0, np.log(np.where(raw > 0, raw, 1.0)), np.nan)
    growth = np.diff(logs, axis=1)
    rows = {"levels": _describe(levels), "logs": _describe(logs), "growth": _describe(growth)}
    return pd.DataFrame.from_dict(rows, orient="index")[list(STATS)]
