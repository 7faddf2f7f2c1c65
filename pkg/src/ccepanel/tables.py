"""
Result tables in the layout of published panel-regression tables: a column
per model, coefficient rows with significance stars, standard errors in
parentheses, and diagnostic rows (CD test, integration order of the
residuals, RMSE, NXT, N).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from .exceptions import PanelError
from .estimators.dynamic import DynamicResult
from .estimators.static import StaticResult

log = logging.getLogger(__name__)

STAR_LEVELS = ((0.01, "***"), (0.05, "**"), (0.10, "*"))
DAGGER = "†"
SE_LABEL = "std errors"
EC_LABEL = "Cointegration coefficient"


def stars(p_value: float) -> str:
    """``***`` below 1%, ``**`` below 5%, ``*`` below 10%, else empty."""
    if not np.isfinite(p_value):
        return ""
    for level, mark in STAR_LEVELS:
        if p_value < level:
            return mark
    return ""


def normal_p_value(coef: float, se: float) -> float:
    if not (np.isfinite(coef) and np.isfinite(se)) or se <= 0:
        return np.nan
    return float(2.0 * stats.norm.sf(abs(coef / se)))


@dataclass
class ResultTable:
    """Rows of formatted cells keyed by column label."""

    columns: list
    rows: list = field(default_factory=list)  # (label, [cells])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [cells for _, cells in self.rows],
            index=[label for label, _ in self.rows],
            columns=self.columns,
        )

    def row_labels(self) -> list:
        return [label for label, _ in self.rows]

    def render(self, fmt: str = "text") -> str:
        if fmt == "csv":
            frame = self.to_frame()
            frame.index.name = ""
            return frame.to_csv(lineterminator="\n")
        if fmt != "text":
            raise PanelError(f"unknown table format {fmt!r}")
        header = [""] + list(self.columns)
        body = [[label] + list(cells) for label, cells in self.rows]
        widths = [max(len(r[j]) for r in [header] + body) for j in range(len(header))]
        lines = []
        for r in [header] + body:
            first = r[0].ljust(widths[0])
            rest = [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
            lines.append("  ".join([first] + rest).rstrip())
        return "\n".join(lines) + "\n"


def _num(x, digits: Optional[int]) -> str:
    if x is None or not np.isfinite(x):
        return ""
    if digits is None:
        return repr(float(x))
    return f"{x:.{digits}f}"


def _integration_order(result, case: str) -> str:
    from .diagnostics.cips import cips_test

    try:
        return cips_test(result.residual_panel(), "residual", case=case).integration_order
    except (PanelError, ValueError) as exc:
        log.info("CIPS on residuals unavailable: %s", exc)
        return "n/a"


def build_table(
    results: Sequence,
    labels: Sequence[str],
    digits: Optional[int] = 3,
    cd_digits: Optional[int] = 2,
    integration_order: Optional[bool] = None,
    cips_case: str = "intercept",
) -> ResultTable:
    """Assemble a result table from fitted models.

    Parameters
    ----------
    results : sequence of StaticResult or DynamicResult
    labels : column labels
    digits : decimals for coefficients, standard errors and RMSE; ``None``
        prints full precision (also applied to ``cd_digits``).
    integration_order : bool, optional
        Add an "Order of Integration" row from a CIPS test on each model's
        residuals. Defaults to True for static models only.
    """
    results = list(results)
    labels = list(labels)
    if not results or len(results) != len(labels):
        raise PanelError("need one label per result")
    if digits is None:
        cd_digits = None
    dynamic = any(isinstance(r, DynamicResult) for r in results)
    if integration_order is None:
        integration_order = not dynamic

    regs = []
    for r in results:
        for name in r.coefficients.index:
            if name not in regs:
                regs.append(name)

    table = ResultTable(columns=labels)
    for name in regs:
        coef_cells, se_cells = [], []
        for r in results:
            if name in r.coefficients.index:
                b, s = float(r.coefficients[name]), float(r.se[name])
                coef_cells.append(_num(b, digits) + stars(normal_p_value(b, s)))
                se_cells.append(f"({_num(s, digits)})" if np.isfinite(s) else "")
            else:
                coef_cells.append("")
                se_cells.append("")
        table.rows.append((name, coef_cells))
        table.rows.append((SE_LABEL, se_cells))

    if dynamic:
        ec_cells, ec_se = [], []
        for r in results:
            ec = getattr(r, "ec_coefficient", None)
            se = getattr(r, "ec_se", None)
            if ec is None:
                ec_cells.append("")
                ec_se.append("")
                continue
            ec_cells.append(_num(ec, digits) + stars(normal_p_value(ec, se if se is not None else np.nan)))
            ec_se.append(f"({_num(se, digits)})" if se is not None and np.isfinite(se) else "")
        table.rows.append((EC_LABEL, ec_cells))
        table.rows.append((SE_LABEL, ec_se))

    cd_cells = []
    for r in results:
        if r.cd is None:
            cd_cells.append("n/a")
        else:
            cd_cells.append(_num(r.cd.statistic, cd_digits) + (DAGGER if r.cd.rejects(0.05) else ""))
    table.rows.append(("CD-test", cd_cells))
    if integration_order:
        table.rows.append(("Order of Integration", [_integration_order(r, cips_case) for r in results]))
    table.rows.append(("RMSE", [_num(r.rmse, digits) for r in results]))
    table.rows.append(("NXT", [str(int(r.nxt)) for r in results]))
    table.rows.append(("N", [str(int(r.n)) for r in results]))
    return table


def column_label(result) -> str:
    spec = result.spec
    label = spec.estimator.upper().replace("_", "-")
    if isinstance(result, DynamicResult):
        label += f" p={spec.p}"
    if getattr(spec, "trend", False):
        label += " +trend"
    return label


def summary_table(frames: dict, digits: Optional[int] = 2) -> ResultTable:
    """Stack :func:`summary_stats` frames (one per variable) into one table."""
    if not frames:
        raise PanelError("no variables to summarise")
    stats_cols = list(next(iter(frames.values())).columns)
    table = ResultTable(columns=stats_cols)
    for block in ("levels", "logs", "growth"):
        title = {"levels": "Levels", "logs": "Logarithms", "growth": "Growth"}[block]
        table.rows.append((title, [""] * len(stats_cols)))
        for var, frame in frames.items():
            label = {"levels": var, "logs": f"log {var}", "growth": f"Δ log {var}"}[block]
            table.rows.append((label, [_num(frame.loc[block, c], digits) for c in stats_cols]))
    return table
