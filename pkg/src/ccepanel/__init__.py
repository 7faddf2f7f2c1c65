"""
Panel estimators for productivity and R&D models under cross-section
dependence: pooled, mean-group and common-correlated-effects estimators,
dynamic ARDL / distributed-lag long-run estimators, CD and CIPS diagnostics,
variable construction and Monte Carlo tools.
"""

__version__ = "0.1.0"

from .exceptions import CollinearityError, InsufficientDataError, PanelError
from .panel import (
    CrossSectionDemeaner,
    PanelDataset,
    cross_section_average,
    cs_demean,
    dummy_columns,
    first_difference,
    lag,
    load_panel,
    write_panel,
)
from .regress import RegressionFit, ols
from .estimators import (
    DynamicPanelRegression,
    DynamicResult,
    DynamicSpec,
    StaticPanelRegression,
    StaticResult,
    StaticSpec,
    fit_dynamic,
    fit_static,
    long_run_from_ardl,
)
from .diagnostics import CDResult, CIPSResult, cd_test, cips_test, summary_stats

__all__ = [
    "CDResult",
    "CIPSResult",
    "CollinearityError",
    "CrossSectionDemeaner",
    "DynamicPanelRegression",
    "DynamicResult",
    "DynamicSpec",
    "InsufficientDataError",
    "PanelDataset",
    "PanelError",
    "RegressionFit",
    "StaticPanelRegression",
    "StaticResult",
    "StaticSpec",
    "cd_test",
    "cips_test",
    "cross_section_average",
    "cs_demean",
    "dummy_columns",
    "first_difference",
    "fit_dynamic",
    "fit_static",
    "lag",
    "load_panel",
    "long_run_from_ardl",
    "ols",
    "summary_stats",
    "write_panel",
]
