from ._base import UnitDroppedWarning, drop_insufficient_units, mean_group
from .dynamic import (
    DYNAMIC_ESTIMATORS,
    DynamicPanelRegression,
    DynamicResult,
    DynamicSpec,
    fit_dynamic,
    long_run_from_ardl,
    rule_of_thumb_lags,
)
from .static import (
    STATIC_ESTIMATORS,
    StaticPanelRegression,
    StaticResult,
    StaticSpec,
    fit_static,
)

__all__ = [
    "DYNAMIC_ESTIMATORS",
    "STATIC_ESTIMATORS",
    "DynamicPanelRegression",
    "DynamicResult",
    "DynamicSpec",
    "StaticPanelRegression",
    "StaticResult",
    "StaticSpec",
    "UnitDroppedWarning",
    "drop_insufficient_units",
    "fit_dynamic",
    "fit_static",
    "long_run_from_ardl",
    "mean_group",
    "rule_of_thumb_lags",
]
