from .cd import CDResult, cd_test, pairwise_correlations
from .cips import CIPSResult, cips_test, simulate_critical_values, tabulated_critical_values
from .summary import summary_stats

__all__ = [
    "CDResult",
    "CIPSResult",
    "cd_test",
    "cips_test",
    "pairwise_correlations",
    "simulate_critical_values",
    "summary_stats",
    "tabulated_critical_values",
]
