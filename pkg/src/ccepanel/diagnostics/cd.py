"""CD test for weak cross-section dependence of panel residuals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..exceptions import InsufficientDataError
from ..panel import PanelDataset

MIN_OVERLAP = 3


@dataclass(frozen=True)
class CDResult:
    statistic: float
    p_value: float
    n_pairs: int
    avg_overlap: float
    skipped_pairs: int = 0

    def rejects(self, level: float = 0.05) -> bool:
        return self.p_value < level


def pairwise_correlations(residuals):
    """Correlations of every unit pair over their common sample.

    Each series is demeaned over the overlap of the pair. Returns
    ``(rho, overlap)``, both ``(N, N)``; ``rho`` is NaN where the overlap is
    shorter than three periods or a series is constant on it.
    """
    e = np.asarray(residuals, dtype=float)
    avail = np.isfinite(e).astype(float)
    # centre and scale each unit first so the one-pass moments below do not cancel
    n_obs = avail.sum(axis=1, keepdims=True)
    filled = np.where(avail > 0, e, 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        centre = filled.sum(axis=1, keepdims=True) / n_obs
        dev = np.where(avail > 0, filled - centre, 0.0)
        spread = np.sqrt((dev**2).sum(axis=1, keepdims=True) / n_obs)
    spread = np.where(np.isfinite(spread) & (spread > 0), spread, 1.0)
    x = np.where(avail > 0, (e - np.nan_to_num(centre)) / spread, 0.0)
    overlap = avail @ avail.T
    sx = x @ avail.T  # sx[i, j]: sum of e_i over the overlap with j
    sxx = (x * x) @ avail.T
    sxy = x @ x.T
    with np.errstate(invalid="ignore", divide="ignore"):
        cov = sxy - sx * sx.T / overlap
        var = sxx - sx**2 / overlap
        rho = cov / np.sqrt(var * var.T)
    scale = np.maximum(sxx, sxx.T)
    degenerate = (var <= 1e-14 * scale) | (var.T <= 1e-14 * scale)
    rho[(overlap < MIN_OVERLAP) | degenerate] = np.nan
    return np.clip(rho, -1.0, 1.0), overlap


def cd_test(residuals, var: str = None) -> CDResult:
    """CD = sqrt(2 / (N (N - 1))) * sum_{i<j} sqrt(T_ij) * rho_ij.

    Parameters
    ----------
    residuals : array (N, T) with NaN for missing cells, or a PanelDataset
    var : str
        Column to test when ``residuals`` is a PanelDataset.

    Pairs with fewer than three common periods are skipped; the
    normalisation then uses the number of valid pairs in place of
    ``N (N - 1) / 2``.
    """
    if isinstance(residuals, PanelDataset):
        residuals = residuals[var or "residual"]
    e = np.asarray(residuals, dtype=float)
    if e.ndim != 2 or e.shape[0] < 2:
        raise InsufficientDataError("CD test needs at least two units")
    rho, overlap = pairwise_correlations(e)
    iu = np.triu_indices(e.shape[0], k=1)
    r, tij = rho[iu], overlap[iu]
    valid = np.isfinite(r)
    n_pairs = int(valid.sum())
    if n_pairs == 0:
        raise InsufficientDataError("no unit pair shares three or more periods")
    stat = float(np.sum(np.sqrt(tij[valid]) * r[valid]) / np.sqrt(n_pairs))
    p = float(2.0 * stats.norm.sf(abs(stat)))
    return CDResult(
        statistic=stat,
        p_value=p,
        n_pairs=n_pairs,
        avg_overlap=float(tij[valid].mean()),
        skipped_pairs=int(r.size - n_pairs),
    )
