"""Least-squares kernel shared by every estimator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .exceptions import CollinearityError, InsufficientDataError

SE_KINDS = ("classical", "robust_hc1")


@dataclass(frozen=True)
class RegressionFit:
    """Result of :func:`ols`.

    ``covariance`` and ``se`` follow ``se_kind``; ``rmse`` is
    ``sqrt(mean(residuals**2))`` with no degrees-of-freedom correction.
    """

    coefficients: np.ndarray
    se: np.ndarray
    residuals: np.ndarray
    rmse: float
    nobs: int
    rank: int
    covariance: np.ndarray
    names: tuple
    se_kind: str

    @property
    def tvalues(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.coefficients / self.se

    def coef(self, name: str) -> float:
        return float(self.coefficients[self.names.index(name)])


def _rank(X: np.ndarray) -> int:
    s = linalg.svdvals(X)
    if s.size == 0 or s[0] == 0.0:
        return 0
    tol = np.finfo(float).eps * s[0] * max(X.shape)
    return int((s > tol).sum())


def ols(y, X, se_kind: str = "robust_hc1", names=None) -> RegressionFit:
    """Ordinary least squares through a QR factorization.

    Parameters
    ----------
    y : array of shape (n,)
    X : array of shape (n, k)
    se_kind : {"classical", "robust_hc1"}
        ``robust_hc1`` is the White sandwich scaled by ``n / (n - k)``.
    names : sequence of str, optional
        Column labels, used in error messages and :meth:`RegressionFit.coef`.

    Raises
    ------
    CollinearityError
        If singular values of ``X`` below ``eps * s_max * max(n, k)`` exist;
        the message names the columns a pivoted QR flags as dependent.
    InsufficientDataError
        If ``n <= k``.
    """
    if se_kind not in SE_KINDS:
        raise ValueError(f"se_kind must be one of {SE_KINDS}, got {se_kind!r}")
    y = np.asarray(y, dtype=float).reshape(-1)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if n != y.size:
        raise ValueError(f"y has {y.size} rows but X has {n}")
    names = tuple(names) if names is not None else tuple(f"x{j}" for j in range(k))
    if len(names) != k:
        raise ValueError("names must match the number of columns")
    if not (np.isfinite(y).all() and np.isfinite(X).all()):
        raise ValueError("y and X must be finite")
    if n <= k:
        raise InsufficientDataError(f"{n} observations for {k} regressors")

    rank = _rank(X)
    if rank < k:
        _, _, piv = linalg.qr(X, mode="economic", pivoting=True)
        dependent = [names[j] for j in sorted(piv[rank:])]
        raise CollinearityError(
            f"design is rank deficient (rank {rank} < {k}); collinear column(s): "
            + ", ".join(dependent),
            dependent,
        )

    q, r = linalg.qr(X, mode="economic")
    beta = linalg.solve_triangular(r, q.T @ y)
    resid = y - X @ beta
    r_inv = linalg.solve_triangular(r, np.eye(k))
    bread = r_inv @ r_inv.T
    if se_kind == "classical":
        cov = bread * (resid @ resid) / (n - k)
    else:
        xe = X * resid[:, None]
        cov = bread @ (xe.T @ xe) @ bread * (n / (n - k))
    cov = 0.5 * (cov + cov.T)
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    return RegressionFit(
        coefficients=beta,
        se=se,
        residuals=resid,
        rmse=float(np.sqrt(np.mean(resid**2))),
        nobs=n,
        rank=rank,
        covariance=cov,
        names=names,
        se_kind=se_kind,
    )
