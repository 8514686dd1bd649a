"""Sparse recovery on the reduced problem with Orthogonal Matching Pursuit."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.linalg import solve_triangular

from gtcs.core.config import settings
from gtcs.core.errors import InvalidParameterError, RankDeficientError

logger = logging.getLogger(__name__)

# Relative size of an R diagonal entry below which a column counts as dependent
RANK_RCOND = 1e-10


@dataclass(frozen=True)
class SparseSolution:
    """Result of an OMP run.

    `support` lists reduced-column indices in selection order and
    `coefficients` holds the least-squares fit on them.
    """

    support: np.ndarray
    coefficients: np.ndarray
    residual_norm: float
    iterations: int
    converged: bool
    residual_history: List[float] = field(default_factory=list)

    def positives(self, threshold: float = settings.POSITIVE_THRESHOLD) -> np.ndarray:
        """Ascending support indices whose coefficient exceeds threshold."""
        return np.sort(self.support[self.coefficients > threshold])


def least_squares(columns: np.ndarray, loads: np.ndarray) -> np.ndarray:
    """Solve min ||columns @ c - loads||_2 with a reduced QR factorization.

    Args:
        columns: m_r x k matrix with k <= m_r
        loads: Length-m_r right-hand side

    Returns:
        Length-k coefficients

    Raises:
        RankDeficientError: If a column lies (numerically) in the span of the
            columns before it; `column` names its position
    """
    a = np.asarray(columns, dtype=float)
    y = np.asarray(loads, dtype=float)
    if a.ndim != 2 or a.shape[0] != y.shape[0]:
        raise InvalidParameterError(
            f"columns of shape {a.shape} do not match loads of length {y.shape[0]}"
        )
    k = a.shape[1]
    if k == 0:
        return np.empty(0)
    if k > a.shape[0]:
        raise RankDeficientError(f"{k} columns cannot be independent in {a.shape[0]} rows", column=a.shape[0])

    q, r = np.linalg.qr(a)
    diag = np.abs(np.diag(r))
    scale = max(float(np.linalg.norm(a, axis=0).max()), np.finfo(float).tiny)
    dependent = np.flatnonzero(diag <= RANK_RCOND * scale)
    if dependent.size:
        raise RankDeficientError(
            f"column {int(dependent[0])} is linearly dependent on earlier columns",
            column=int(dependent[0]),
        )
    return solve_triangular(r, q.T @ y, lower=False)


def omp(
    matrix: np.ndarray,
    loads: np.ndarray,
    max_iter: Optional[int] = None,
    tol: float = settings.OMP_TOL,
    normalize: bool = settings.NORMALIZE_COLUMNS,
) -> SparseSolution:
    """Orthogonal Matching Pursuit.

    Each iteration picks the column with the largest absolute correlation
    with the residual (lowest index on ties), refits all selected columns by
    least squares and updates the residual. Stops once the residual norm is
    at most tol * (1 + ||loads||) or max_iter columns are selected. Columns
    whose refit is rank deficient are dropped and never reconsidered.

    Args:
        matrix: m_r x n_r binary (or real) matrix
        loads: Length-m_r measurements
        max_iter: Iteration cap, at most min(m_r, n_r); defaults to that bound
        tol: Relative residual tolerance
        normalize: Correlate against unit-norm columns instead of raw columns

    Returns:
        SparseSolution; converged is False when the tolerance was not met
    """
    a = np.asarray(matrix, dtype=float)
    y = np.asarray(loads, dtype=float)
    if a.ndim != 2 or a.shape[0] != y.shape[0]:
        raise InvalidParameterError(
            f"matrix of shape {a.shape} does not match loads of length {y.shape[0]}"
        )
    if tol < 0:
        raise InvalidParameterError(f"tol must be non-negative, got {tol}")
    m_r, n_r = a.shape
    bound = min(m_r, n_r)
    if max_iter is None:
        max_iter = bound
    elif not 0 <= max_iter <= bound:
        raise InvalidParameterError(f"max_iter must lie in [0, {bound}], got {max_iter}")

    stop = tol * (1.0 + float(np.linalg.norm(y)))
    residual = y.copy()
    residual_norm = float(np.linalg.norm(residual))
    history = [residual_norm]
    support: List[int] = []
    coefficients = np.empty(0)
    blocked = np.zeros(n_r, dtype=bool)

    if normalize:
        norms = np.linalg.norm(a, axis=0)
        scale = np.divide(1.0, norms, out=np.zeros(n_r), where=norms > 0)

    while len(support) < max_iter and residual_norm > stop:
        corr = a.T @ residual
        if normalize:
            corr *= scale
        score = np.abs(corr)
        score[blocked] = -1.0
        j = int(np.argmax(score))
        if score[j] <= 0.0:
            break

        candidate = support + [j]
        try:
            fit = least_squares(a[:, candidate], y)
        except RankDeficientError:
            logger.debug("event=omp_column_dropped column=%d", j)
            blocked[j] = True
            continue

        blocked[j] = True
        support = candidate
        coefficients = fit
        residual = y - a[:, support] @ coefficients
        residual_norm = float(np.linalg.norm(residual))
        history.append(residual_norm)

    converged = residual_norm <= stop
    if not converged:
        logger.debug(
            "event=omp_not_converged iterations=%d residual=%.3e stop=%.3e",
            len(support), residual_norm, stop,
        )
    return SparseSolution(
        support=np.asarray(support, dtype=np.int64),
        coefficients=np.asarray(coefficients, dtype=float),
        residual_norm=residual_norm,
        iterations=len(support),
        converged=converged,
        residual_history=history,
    )
