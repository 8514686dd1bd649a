"""α-RRD pooling design generation.

A design is an m x n binary matrix whose rows are pools. Rows are built one
at a time; each new entry of a row is chosen among the samples that were
least often pooled together with the entries already picked for the row
(sparsity), and among those, the samples tested least often so far
(fairness). Remaining ties are broken uniformly at random.

Indices are 0-based here; files and reports use 1-based sample and test ids.
"""

import logging
import warnings
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import numpy as np

from gtcs.core.errors import CoverageWarning, InvalidParameterError
from gtcs.utils.rng import DesignRNG, SupportsBelow, draw_subset

logger = logging.getLogger(__name__)

# Column weight vectors: int64 arrays of length n, with `infinity_sentinel` for ∞
WeightVector = np.ndarray


def infinity_sentinel(m: int, n: int) -> int:
    """Integer standing in for ∞; larger than any column weight of an m x n design."""
    return m * n + 1


@dataclass(frozen=True)
class DesignMatrix:
    """An m x n binary pooling design whose rows all have weight alpha."""

    bits: np.ndarray
    alpha: int
    seed: int = 0

    def __post_init__(self):
        bits = np.array(self.bits, dtype=np.uint8)
        if bits.ndim != 2:
            raise InvalidParameterError(f"design must be 2-dimensional, got shape {bits.shape}")
        if np.any(bits > 1):
            raise InvalidParameterError("design entries must be 0 or 1")
        if not 1 <= self.alpha < bits.shape[1]:
            raise InvalidParameterError(
                f"alpha must satisfy 1 <= alpha < n, got alpha={self.alpha}, n={bits.shape[1]}"
            )
        weights = bits.sum(axis=1)
        if np.any(weights != self.alpha):
            bad = int(np.flatnonzero(weights != self.alpha)[0]) + 1
            raise InvalidParameterError(
                f"row {bad} has weight {int(weights[bad - 1])}, expected alpha={self.alpha}"
            )
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    @property
    def row_weights(self) -> np.ndarray:
        return self.bits.sum(axis=1, dtype=np.int64)

    @property
    def column_weights(self) -> np.ndarray:
        return self.bits.sum(axis=0, dtype=np.int64)

    @property
    def duplicate_rows(self) -> int:
        """Number of rows equal to some earlier row."""
        return self.rows - np.unique(self.bits, axis=0).shape[0]

    @property
    def uncovered_columns(self) -> np.ndarray:
        """Samples that appear in no pool."""
        return np.flatnonzero(self.column_weights == 0)

    def pool(self, row: int) -> np.ndarray:
        """Sample indices pooled in the given test."""
        return np.flatnonzero(self.bits[row])


@dataclass
class RowDraft:
    """The entries Q_k chosen so far for the row under construction."""

    alpha: int
    selected: List[int] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.selected)

    def add(self, column: int) -> None:
        if self.k >= self.alpha:
            raise InvalidParameterError(f"row already holds alpha={self.alpha} entries")
        if column in self.selected:
            raise InvalidParameterError(f"column {column} already selected")
        self.selected.append(int(column))


def calc_selected_rows(prefix: np.ndarray, q: Iterable[int]) -> np.ndarray:
    """Rows of the prefix that share a nonzero column with q.

    Args:
        prefix: (l-1) x n binary matrix of the rows built so far
        q: Column indices chosen for the current row

    Returns:
        Ascending row indices i with H(prefix[i]) ∩ q ≠ ∅
    """
    columns = list(q.selected if isinstance(q, RowDraft) else q)
    if prefix.shape[0] == 0 or not columns:
        return np.empty(0, dtype=np.int64)
    return np.flatnonzero(prefix[:, columns].any(axis=1))


def update_weight(
    n: int,
    q: Iterable[int],
    c: Iterable[int],
    prefix: np.ndarray,
    sentinel: Optional[int] = None,
) -> WeightVector:
    """Weight vector over the rows in c, with ∞ on the entries of q.

    Args:
        n: Number of columns
        q: Column indices chosen for the current row
        c: Row indices returned by calc_selected_rows
        prefix: Rows built so far
        sentinel: Value used for ∞ (defaults to a bound derived from the prefix)

    Returns:
        All ones when c is empty, otherwise the column sums over rows c;
        in both cases entries of q are set to the sentinel
    """
    if sentinel is None:
        sentinel = infinity_sentinel(prefix.shape[0] + 1, n)
    rows = np.asarray(list(c), dtype=np.int64)
    if rows.size == 0:
        w = np.ones(n, dtype=np.int64)
    else:
        w = prefix[rows].sum(axis=0, dtype=np.int64)
    columns = list(q.selected if isinstance(q, RowDraft) else q)
    if columns:
        w[columns] = sentinel
    return w


def sum_columns(
    n: int,
    prefix: np.ndarray,
    s: Iterable[int],
    sentinel: Optional[int] = None,
) -> WeightVector:
    """Column weights of the prefix restricted to s; ∞ outside s."""
    if sentinel is None:
        sentinel = infinity_sentinel(prefix.shape[0] + 1, n)
    w = np.full(n, sentinel, dtype=np.int64)
    columns = np.asarray(list(s), dtype=np.int64)
    if columns.size:
        w[columns] = prefix[:, columns].sum(axis=0, dtype=np.int64)
    return w


def argmin_set(w: WeightVector) -> np.ndarray:
    """Ascending indices of the minimal entries of w."""
    return np.flatnonzero(w == w.min())


def validate_design_parameters(n: int, m: int, alpha: int) -> None:
    """Reject parameter triples outside 1 <= alpha < n, m >= 1."""
    if m < 1:
        raise InvalidParameterError(f"m must be at least 1, got {m}")
    if alpha < 1:
        raise InvalidParameterError(f"alpha must be at least 1, got {alpha}")
    if alpha >= n:
        raise InvalidParameterError(f"alpha must be smaller than n, got alpha={alpha}, n={n}")


def generate_rrd(
    n: int,
    m: int,
    alpha: int,
    seed: int,
    rng: Optional[SupportsBelow] = None,
) -> DesignMatrix:
    """Generate an α-RRD design.

    The first row is a uniform weight-alpha vector. Every later row receives
    alpha entries; for each entry the weight vector over the earlier rows
    meeting the current row is minimized (S), then the overall column
    weights over S are minimized, and the entry is drawn uniformly from the
    resulting candidates (ascending index order). The column sums over the
    intersecting rows are maintained incrementally; the result is identical
    to composing calc_selected_rows, update_weight and sum_columns.

    Args:
        n: Number of samples (columns)
        m: Number of tests (rows)
        alpha: Pool size, 1 <= alpha < n
        seed: 64-bit seed; the design is a pure function of (n, m, alpha, seed)
        rng: Optional replacement random source (must provide below(count))

    Returns:
        The generated design
    """
    validate_design_parameters(n, m, alpha)
    if m * alpha < n:
        message = f"m*alpha={m * alpha} < n={n}: some samples cannot be covered by any test"
        logger.warning("event=design_undercovered n=%d m=%d alpha=%d", n, m, alpha)
        warnings.warn(message, CoverageWarning, stacklevel=2)

    if rng is None:
        rng = DesignRNG(seed)
    sentinel = infinity_sentinel(m, n)
    bits = np.zeros((m, n), dtype=np.uint8)

    first = draw_subset(rng, n, alpha)
    bits[0, first] = 1
    colsum = bits[0].astype(np.int64)

    for row in range(1, m):
        prefix = bits[:row]
        hit = np.zeros(row, dtype=bool)
        met_weight = np.zeros(n, dtype=np.int64)
        selected: List[int] = []
        for _ in range(alpha):
            w = met_weight.copy() if hit.any() else np.ones(n, dtype=np.int64)
            if selected:
                w[selected] = sentinel
            z = np.where(w == w.min(), colsum, sentinel)
            candidates = argmin_set(z)
            s = int(candidates[rng.below(candidates.size)])
            selected.append(s)
            bits[row, s] = 1

            newly = (prefix[:, s] == 1) & ~hit
            if newly.any():
                met_weight += prefix[newly].sum(axis=0, dtype=np.int64)
                hit |= newly
        colsum += bits[row]

    design = DesignMatrix(bits=bits, alpha=alpha, seed=seed)
    logger.debug(
        "event=design_generated n=%d m=%d alpha=%d seed=%d duplicates=%d",
        n, m, alpha, seed, design.duplicate_rows,
    )
    return design


def design_summary(design: DesignMatrix) -> Dict[str, Any]:
    """Row/column weight statistics printed after generation."""
    rw = design.row_weights
    cw = design.column_weights
    return {
        "n": design.cols,
        "m": design.rows,
        "alpha": design.alpha,
        "seed": design.seed,
        "row_weight_min": int(rw.min()),
        "row_weight_max": int(rw.max()),
        "column_weight_min": int(cw.min()),
        "column_weight_max": int(cw.max()),
        "column_weight_mean": float(cw.mean()),
        "duplicate_rows": design.duplicate_rows,
        "uncovered_columns": int(design.uncovered_columns.size),
    }
