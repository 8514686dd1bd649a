"""Boolean group testing: measurement, binarization, COMP and problem reduction."""

import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from gtcs.core.config import settings
from gtcs.core.errors import InvalidParameterError
from gtcs.services.design import DesignMatrix

logger = logging.getLogger(__name__)

# Length-m uint8 vector of test results
BinaryResults = np.ndarray


@dataclass(frozen=True)
class SureNegatives:
    """Samples and tests that COMP certifies as negative."""

    negative_samples: np.ndarray
    negative_tests: np.ndarray
    uncovered_samples: int = 0


@dataclass(frozen=True)
class ReducedProblem:
    """The design and loads projected onto positive tests and retained samples."""

    matrix: np.ndarray
    loads: np.ndarray
    sample_map: np.ndarray
    test_map: np.ndarray

    @property
    def m_r(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_r(self) -> int:
        return self.matrix.shape[1]

    @property
    def is_empty(self) -> bool:
        return self.m_r == 0 or self.n_r == 0


def _support_mask(n: int, support: Iterable[int]) -> np.ndarray:
    idx = np.asarray(list(support), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise InvalidParameterError(f"support indices must lie in [0, {n})")
    mask = np.zeros(n, dtype=bool)
    mask[idx] = True
    return mask


def boolean_measure(design: DesignMatrix, support: Iterable[int]) -> BinaryResults:
    """OR-measurement: test i is positive iff its pool meets the support."""
    mask = _support_mask(design.cols, support)
    return design.bits[:, mask].any(axis=1).astype(np.uint8)


def binarize(loads: np.ndarray, epsilon: float = settings.BINARIZE_EPSILON) -> BinaryResults:
    """Mark a test positive iff its load exceeds epsilon."""
    if epsilon < 0:
        raise InvalidParameterError(f"epsilon must be non-negative, got {epsilon}")
    return (np.asarray(loads, dtype=float) > epsilon).astype(np.uint8)


def comp_sure_negatives(design: DesignMatrix, results: BinaryResults) -> SureNegatives:
    """COMP: every sample in a negative test is negative.

    Samples in no test at all are not certified; they stay in the reduced
    problem as all-zero columns.
    """
    results = np.asarray(results)
    if results.shape != (design.rows,):
        raise InvalidParameterError(
            f"results length {results.shape} does not match m={design.rows}"
        )
    negative_tests = np.flatnonzero(results == 0)
    negative_samples = np.flatnonzero(design.bits[negative_tests].any(axis=0))
    return SureNegatives(
        negative_samples=negative_samples,
        negative_tests=negative_tests,
        uncovered_samples=int(design.uncovered_columns.size),
    )


def reduce_problem(design: DesignMatrix, loads: np.ndarray, sn: SureNegatives) -> ReducedProblem:
    """Delete the sure-negative samples and the negative tests.

    Returns:
        ReducedProblem with m_r = m - |Y_0| and n_r = n - |X_0|
    """
    loads = np.asarray(loads, dtype=float)
    test_map = np.setdiff1d(np.arange(design.rows), sn.negative_tests, assume_unique=True)
    sample_map = np.setdiff1d(np.arange(design.cols), sn.negative_samples, assume_unique=True)
    matrix = design.bits[np.ix_(test_map, sample_map)]
    logger.debug(
        "event=problem_reduced m=%d n=%d m_r=%d n_r=%d",
        design.rows, design.cols, test_map.size, sample_map.size,
    )
    return ReducedProblem(
        matrix=matrix,
        loads=loads[test_map],
        sample_map=sample_map,
        test_map=test_map,
    )
