"""Single-round GTCS decode: binarize, COMP reduction, OMP, map back."""

import logging
from typing import Iterable, Optional

import numpy as np

from gtcs.core.errors import InvalidParameterError
from gtcs.models.schemas import DecodeReport, SolverParams
from gtcs.services.cs import omp
from gtcs.services.design import DesignMatrix
from gtcs.services.gt import (
    BinaryResults,
    binarize,
    boolean_measure,
    comp_sure_negatives,
    reduce_problem,
)

logger = logging.getLogger(__name__)


def consistency_check(design: DesignMatrix, support: Iterable[int], results: BinaryResults) -> bool:
    """True iff re-measuring the support reproduces the observed results."""
    return bool(np.array_equal(boolean_measure(design, support), np.asarray(results, dtype=np.uint8)))


def gtcs_decode(
    design: DesignMatrix,
    loads: np.ndarray,
    params: Optional[SolverParams] = None,
) -> DecodeReport:
    """Identify the positive samples from pooled loads.

    Args:
        design: The pooling design used for the tests
        loads: Length-m pool loads
        params: Solver settings (defaults from configuration)

    Returns:
        DecodeReport with 0-based recovered samples
    """
    params = params or SolverParams()
    loads = np.asarray(loads, dtype=float)
    if loads.shape != (design.rows,):
        raise InvalidParameterError(f"loads length {loads.shape} does not match m={design.rows}")

    results = binarize(loads, params.epsilon)
    sn = comp_sure_negatives(design, results)
    reduced = reduce_problem(design, loads, sn)

    recovered = np.empty(0, dtype=np.int64)
    coefficients = {}
    residual_norm = 0.0
    nonconverged = False
    if not reduced.is_empty:
        max_iter = params.max_iter
        if max_iter is not None:
            max_iter = min(max_iter, reduced.m_r, reduced.n_r)
        solution = omp(
            reduced.matrix,
            reduced.loads,
            max_iter=max_iter,
            tol=params.tol,
            normalize=params.normalize,
        )
        recovered = reduced.sample_map[solution.positives(params.positive_threshold)]
        coefficients = {
            int(reduced.sample_map[j]): float(c)
            for j, c in zip(solution.support, solution.coefficients)
        }
        residual_norm = solution.residual_norm
        nonconverged = not solution.converged

    support = sorted(int(j) for j in recovered)
    return DecodeReport(
        recovered_support=support,
        coefficients=coefficients,
        reduced_dims=(reduced.m_r, reduced.n_r),
        comp_eliminated=int(sn.negative_samples.size),
        uncovered_samples=sn.uncovered_samples,
        residual_norm=residual_norm,
        cs_flagged_nonconvergence=nonconverged,
        consistency_ok=consistency_check(design, support, results),
    )
