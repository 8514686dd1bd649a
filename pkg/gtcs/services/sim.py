"""Synthetic instances and seeded Monte Carlo sweeps of the GTCS pipeline.

Seeds are derived from the master seed so that any single design or trial
can be regenerated in isolation:

    design seed = derive_seed(master, "design", alpha, design_index)
    trial seed  = derive_seed(master, "trial", alpha, d, design_index, trial_index)

Designs are shared by all d values of one alpha, and one worker task covers
one (alpha, design_index) pair. Counts are summed per cell, so results do not
depend on the number of workers or on task completion order.
"""

import logging
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from gtcs import __version__
from gtcs.core.config import settings
from gtcs.core.errors import InvalidParameterError
from gtcs.models.schemas import (
    CellResult,
    DecodeReport,
    DesignBreakdown,
    SolverParams,
    SweepConfig,
    SweepResult,
)
from gtcs.services.design import DesignMatrix, generate_rrd
from gtcs.services.pipeline import gtcs_decode
from gtcs.utils.rng import DesignRNG, derive_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Instance:
    """Ground truth: d positive samples with loads in [load_floor, 1)."""

    n: int
    support: np.ndarray
    loads: np.ndarray

    @property
    def d(self) -> int:
        return int(self.support.size)

    def dense(self) -> np.ndarray:
        """The length-n load vector x̂."""
        x = np.zeros(self.n)
        x[self.support] = self.loads
        return x


@dataclass(frozen=True)
class TrialOutcome:
    """Verdict of one decode against its ground truth."""

    success: bool
    report: DecodeReport


def gen_instance(n: int, d: int, seed: int, load_floor: float = settings.LOAD_FLOOR) -> Instance:
    """Draw d positives uniformly without replacement.

    Loads are i.i.d. uniform on the half-open range [load_floor, 1).
    """
    if not 0 <= d <= n:
        raise InvalidParameterError(f"d must lie in [0, n={n}], got {d}")
    if not 0.0 < load_floor <= 1.0:
        raise InvalidParameterError(f"load_floor must lie in (0, 1], got {load_floor}")
    rng = DesignRNG(seed)
    drawn = rng.sample(n, d)
    loads = np.array([rng.uniform(load_floor, 1.0) for _ in range(d)])
    order = np.argsort(drawn)
    return Instance(n=n, support=drawn[order], loads=loads[order])


def real_measure(design: DesignMatrix, instance: Instance) -> np.ndarray:
    """Pool loads ŷ = M · x̂."""
    if instance.n != design.cols:
        raise InvalidParameterError(
            f"instance has n={instance.n} samples but the design has {design.cols} columns"
        )
    if instance.d == 0:
        return np.zeros(design.rows)
    return design.bits[:, instance.support].astype(float) @ instance.loads


def run_trial(
    design: DesignMatrix,
    instance: Instance,
    params: Optional[SolverParams] = None,
) -> TrialOutcome:
    """Decode one instance; success means exact support recovery."""
    report = gtcs_decode(design, real_measure(design, instance), params)
    success = report.recovered_support == instance.support.tolist()
    return TrialOutcome(success=success, report=report)


# (alpha, d, design_index, design_seed, trials, successes, nonconverged)
_DesignTally = Tuple[int, int, int, int, int, int, int]


def _evaluate_design(config: SweepConfig, alpha: int, design_index: int) -> List[_DesignTally]:
    design_seed = derive_seed(config.master_seed, "design", alpha, design_index)
    design = generate_rrd(config.n, config.m, alpha, design_seed)
    tallies = []
    for d in config.d_values:
        successes = 0
        nonconverged = 0
        for trial_index in range(config.trials_per_design):
            seed = derive_seed(config.master_seed, "trial", alpha, d, design_index, trial_index)
            instance = gen_instance(config.n, d, seed, config.load_floor)
            outcome = run_trial(design, instance, config.solver)
            successes += outcome.success
            nonconverged += outcome.report.cs_flagged_nonconvergence
        tallies.append(
            (alpha, d, design_index, design_seed, config.trials_per_design, successes, nonconverged)
        )
    return tallies


def _evaluate_task(args: Tuple[SweepConfig, int, int]) -> List[_DesignTally]:
    return _evaluate_design(*args)


def run_config(config: SweepConfig, workers: Optional[int] = None) -> SweepResult:
    """Run every (alpha, d) cell of a sweep.

    Args:
        config: Sweep configuration
        workers: Worker processes (defaults to settings.THREADS); 1 runs inline

    Returns:
        SweepResult whose counts are a pure function of config
    """
    workers = workers or settings.THREADS
    tasks = [
        (config, alpha, design_index)
        for alpha in config.alpha_values
        for design_index in range(config.designs_per_config)
    ]
    workers = max(1, min(workers, len(tasks)))
    logger.info(
        "event=sweep_start n=%d m=%d alphas=%s d_values=%s designs=%d trials=%d workers=%d",
        config.n, config.m, config.alpha_values, config.d_values,
        config.designs_per_config, config.trials_per_design, workers,
    )

    started = time.perf_counter()
    if workers == 1:
        batches = [_evaluate_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            batches = list(executor.map(_evaluate_task, tasks))

    grouped: Dict[Tuple[int, int], List[_DesignTally]] = defaultdict(list)
    for batch in batches:
        for tally in batch:
            grouped[(tally[0], tally[1])].append(tally)

    cells = []
    for (alpha, d), tallies in sorted(grouped.items()):
        tallies.sort(key=lambda t: t[2])
        trials = sum(t[4] for t in tallies)
        successes = sum(t[5] for t in tallies)
        cells.append(CellResult(
            alpha=alpha,
            d=d,
            designs=len(tallies),
            trials=trials,
            successes=successes,
            rate=successes / trials,
            nonconverged=sum(t[6] for t in tallies),
            per_design=[
                DesignBreakdown(design_index=t[2], design_seed=t[3], trials=t[4], successes=t[5])
                for t in tallies
            ],
        ))
    elapsed = time.perf_counter() - started
    logger.info("event=sweep_done cells=%d seconds=%.2f", len(cells), elapsed)

    return SweepResult(
        config=config,
        cells=cells,
        wall_time_seconds=elapsed,
        metadata={
            "tool_version": __version__,
            "load_floor": config.load_floor,
            "omp_normalize": config.solver.normalize,
            "omp_tol": config.solver.tol,
            "binarize_epsilon": config.solver.epsilon,
            "positive_threshold": config.solver.positive_threshold,
        },
    )


def best_alpha(results: SweepResult, threshold: float = settings.SUCCESS_THRESHOLD) -> Dict[int, Optional[int]]:
    """Smallest alpha per d whose success rate reaches threshold (None if none does)."""
    best: Dict[int, Optional[int]] = {}
    for cell in sorted(results.cells, key=lambda c: (c.d, c.alpha)):
        best.setdefault(cell.d, None)
        if best[cell.d] is None and cell.rate >= threshold:
            best[cell.d] = cell.alpha
    return best


def missing_cells(results: SweepResult) -> List[Tuple[int, int]]:
    """(alpha, d) cells of the configured grid that the results do not cover."""
    present = {(c.alpha, c.d) for c in results.cells}
    return [
        (alpha, d)
        for alpha in results.config.alpha_values
        for d in results.config.d_values
        if (alpha, d) not in present
    ]


@dataclass(frozen=True)
class DesignSelection:
    """Outcome of scoring several candidate designs on shared synthetic data."""

    design: DesignMatrix
    best_index: int
    rates: List[float]


def select_best_design(
    n: int,
    m: int,
    alpha: int,
    d_list: Sequence[int],
    candidates: int,
    trials: int,
    master_seed: int,
    params: Optional[SolverParams] = None,
    load_floor: float = settings.LOAD_FLOOR,
) -> DesignSelection:
    """Generate candidate designs and keep the one that decodes best.

    Every candidate is scored on the same instances (trials per d value), so
    the winner can be frozen and used as a fixed design. Ties go to the
    lowest candidate index.
    """
    if candidates < 1 or trials < 1 or not d_list:
        raise InvalidParameterError("candidates, trials and d_list must be non-empty")
    instances = [
        gen_instance(n, d, derive_seed(master_seed, "selection-trial", d, t), load_floor)
        for d in sorted(set(d_list))
        for t in range(trials)
    ]
    best: Optional[DesignMatrix] = None
    best_index = 0
    rates: List[float] = []
    for index in range(candidates):
        design = generate_rrd(n, m, alpha, derive_seed(master_seed, "candidate", alpha, index))
        wins = sum(run_trial(design, instance, params).success for instance in instances)
        rate = wins / len(instances)
        rates.append(rate)
        if best is None or rate > rates[best_index]:
            best, best_index = design, index
        logger.debug("event=candidate_scored index=%d rate=%.4f", index, rate)
    logger.info("event=design_selected best_index=%d rate=%.4f", best_index, rates[best_index])
    return DesignSelection(design=best, best_index=best_index, rates=rates)


def max_supported_d(
    n: int,
    m: int,
    alpha: int,
    threshold: float,
    designs: int,
    trials: int,
    master_seed: int,
    params: Optional[SolverParams] = None,
    load_floor: float = settings.LOAD_FLOOR,
    d_max: Optional[int] = None,
    workers: Optional[int] = None,
) -> Tuple[int, Dict[int, float]]:
    """Raise d from 1 while the success rate stays at or above threshold.

    Returns:
        (largest d that met the threshold or 0, success rate per tested d)
    """
    d_max = n if d_max is None else min(d_max, n)
    rates: Dict[int, float] = {}
    supported = 0
    for d in range(1, d_max + 1):
        config = SweepConfig(
            n=n,
            m=m,
            alpha_list=[alpha],
            d_list=[d],
            designs_per_config=designs,
            trials_per_design=trials,
            master_seed=master_seed,
            load_floor=load_floor,
            solver=params or SolverParams(),
        )
        rate = run_config(config, workers=workers).cells[0].rate
        rates[d] = rate
        if rate < threshold:
            break
        supported = d
    return supported, rates
