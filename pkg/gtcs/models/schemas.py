import math
from typing import List, Dict, Any, Optional, Tuple
from datetime import datetime
from pydantic import BaseModel, Field, model_validator

from gtcs.core.config import settings


# Solver schemas
class SolverParams(BaseModel):
    """Schema for decoder settings."""
    epsilon: float = Field(settings.BINARIZE_EPSILON, ge=0.0, description="Binarization threshold for pool loads")
    tol: float = Field(settings.OMP_TOL, ge=0.0, description="Relative OMP residual tolerance")
    max_iter: Optional[int] = Field(None, ge=0, description="OMP iteration cap (None = min(m_r, n_r))")
    normalize: bool = Field(settings.NORMALIZE_COLUMNS, description="Use column-normalized OMP correlations")
    positive_threshold: float = Field(settings.POSITIVE_THRESHOLD, description="Coefficient above which a sample is positive")


class DecodeReport(BaseModel):
    """Schema for the outcome of one GTCS decode (0-based sample indices)."""
    recovered_support: List[int] = Field(..., description="Samples decoded as positive")
    coefficients: Dict[int, float] = Field(default_factory=dict, description="OMP coefficient per selected sample")
    reduced_dims: Tuple[int, int] = Field(..., description="(m_r, n_r) of the reduced problem")
    comp_eliminated: int = Field(..., description="Number of sure-negative samples |X_0|")
    uncovered_samples: int = Field(0, description="Samples that appear in no test")
    residual_norm: float = Field(0.0, description="Final OMP residual norm")
    cs_flagged_nonconvergence: bool = Field(False, description="OMP stopped above tolerance")
    consistency_ok: bool = Field(..., description="Recovered support reproduces the observed boolean results")


# Simulation schemas
class SweepConfig(BaseModel):
    """Schema for a Monte Carlo sweep over an alpha x d grid."""
    n: int = Field(..., ge=2, description="Number of samples")
    m: int = Field(..., ge=1, description="Number of tests")
    alpha_list: List[int] = Field(..., min_length=1, description="Pool sizes to evaluate")
    d_list: Optional[List[int]] = Field(None, description="Numbers of positives to evaluate")
    prevalence_list: Optional[List[float]] = Field(None, description="Positive rates as fractions, converted by d = round(p*n)")
    designs_per_config: int = Field(settings.DESIGNS_PER_CONFIG, ge=1, description="Random designs per cell")
    trials_per_design: int = Field(settings.TRIALS_PER_DESIGN, ge=1, description="Instances per design")
    master_seed: int = Field(settings.DEFAULT_MASTER_SEED, ge=0, description="Root seed of the run")
    load_floor: float = Field(settings.LOAD_FLOOR, gt=0.0, le=1.0, description="Smallest positive load")
    solver: SolverParams = Field(default_factory=SolverParams, description="Decoder settings")

    @model_validator(mode="after")
    def check_grid(self) -> "SweepConfig":
        if (self.d_list is None) == (self.prevalence_list is None):
            raise ValueError("exactly one of d_list and prevalence_list must be given")
        for alpha in self.alpha_list:
            if not 1 <= alpha < self.n:
                raise ValueError(f"alpha={alpha} outside 1 <= alpha < n={self.n}")
        for p in self.prevalence_list or []:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"prevalence {p} outside [0, 1]")
        for d in self.d_values:
            if not 0 <= d <= self.n:
                raise ValueError(f"d={d} outside [0, n={self.n}]")
        return self

    @property
    def d_values(self) -> List[int]:
        """Sorted distinct d values of the grid."""
        if self.d_list is not None:
            return sorted(set(self.d_list))
        return sorted({d_from_prevalence(self.n, p) for p in self.prevalence_list})

    @property
    def alpha_values(self) -> List[int]:
        return sorted(set(self.alpha_list))


def d_from_prevalence(n: int, p: float) -> int:
    """d = round(p * n), halves rounded up."""
    return int(math.floor(p * n + 0.5))


class DesignBreakdown(BaseModel):
    """Schema for the per-design share of a cell."""
    design_index: int = Field(..., description="Index of the design within the cell")
    design_seed: int = Field(..., description="Seed the design was generated from")
    trials: int = Field(..., description="Trials run on this design")
    successes: int = Field(..., description="Trials with exact support recovery")


class CellResult(BaseModel):
    """Schema for the aggregated outcome of one (alpha, d) cell."""
    alpha: int = Field(..., description="Pool size")
    d: int = Field(..., description="Number of positives")
    designs: int = Field(..., description="Designs evaluated")
    trials: int = Field(..., description="Total trials")
    successes: int = Field(..., description="Trials with exact support recovery")
    rate: float = Field(..., ge=0.0, le=1.0, description="successes / trials")
    nonconverged: int = Field(0, description="Trials where OMP stopped above tolerance")
    per_design: List[DesignBreakdown] = Field(default_factory=list, description="Per-design breakdown")


class SweepResult(BaseModel):
    """Schema for the result of a sweep."""
    config: SweepConfig = Field(..., description="Configuration that produced the result")
    cells: List[CellResult] = Field(..., description="Cells sorted by (alpha, d)")
    wall_time_seconds: float = Field(0.0, description="Elapsed time of the sweep")
    metadata: Dict[str, Any] = Field(default_factory=dict, description="Run metadata")

    def cell(self, alpha: int, d: int) -> Optional[CellResult]:
        for c in self.cells:
            if c.alpha == alpha and c.d == d:
                return c
        return None


class RunManifest(BaseModel):
    """Schema for the results file written by `sim run`."""
    version: str = Field(..., description="Results format version")
    tool_version: str = Field(..., description="gtcs version that wrote the file")
    config: SweepConfig = Field(..., description="Full configuration echo")
    seed: int = Field(..., description="Master seed")
    started_at: datetime = Field(..., description="Run start timestamp")
    finished_at: datetime = Field(..., description="Run end timestamp")
    wall_time_seconds: float = Field(..., description="Elapsed time of the sweep")
    metadata: Dict[str, Any] = Field(default_factory=dict, description="Run metadata")
    cells: List[CellResult] = Field(..., description="Per-cell result records")

    def to_result(self) -> SweepResult:
        return SweepResult(
            config=self.config,
            cells=self.cells,
            wall_time_seconds=self.wall_time_seconds,
            metadata=self.metadata,
        )
