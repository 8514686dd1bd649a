import numpy as np
import pytest

from gtcs.models.schemas import SweepConfig
from gtcs.services.design import (
    DesignMatrix,
    argmin_set,
    calc_selected_rows,
    generate_rrd,
    infinity_sentinel,
    sum_columns,
    update_weight,
)
from gtcs.utils.rng import draw_subset


class ScriptedRNG:
    """Random source replaying a fixed list of raw indices, then zeros."""

    def __init__(self, script=()):
        self.script = list(script)
        self.calls = []

    def below(self, count: int) -> int:
        self.calls.append(count)
        value = self.script.pop(0) if self.script else 0
        return value % count


def compose_rrd(n, m, alpha, rng):
    """Row-by-row generation built directly from the subroutines."""
    sentinel = infinity_sentinel(m, n)
    bits = np.zeros((m, n), dtype=np.uint8)
    bits[0, draw_subset(rng, n, alpha)] = 1
    for row in range(1, m):
        prefix = bits[:row]
        q = []
        for _ in range(alpha):
            c = calc_selected_rows(prefix, q)
            w = update_weight(n, q, c, prefix, sentinel)
            s_set = argmin_set(w)
            z = sum_columns(n, prefix, s_set, sentinel)
            candidates = argmin_set(z)
            s = int(candidates[rng.below(candidates.size)])
            q.append(s)
            bits[row, s] = 1
    return bits


def random_design(rng: np.random.Generator, n: int, m: int, alpha: int) -> DesignMatrix:
    """Design with uniformly random weight-alpha rows (not an RRD)."""
    bits = np.zeros((m, n), dtype=np.uint8)
    for i in range(m):
        bits[i, rng.choice(n, size=alpha, replace=False)] = 1
    return DesignMatrix(bits=bits, alpha=alpha)


@pytest.fixture
def identity2():
    return DesignMatrix(bits=np.eye(2, dtype=np.uint8), alpha=1)


@pytest.fixture
def small_design():
    return generate_rrd(n=40, m=16, alpha=5, seed=11)


@pytest.fixture
def small_config():
    return SweepConfig(
        n=30,
        m=16,
        alpha_list=[3, 5],
        d_list=[1, 2],
        designs_per_config=2,
        trials_per_design=3,
        master_seed=5,
    )
