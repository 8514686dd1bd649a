from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from gtcs.core.errors import InvalidParameterError, RankDeficientError
from gtcs.services.cs import least_squares, omp


def random_binary(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    """Bernoulli(1/2) matrix without all-zero columns."""
    a = rng.integers(0, 2, size=(m, n))
    for j in np.flatnonzero(a.sum(axis=0) == 0):
        a[rng.integers(m), j] = 1
    return a.astype(float)


def exact_fit(a: np.ndarray, y: np.ndarray, columns) -> bool:
    coef, *_ = np.linalg.lstsq(a[:, list(columns)], y, rcond=None)
    return np.linalg.norm(a[:, list(columns)] @ coef - y) <= 1e-9 * (1.0 + np.linalg.norm(y))


def l0_minimizers(a: np.ndarray, y: np.ndarray, max_size: int = 3):
    """All smallest supports (size <= max_size) that reproduce y exactly."""
    if np.linalg.norm(y) == 0:
        return [()]
    for size in range(1, max_size + 1):
        fits = [s for s in combinations(range(a.shape[1]), size) if exact_fit(a, y, s)]
        if fits:
            return fits
    return []


# least_squares

def test_least_squares_single_column():
    c = np.array([[1.0], [1.0], [0.0]])
    assert least_squares(c, 0.7 * c[:, 0]) == pytest.approx([0.7])


def test_least_squares_orthogonal_columns_are_projections():
    a = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    y = np.array([1.0, 2.0, 3.0])
    assert least_squares(a, y) == pytest.approx([1.5, 3.0])


def test_least_squares_matches_normal_equations():
    rng = np.random.default_rng(6)
    for _ in range(50):
        a = rng.normal(size=(6, 3))
        y = rng.normal(size=6)
        expected = np.linalg.solve(a.T @ a, a.T @ y)
        coef = least_squares(a, y)
        assert coef == pytest.approx(expected, rel=1e-8, abs=1e-10)
        assert np.abs(a.T @ (y - a @ coef)).max() <= 1e-8 * np.linalg.norm(a)


def test_least_squares_empty_selection():
    assert least_squares(np.empty((3, 0)), np.ones(3)).size == 0


def test_least_squares_reports_dependent_column():
    a = np.array([[1.0, 1.0], [1.0, 1.0], [0.0, 0.0]])
    with pytest.raises(RankDeficientError) as exc:
        least_squares(a, np.ones(3))
    assert exc.value.column == 1


def test_least_squares_rejects_too_many_columns():
    with pytest.raises(RankDeficientError):
        least_squares(np.eye(2, 3), np.ones(2))


def test_least_squares_rejects_shape_mismatch():
    with pytest.raises(InvalidParameterError):
        least_squares(np.eye(3), np.ones(2))


# omp

def test_omp_zero_loads():
    solution = omp(np.eye(3), np.zeros(3))
    assert solution.support.size == 0
    assert solution.iterations == 0
    assert solution.residual_norm == 0.0
    assert solution.converged


def test_omp_single_column_fit():
    c = np.array([[1.0], [1.0], [0.0]])
    solution = omp(c, 0.7 * c[:, 0])
    assert solution.support.tolist() == [0]
    assert solution.coefficients == pytest.approx([0.7])
    assert solution.iterations == 1
    assert solution.converged


def test_omp_ties_go_to_lowest_index_and_normalization_changes_order():
    a = np.array([[1.0, 1.0], [1.0, 0.0], [1.0, 0.0], [1.0, 0.0]])
    y = a[:, 1].copy()

    raw = omp(a, y)
    assert raw.support.tolist() == [0, 1]
    assert raw.positives().tolist() == [1]

    normalized = omp(a, y, normalize=True)
    assert normalized.support.tolist() == [1]
    assert normalized.positives().tolist() == [1]


def test_omp_never_selects_zero_column():
    a = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 1.0]])
    y = 0.4 * a[:, 1] + 0.9 * a[:, 2]
    solution = omp(a, y)
    assert 0 not in solution.support.tolist()
    assert solution.positives().tolist() == [1, 2]


def test_omp_respects_max_iter():
    a = np.eye(4)
    solution = omp(a, np.array([1.0, 0.5, 0.25, 0.0]), max_iter=1)
    assert solution.iterations == 1
    assert solution.support.tolist() == [0]
    assert not solution.converged


@pytest.mark.parametrize("kwargs", [{"max_iter": 5}, {"max_iter": -1}, {"tol": -1.0}])
def test_omp_rejects_bad_parameters(kwargs):
    with pytest.raises(InvalidParameterError):
        omp(np.eye(4), np.ones(4), **kwargs)


def test_omp_rejects_shape_mismatch():
    with pytest.raises(InvalidParameterError):
        omp(np.eye(4), np.ones(3))


@given(seed=st.integers(0, 2**32), m=st.integers(3, 20), n=st.integers(3, 30), data=st.data())
@settings(max_examples=100, deadline=None)
def test_omp_iteration_invariants(seed, m, n, data):
    rng = np.random.default_rng(seed)
    a = random_binary(rng, m, n)
    d = data.draw(st.integers(0, min(m, n)))
    x = np.zeros(n)
    x[rng.choice(n, size=d, replace=False)] = rng.uniform(0.1, 1.0, size=d)
    y = a @ x

    solution = omp(a, y)
    support = solution.support.tolist()
    assert len(support) == len(set(support))
    assert solution.iterations == len(support) == solution.coefficients.size <= min(m, n)
    assert solution.residual_norm >= 0.0

    history = solution.residual_history
    assert all(later <= earlier + 1e-12 for earlier, later in zip(history, history[1:]))

    if support:
        residual = y - a[:, support] @ solution.coefficients
        assert np.abs(a[:, support].T @ residual).max() <= 1e-8 * (1.0 + np.linalg.norm(a) * np.linalg.norm(y))


def test_omp_against_exhaustive_l0_search():
    # greedy selection has no recovery guarantee on 0/1 matrices this small:
    # a wrong first pick ends in a larger support that still fits the loads
    rng = np.random.default_rng(12)
    unique = 0
    raw_misses = 0
    normalized_misses = 0
    for _ in range(200):
        a = random_binary(rng, 8, 12)
        x = np.zeros(12)
        x[rng.choice(12, size=2, replace=False)] = rng.uniform(0.1, 1.0, size=2)
        y = a @ x
        minimizers = l0_minimizers(a, y)
        if len(minimizers) != 1:
            continue
        unique += 1
        expected = sorted(minimizers[0])
        raw_misses += omp(a, y).positives().tolist() != expected
        normalized_misses += omp(a, y, normalize=True).positives().tolist() != expected
    assert unique >= 120
    assert raw_misses <= 0.25 * unique
    assert normalized_misses <= 0.15 * unique
    assert normalized_misses <= raw_misses


def test_omp_exact_recovery_regime():
    rng = np.random.default_rng(2020)
    n_r, d = 40, 2
    m_r = int(np.ceil(4 * d * np.log(n_r)))
    successes = 0
    trials = 500
    for _ in range(trials):
        a = random_binary(rng, m_r, n_r)
        support = np.sort(rng.choice(n_r, size=d, replace=False))
        x = np.zeros(n_r)
        x[support] = rng.uniform(0.01, 1.0, size=d)
        successes += omp(a, a @ x).positives().tolist() == support.tolist()
    assert successes >= 0.95 * trials
