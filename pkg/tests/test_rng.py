import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from gtcs.utils.rng import MASK64, DesignRNG, derive_seed, draw_subset


def test_same_seed_same_stream():
    a, b = DesignRNG(42), DesignRNG(42)
    assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]


def test_different_seeds_differ():
    a, b = DesignRNG(1), DesignRNG(2)
    assert [a.next_u64() for _ in range(4)] != [b.next_u64() for _ in range(4)]


def test_seed_reduced_modulo_2_64():
    assert DesignRNG(2**64 + 3).seed == 3


@given(seed=st.integers(0, MASK64), count=st.integers(1, 10**6))
@settings(max_examples=200)
def test_below_in_range(seed, count):
    assert 0 <= DesignRNG(seed).below(count) < count


def test_below_one_is_zero():
    rng = DesignRNG(9)
    assert all(rng.below(1) == 0 for _ in range(20))


def test_below_rejects_empty_range():
    with pytest.raises(ValueError):
        DesignRNG(0).below(0)


def test_below_is_multiply_shift():
    raw = DesignRNG(123).next_u64()
    assert DesignRNG(123).below(1000) == (raw * 1000) >> 64


def test_unit_and_uniform_ranges():
    rng = DesignRNG(5)
    units = [rng.unit() for _ in range(1000)]
    assert min(units) >= 0.0 and max(units) < 1.0
    values = [rng.uniform(0.25, 0.5) for _ in range(1000)]
    assert min(values) >= 0.25 and max(values) < 0.5


@given(seed=st.integers(0, MASK64), population=st.integers(0, 60), data=st.data())
def test_draw_subset_distinct(seed, population, data):
    k = data.draw(st.integers(0, population))
    drawn = draw_subset(DesignRNG(seed), population, k)
    assert drawn.size == k
    assert len(set(drawn.tolist())) == k
    assert all(0 <= x < population for x in drawn)


def test_draw_subset_rejects_oversized():
    with pytest.raises(ValueError):
        draw_subset(DesignRNG(0), 3, 4)


def test_draw_subset_roughly_uniform():
    rng = DesignRNG(77)
    counts = np.zeros(5, dtype=int)
    for _ in range(5000):
        counts[draw_subset(rng, 5, 2)] += 1
    # each item is drawn with probability 2/5
    assert np.all(np.abs(counts / 5000 - 0.4) < 0.03)


def test_derive_seed_is_deterministic_and_64_bit():
    a = derive_seed(7, "trial", 10, 3, 0, 1)
    assert a == derive_seed(7, "trial", 10, 3, 0, 1)
    assert 0 <= a <= MASK64


@pytest.mark.parametrize("components", [
    ("trial", 10, 3, 0, 2),
    ("trial", 10, 3, 1, 1),
    ("trial", 10, 4, 0, 1),
    ("design", 10, 3, 0, 1),
])
def test_derive_seed_separates_paths(components):
    assert derive_seed(7, *components) != derive_seed(7, "trial", 10, 3, 0, 1)


def test_derive_seed_depends_on_master():
    assert derive_seed(1, "design", 5, 0) != derive_seed(2, "design", 5, 0)
