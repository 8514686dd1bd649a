"""Seeded, platform-independent random streams.

Every random decision in gtcs goes through `DesignRNG`, which draws raw
64-bit words from numpy's PCG64 bit generator. Only the raw word stream is
used (never numpy's distribution methods), so a seed maps to the same
designs and instances on every machine and numpy release.
"""

import hashlib
from typing import Protocol, Union

import numpy as np

MASK64 = (1 << 64) - 1


class SupportsBelow(Protocol):
    """Anything that can draw a uniform index from range(count)."""

    def below(self, count: int) -> int: ...


class DesignRNG:
    """Seeded 64-bit generator with rejection-free range reduction."""

    def __init__(self, seed: int):
        """Initialize the stream.

        Args:
            seed: Non-negative seed, reduced modulo 2**64
        """
        self.seed = int(seed) & MASK64
        self._bits = np.random.PCG64(self.seed)

    def next_u64(self) -> int:
        """Return the next raw 64-bit word."""
        return int(self._bits.random_raw())

    def below(self, count: int) -> int:
        """Return an index in [0, count) using multiply-shift reduction.

        Args:
            count: Size of the range, at least 1

        Returns:
            (next_u64 * count) >> 64
        """
        if count < 1:
            raise ValueError(f"count must be positive, got {count}")
        return (self.next_u64() * count) >> 64

    def unit(self) -> float:
        """Return a float in [0, 1) built from the top 53 bits of the next word."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, low: float, high: float) -> float:
        """Return a float in [low, high)."""
        return low + (high - low) * self.unit()

    def sample(self, population: int, k: int) -> np.ndarray:
        """Draw k distinct indices from range(population)."""
        return draw_subset(self, population, k)


def draw_subset(rng: SupportsBelow, population: int, k: int) -> np.ndarray:
    """Draw k distinct indices from range(population) by partial Fisher-Yates.

    Every k-subset is equally likely. Indices are returned in draw order.
    """
    if not 0 <= k <= population:
        raise ValueError(f"cannot draw {k} distinct items from {population}")
    pool = list(range(population))
    for i in range(k):
        j = i + rng.below(population - i)
        pool[i], pool[j] = pool[j], pool[i]
    return np.asarray(pool[:k], dtype=np.int64)


def _mix64(z: int) -> int:
    """SplitMix64 finalizer."""
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _component_word(component: Union[int, str]) -> int:
    if isinstance(component, str):
        digest = hashlib.blake2b(component.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "little")
    return int(component) & MASK64


def derive_seed(master_seed: int, *components: Union[int, str]) -> int:
    """Derive a child seed from a master seed and a path of components.

    Args:
        master_seed: Root seed of a run
        *components: Labels and indices, e.g. ("trial", alpha, d, design, trial)

    Returns:
        A 64-bit seed; any single trial can be re-run from it in isolation
    """
    h = _mix64(int(master_seed) & MASK64)
    for component in components:
        h = _mix64(h ^ _component_word(component))
    return h
