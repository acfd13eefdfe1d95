"""Deterministic counter-split randomness.

Every random draw in the library is derived from a (seed, counter) pair, so
identical inputs reproduce identical samples and independent counter ranges can
be handed to parallel workers without coordination.
"""
from __future__ import annotations

import numpy as np

__all__ = ["SeededSampler"]


class SeededSampler:
    """Stream source fully determined by a 64-bit seed and a 64-bit counter.

    Advancing the counter is the only mutation.  Streams at distinct counters
    are statistically independent (numpy SeedSequence with the counter as
    spawn key), so sample i can be generated without generating samples < i.
    """

    def __init__(self, seed: int, counter: int = 0):
        self.seed = int(seed)
        self.counter = int(counter)

    def __repr__(self):
        return f"SeededSampler(seed={self.seed}, counter={self.counter})"

    def rng_at(self, counter: int) -> np.random.Generator:
        """Generator for an absolute counter value; does not advance."""
        ss = np.random.SeedSequence(self.seed, spawn_key=(int(counter),))
        return np.random.default_rng(ss)

    def take(self, count: int = 1) -> int:
        """Reserve a block of `count` counters, returning the block start."""
        if count < 0:
            raise ValueError("count must be non-negative")
        start = self.counter
        self.counter += int(count)
        return start

    def next_rng(self) -> np.random.Generator:
        """Generator for the current counter; advances by one."""
        return self.rng_at(self.take())

    def fork(self) -> "SeededSampler":
        """Independent child sampler; consumes one counter of the parent."""
        child_seed = int(self.next_rng().integers(0, 2**63))
        return SeededSampler(child_seed, 0)

    def clone(self) -> "SeededSampler":
        """Copy with identical (seed, counter); replays the same streams."""
        return SeededSampler(self.seed, self.counter)
