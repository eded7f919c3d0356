"""
Seeded random streams.

Every random draw goes through a counter-based Philox generator. Independent
streams (per restart, per index range) are spawned from one SeedSequence so
results never depend on execution order.
"""

import numpy as np


def make_generator(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """Create a Philox-backed generator from a seed or SeedSequence."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


def spawn_generators(seed: int | np.random.SeedSequence, count: int) -> list[np.random.Generator]:
    """
    Spawn ``count`` independent generators from one seed.

    Stream i is the same for a given (seed, i) regardless of ``count``.

    Args:
        seed: Root seed, or a SeedSequence spawned from a parent stream
        count: Number of streams

    Returns:
        List of generators, one per stream
    """
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    children = seed.spawn(count)
    return [make_generator(child) for child in children]
