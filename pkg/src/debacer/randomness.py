"""Counter-based random number streams.

Every stochastic component draws from a Philox generator keyed by a 64-bit
seed plus a tuple of small integers naming the stream. Philox is
counter-based, so the same (seed, stream) pair yields the same draws on
any platform, and distinct streams are statistically independent - which
lets CV folds, forest trees and search trials run in any order (or in
parallel) without changing results.
"""

import numpy as np

__all__ = ["stream"]


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the given seed and stream key."""
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))
