"""Counter-based random streams keyed by a seed and a tuple of names."""

import zlib

import numpy as np


def stream(seed: int, *keys) -> np.random.Generator:
    """Independent Philox generator for (seed, keys); the same inputs give the same stream on any platform."""
    words = [int(seed) & 0xFFFFFFFF]
    words += [zlib.crc32(str(k).encode()) for k in keys]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(words)))
