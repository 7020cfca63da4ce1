"""Counter-based splittable random streams.

Every sampler in the package draws from a Philox generator keyed by
``(seed, *path)``, so replicates and per-block column sampling are
reproducible independently of execution order or thread count.
"""

import numpy as np

# stream ids for the top-level split of a simulation seed
LATENT_STREAM = 0
FIELD_STREAM = 1
NOISE_STREAM = 2
SPLIT_STREAM = 3
SUBSAMPLE_STREAM = 4


def substream(seed: int, *path: int) -> np.random.Generator:
    """Generator for the stream addressed by ``(seed, *path)``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(x) for x in path))
    return np.random.Generator(np.random.Philox(ss))
