"""Counter-based keyed random streams.

Every random draw in the package comes from a Philox generator whose key is
(seed, purpose) and whose high counter words hold the trial path, e.g.
(m, trial).  Draw order across trials therefore never matters, which keeps
parallel and sequential execution bit-identical.
"""
from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# purpose tags; never renumber, that would change every golden value
WIDTH = 1
PROJECTION = 2
SAMPLE = 3
EMBED = 4
SUBSETS = 5
LINEAR_MAP = 6


def stream(seed: int, purpose: int, *path: int) -> np.random.Generator:
    if len(path) > 2:
        raise ValueError("stream path holds at most two integers")
    hi = [int(p) & _MASK64 for p in path] + [0] * (2 - len(path))
    counter = [0, 0, hi[0], hi[1]]
    key = [int(seed) & _MASK64, int(purpose) & _MASK64]
    return np.random.Generator(np.random.Philox(key=key, counter=counter))
