"""Counter-based random streams derived from a single integer seed.

Each consumer asks for its own stream by label, so adding a new consumer never
perturbs the numbers another one sees.
"""

import hashlib

import numpy as np


def generator(seed, *labels):
    h = hashlib.sha256(repr((int(seed),) + tuple(str(s) for s in labels)).encode()).digest()
    key = int.from_bytes(h[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))
