"""Seed derivation and counter-based generators.

Every random stream in the package comes from ``generator(seed)``, a Philox
counter-based generator keyed by a 64-bit integer. Per-trial streams are
derived with :func:`mix`, so results never depend on execution order.
"""

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(z):
    z = (z + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix(master_seed, index):
    """Derive the 64-bit seed of sub-stream ``index`` of ``master_seed``."""
    if index < 0:
        raise ValueError(f"stream index must be non-negative, got {index}")
    return _splitmix64(_splitmix64(int(master_seed) & MASK64) ^ (int(index) & MASK64))


def generator(seed):
    return np.random.Generator(np.random.Philox(key=int(seed) & MASK64))
