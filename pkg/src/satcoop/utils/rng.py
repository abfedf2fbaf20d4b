"""Keyed random streams.

Every stochastic draw in the simulator comes from a generator seeded by
``(master_seed, purpose, *keys)`` so that a draw depends only on what it is for,
never on evaluation order or on which worker process computes it.
"""

from enum import IntEnum

import numpy as np


class Purpose(IntEnum):
    STATE = 1
    FADING = 2
    ESTIMATION = 3
    SYMBOLS = 4
    MOMENTS = 5


def stream(master_seed: int, purpose: Purpose, *keys: int) -> np.random.Generator:
    return np.random.default_rng([int(master_seed), int(purpose), *(int(k) for k in keys)])


def complex_normal(rng: np.random.Generator, size=None) -> np.ndarray:
    """Unit-variance circularly-symmetric complex Gaussian samples."""
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)
