"""Portable counter-based random streams.

Every random quantity comes from Philox4x64-10 (Salmon et al., 2011) with
key words ``k0 = seed`` and ``k1 = stream``. Blocks are generated for the
256-bit counter values 1, 2, 3, ... (numpy increments before generating) and
each block yields its four 64-bit words in order. A word x maps to the open
unit interval as ``((x >> 11) + 0.5) * 2**-53``.
Streams used by the simulator:

    stream 0   unit exponentials  -log(u)
    stream 1   jump times         T * u
    stream 2   atom selection     u * total_mass, searched in cumulative weights

Trajectory k of an ensemble gets ``seed = splitmix64(master_seed, k)``, the
k-th output of the SplitMix64 generator started at ``master_seed``.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

STREAM_ARRIVALS = 0
STREAM_TIMES = 1
STREAM_ATOMS = 2


def splitmix64(master_seed: int, index: int) -> int:
    """index-th output (0-based) of SplitMix64 seeded with master_seed."""
    z = (int(master_seed) + (int(index) + 1) * _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trajectory_seed(master_seed: int, index: int) -> int:
    return splitmix64(master_seed, index)


class Stream:
    """Sequential uniform draws from one Philox key."""

    def __init__(self, seed: int, stream: int = 0):
        seed = int(seed)
        if not 0 <= seed <= MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self.stream = int(stream)
        self._bitgen = np.random.Philox(key=seed | (self.stream << 64))

    def raw(self, size: int) -> np.ndarray:
        return self._bitgen.random_raw(size)

    def uniforms(self, size: int) -> np.ndarray:
        """Doubles in the open interval (0, 1)."""
        x = self.raw(size)
        return ((x >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53

    def exponentials(self, size: int) -> np.ndarray:
        return -np.log(self.uniforms(size))
