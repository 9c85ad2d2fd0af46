"""Counter-based random streams derived statelessly from a master seed.

Word ``k`` of a stream with seed ``s`` is ``mix64(s + (k + 1) * GOLDEN)``,
the SplitMix64 output sequence, so any stream can be regenerated without
replaying its neighbours.  Per-simulation seeds come from
:func:`derive_seed`; each simulation then splits into a choices stream and a
tie-bit stream so the number of ties never shifts the cell draws.
"""

from __future__ import annotations

import numpy as np

from .strategies import TieBits

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

TAG_CHOICES = 0x63686F6963657321
TAG_TIES = 0x7469652D62697473


def mix64(x: int) -> int:
    """SplitMix64 finalizer on a Python int."""
    x &= MASK64
    x ^= x >> 30
    x = (x * _M1) & MASK64
    x ^= x >> 27
    x = (x * _M2) & MASK64
    x ^= x >> 31
    return x


def _mix64_array(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    x ^= x >> np.uint64(30)
    x *= np.uint64(_M1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_M2)
    x ^= x >> np.uint64(31)
    return x


def derive_seed(master_seed: int, *indices: int) -> int:
    h = mix64(master_seed + GOLDEN)
    for idx in indices:
        h = mix64(h ^ mix64((idx + 1) * GOLDEN))
    return h


class RngStream:
    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.counter = 0

    def words(self, count: int) -> np.ndarray:
        k = np.arange(self.counter + 1, self.counter + count + 1, dtype=np.uint64)
        self.counter += count
        with np.errstate(over="ignore"):
            return _mix64_array(np.uint64(self.seed) + k * np.uint64(GOLDEN))

    def cells(self, n: int, count: int) -> np.ndarray:
        """``count`` uniform draws from ``[0, n)`` by rejection on the top bits."""
        if n < 1:
            raise ValueError("n must be positive")
        if n == 1:
            return np.zeros(count, dtype=np.int64)
        width = (n - 1).bit_length()
        shift = np.uint64(64 - width)
        out = np.empty(count, dtype=np.int64)
        filled = 0
        while filled < count:
            need = count - filled
            batch = need + need // 2 + 16
            cand = (self.words(batch) >> shift).astype(np.int64)
            cand = cand[cand < n][:need]
            out[filled:filled + len(cand)] = cand
            filled += len(cand)
        return out

    def bits(self, count: int) -> np.ndarray:
        words = self.words(-(-count // 64))
        return np.unpackbits(words.astype("<u8").view(np.uint8))[:count]


def simulation_inputs(master_seed: int, iteration: int, simulation: int,
                      n: int, m: int) -> tuple[np.ndarray, np.ndarray, TieBits]:
    """Initial cells for ``m`` keys and a tie-bit stream for one simulation.

    At most one tie is broken per key, so ``m`` bits always suffice.
    """
    sub = derive_seed(master_seed, iteration, simulation)
    draws = RngStream(sub ^ TAG_CHOICES).cells(n, 2 * m)
    ties = TieBits(RngStream(sub ^ TAG_TIES).bits(max(m, 1)))
    return draws[0::2].copy(), draws[1::2].copy(), ties
