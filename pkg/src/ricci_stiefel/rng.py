"""SplitMix64, the package's only source of randomness.

Version 1 of the stream contract:

* state update ``s += 0x9E3779B97F4A7C15 (mod 2**64)``;
* output ``z = s; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9; z = (z ^ z>>27) *
  0x94D049BB133111EB; z ^ z>>31`` (all mod 2**64);
* ``uniform()`` is ``(next_u64() >> 11) * 2**-53``, in ``[0, 1)``;
* the stream for trial ``k`` under seed ``s`` is seeded with
  ``mix(s + (k + 1) * 0x9E3779B97F4A7C15)``, so batches do not depend on
  evaluation order or worker count.

The algorithm is fixed here rather than delegated to a library generator so
that seeds reproduce bit-for-bit across platforms and library versions.
"""
from __future__ import annotations

import math

STREAM_VERSION = 1

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Splittable 64-bit generator.

    Parameters
    ----------
    seed : int
        Any integer; reduced mod 2**64.
    """

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        return mix64(self.state)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)
        return lo + (hi - lo) * u

    def log_uniform(self, lo: float, hi: float) -> float:
        return math.exp(self.uniform(math.log(lo), math.log(hi)))

    def below(self, k: int) -> int:
        """Uniform integer in ``[0, k)`` (rejection, no modulo bias)."""
        if k <= 0:
            raise ValueError("k must be positive")
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % k

    @classmethod
    def stream(cls, seed: int, index: int) -> "SplitMix64":
        """Independent generator for trial ``index`` under ``seed``."""
        return cls(mix64(seed + (index + 1) * _GAMMA))
