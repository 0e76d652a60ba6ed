"""Seedable deterministic random source.

SHA-256 in counter mode, so identical seeds reproduce identical byte streams
on every platform and Python version.  All protocol randomness is drawn from
an instance injected by the caller; the package never touches ambient
entropy.
"""

from __future__ import annotations

import hashlib


class DeterministicRandom:
    """Deterministic byte stream plus rejection-sampled group scalars."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError("seed must be non-negative")
        width = max(8, (seed.bit_length() + 7) // 8)
        self._key = seed.to_bytes(width, "big")
        self._counter = 0

    def random_bytes(self, n: int) -> bytes:
        out = bytearray()
        while len(out) < n:
            block = hashlib.sha256(self._key + self._counter.to_bytes(8, "big"))
            out.extend(block.digest())
            self._counter += 1
        return bytes(out[:n])

    def scalar(self, q: int) -> int:
        """Uniform scalar in [1, q-1] by rejection sampling."""
        if q < 3:
            raise ValueError("group order too small to sample from")
        bits = q.bit_length()
        nbytes = (bits + 7) // 8
        mask = (1 << bits) - 1
        while True:
            candidate = int.from_bytes(self.random_bytes(nbytes), "big") & mask
            if 1 <= candidate < q:
                return candidate
