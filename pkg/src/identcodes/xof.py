"""Keyed deterministic expansion into uniform field symbols.

SHAKE-256 is used as the extendable-output function.  Inputs are framed as
``label || len(part) || part || ...`` so distinct argument tuples never
collide.
"""
from __future__ import annotations

import hashlib
import random

from .bits import split_symbols


def frame(label: bytes, *parts: bytes) -> bytes:
    out = [len(label).to_bytes(2, "big"), label]
    for p in parts:
        out.append(len(p).to_bytes(4, "big"))
        out.append(p)
    return b"".join(out)


def uniform_symbols(material: bytes, count: int, m: int, q: int | None = None) -> list[int]:
    """``count`` symbols uniform on ``[0, q)`` extracted from SHAKE-256(material).

    Chunks of ``m`` bits that land outside ``[0, q)`` are rejected.  For
    ``q == 2**m`` nothing is ever rejected; the path exists so the same
    extractor serves non-power-of-two alphabets.
    """
    if q is None:
        q = 1 << m
    nbytes = (count * m + 7) // 8
    while True:
        chunks = split_symbols(hashlib.shake_256(material).digest(nbytes), m)
        out = [c for c in chunks if c < q]
        if len(out) >= count:
            return out[:count]
        nbytes *= 2


class StreamRandom(random.Random):
    """``random.Random`` driven by SHAKE-256 in counter mode.

    Seeding is a hash, so constructing one per trial is cheap, and the
    output is identical on every platform.  ``randrange`` and friends go
    through :meth:`getrandbits` and inherit its rejection sampling.
    """

    _BLOCK = 136

    def __init__(self, seed: bytes):
        super().__init__(seed)

    def seed(self, a=None, version=2):
        if not isinstance(a, (bytes, bytearray)):
            raise TypeError("StreamRandom needs a bytes seed")
        self._key = bytes(a)
        self._counter = 0
        self._buf = 0
        self._nbits = 0

    def _refill(self, need: int) -> None:
        while self._nbits < need:
            block = hashlib.shake_256(self._key + self._counter.to_bytes(8, "big")).digest(self._BLOCK)
            self._counter += 1
            self._buf = (self._buf << (8 * self._BLOCK)) | int.from_bytes(block, "big")
            self._nbits += 8 * self._BLOCK

    def getrandbits(self, k: int) -> int:
        if k < 0:
            raise ValueError("number of bits must be non-negative")
        if k == 0:
            return 0
        if self._nbits < k:
            self._refill(k)
        self._nbits -= k
        out = self._buf >> self._nbits
        self._buf &= (1 << self._nbits) - 1
        return out

    def random(self) -> float:
        return self.getrandbits(53) * 2.0**-53

    def getstate(self):
        return (self._key, self._counter, self._buf, self._nbits)

    def setstate(self, state):
        self._key, self._counter, self._buf, self._nbits = state


def derive_rng(master: int | bytes, *path: int | str) -> StreamRandom:
    """Per-task random stream from a master seed and a derivation path.

    The derivation is a pure function of its arguments, so serial and
    parallel runs reproduce the same streams.
    """
    if isinstance(master, int):
        master = master.to_bytes((master.bit_length() + 7) // 8 or 1, "big")
    parts = [str(p).encode() for p in path]
    return StreamRandom(hashlib.blake2b(frame(b"identcodes/rng/v1", master, *parts), digest_size=32).digest())
