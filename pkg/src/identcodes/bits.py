"""Contiguous big-endian bit packing of fixed-width symbols."""
from __future__ import annotations

from typing import Iterable, Sequence


class BitWriter:
    def __init__(self):
        self._acc = 0
        self.nbits = 0

    def write(self, value: int, width: int) -> None:
        if value < 0 or value >> width:
            raise ValueError(f"{value} does not fit in {width} bits")
        self._acc = (self._acc << width) | value
        self.nbits += width

    def getvalue(self) -> bytes:
        """Packed bytes, zero-padded at the end to a byte boundary."""
        pad = -self.nbits % 8
        nbytes = (self.nbits + pad) // 8
        return (self._acc << pad).to_bytes(nbytes, "big")


class BitReader:
    """Reads fixed-width fields from a byte string; raises EOFError on overrun."""

    def __init__(self, data: bytes):
        self._val = int.from_bytes(data, "big")
        self.nbits = 8 * len(data)
        self.pos = 0

    def read(self, width: int) -> int:
        if self.pos + width > self.nbits:
            raise EOFError(f"need {width} bits at offset {self.pos}, have {self.nbits - self.pos}")
        self.pos += width
        return (self._val >> (self.nbits - self.pos)) & ((1 << width) - 1)

    def remaining(self) -> int:
        return self.nbits - self.pos

    def rest(self) -> int:
        """Value of all unread bits."""
        return self._val & ((1 << self.remaining()) - 1)


def pack_symbols(values: Iterable[int], m: int) -> bytes:
    acc = 0
    nbits = 0
    limit = 1 << m
    for v in values:
        if not 0 <= v < limit:
            raise ValueError(f"{v} does not fit in {m} bits")
        acc = (acc << m) | v
        nbits += m
    pad = -nbits % 8
    return (acc << pad).to_bytes((nbits + pad) // 8, "big")


def unpack_symbols(data: bytes, m: int, count: int) -> tuple[int, ...]:
    """Inverse of :func:`pack_symbols`; requires exact length and zero padding."""
    need = (count * m + 7) // 8
    if len(data) != need:
        raise ValueError(f"expected {need} bytes for {count} symbols of {m} bits, got {len(data)}")
    r = BitReader(data)
    out = tuple(r.read(m) for _ in range(count))
    if r.rest():
        raise ValueError("nonzero padding bits")
    return out


def split_symbols(data: bytes, m: int) -> list[int]:
    """All whole m-bit chunks of ``data``, most significant first."""
    total = 8 * len(data)
    count = total // m
    return split_symbols_int(int.from_bytes(data, "big") >> (total - count * m), m, count)


def random_symbols(rng, m: int, count: int) -> list[int]:
    """``count`` independent uniform m-bit symbols from one ``getrandbits`` call."""
    if count == 0:
        return []
    return split_symbols_int(rng.getrandbits(m * count), m, count)


def split_symbols_int(val: int, m: int, count: int) -> list[int]:
    mask = (1 << m) - 1
    return [(val >> ((count - 1 - j) * m)) & mask for j in range(count)]


def symbols_to_hex(values: Sequence[int], m: int) -> str:
    return pack_symbols(values, m).hex()


def symbols_from_hex(text: str, m: int, count: int) -> tuple[int, ...]:
    return unpack_symbols(bytes.fromhex(text), m, count)
