"""Bit-exact encoding of identification words.

Layout (all multi-byte integers big-endian)::

    version      1 byte   always 1
    scheme_tag   1 byte   0x01 code-based, 0x02 PRNG-based
    field_m      1 byte   1..16

    code-based header:  k (2 bytes) | n (4 bytes) | ell (1 byte)
    code-based payload: ell x (index: 32 bits, tag: m bits)

    PRNG header:        k (2 bytes) | ell (1 byte) | mu (2 bytes) | generator id (1 byte)
    PRNG payload:       mu seed symbols (m bits each) then ell tags (m bits each)

The payload is packed contiguously and zero-padded to a byte boundary at
the end only.  An index occupies 32 bits on the wire although it carries
only log2(n) bits of information; :func:`information_bits` reports the
latter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .bits import BitReader, BitWriter
from .gf import MAX_M, FieldSpec, FieldVector
from .identify_code import CodeIdentWord, CodeSpec, verify
from .identify_prng import GENERATOR_IDS, PrngIdentWord, PrngScheme, prng_verify
from .verdict import Reason, Verdict

VERSION = 1
SCHEME_CODE = 0x01
SCHEME_PRNG = 0x02
INDEX_BITS = 32
_SCHEME_NAMES = {SCHEME_CODE: "code", SCHEME_PRNG: "prng"}
_GENERATOR_NAMES = {v: k for k, v in GENERATOR_IDS.items()}


class WireError(ValueError):
    """Malformed encoded word; ``reason`` says which check failed."""

    def __init__(self, reason: Reason, detail: str = ""):
        super().__init__(f"{reason.name}: {detail}" if detail else reason.name)
        self.reason = reason
        self.detail = detail


@dataclass(frozen=True)
class WireWord:
    """Decoded header plus payload symbols as raw ints."""

    scheme: str
    m: int
    k: int
    ell: int
    tags: tuple[int, ...]
    n: int = 0
    indices: tuple[int, ...] = ()
    mu: int = 0
    generator: str = ""
    seed: tuple[int, ...] = ()
    version: int = VERSION

    @classmethod
    def from_code(cls, spec: CodeSpec, w: CodeIdentWord) -> WireWord:
        return cls("code", spec.field.m, spec.k, len(w.indices), w.tags.values, n=spec.n, indices=w.indices)

    @classmethod
    def from_prng(cls, scheme: PrngScheme, w: PrngIdentWord) -> WireWord:
        return cls(
            "prng",
            scheme.field.m,
            scheme.k,
            scheme.ell,
            w.tags.values,
            mu=scheme.mu,
            generator=scheme.generator,
            seed=w.seed.values,
        )

    def to_code_word(self, field: FieldSpec) -> CodeIdentWord:
        return CodeIdentWord(self.indices, FieldVector(field, self.tags))

    def to_prng_word(self, field: FieldSpec) -> PrngIdentWord:
        return PrngIdentWord(FieldVector(field, self.seed), FieldVector(field, self.tags))

    @property
    def payload_bits(self) -> int:
        if self.scheme == "code":
            return self.ell * (INDEX_BITS + self.m)
        return (self.mu + self.ell) * self.m

    @property
    def header_bytes(self) -> int:
        return 3 + (7 if self.scheme == "code" else 6)


def information_bits(w: WireWord) -> float:
    """Information content of the payload: ell (log2 n + m) or (mu + ell) m."""
    if w.scheme == "code":
        return w.ell * (math.log2(w.n) + w.m)
    return (w.mu + w.ell) * w.m


def encode_word(w: WireWord) -> bytes:
    if w.version != VERSION:
        raise ValueError(f"unsupported version {w.version}")
    if not 1 <= w.m <= MAX_M:
        raise ValueError(f"m={w.m} out of range")
    if not 1 <= w.k <= 0xFFFF or not 1 <= w.ell <= 0xFF:
        raise ValueError("k must fit in 16 bits and ell in 8 bits, both >= 1")
    if len(w.tags) != w.ell:
        raise ValueError(f"{len(w.tags)} tags for ell={w.ell}")
    bw = BitWriter()
    if w.scheme == "code":
        if not 1 <= w.n <= 2**32:
            raise ValueError(f"n={w.n} does not fit the 4-byte field")
        if len(w.indices) != w.ell:
            raise ValueError(f"{len(w.indices)} indices for ell={w.ell}")
        header = bytes([VERSION, SCHEME_CODE, w.m]) + w.k.to_bytes(2, "big")
        # n = 2^32 is written as 0 (mod 2^32)
        header += (w.n % 2**32).to_bytes(4, "big") + bytes([w.ell])
        for i, t in zip(w.indices, w.tags):
            if not 0 <= i < w.n:
                raise ValueError(f"index {i} out of range for n={w.n}")
            bw.write(i, INDEX_BITS)
            bw.write(t, w.m)
    elif w.scheme == "prng":
        if not 1 <= w.mu <= 0xFFFF or len(w.seed) != w.mu:
            raise ValueError("seed length must equal mu (1..65535)")
        if w.generator not in GENERATOR_IDS:
            raise ValueError(f"unknown generator {w.generator!r}")
        header = bytes([VERSION, SCHEME_PRNG, w.m]) + w.k.to_bytes(2, "big") + bytes([w.ell])
        header += w.mu.to_bytes(2, "big") + bytes([GENERATOR_IDS[w.generator]])
        for s in w.seed:
            bw.write(s, w.m)
        for t in w.tags:
            bw.write(t, w.m)
    else:
        raise ValueError(f"unknown scheme {w.scheme!r}")
    return header + bw.getvalue()


def _need(data: bytes, n: int, what: str) -> None:
    if len(data) < n:
        raise WireError(Reason.TRUNCATED, f"{what}: need {n} bytes, have {len(data)}")


def decode_word(data: bytes) -> WireWord:
    """Parse an encoded word; raises :class:`WireError` on any malformation."""
    data = bytes(data)
    _need(data, 1, "version")
    if data[0] != VERSION:
        raise WireError(Reason.BAD_VERSION, f"version {data[0]}")
    _need(data, 3, "fixed header")
    tag, m = data[1], data[2]
    if tag not in _SCHEME_NAMES:
        raise WireError(Reason.UNKNOWN_SCHEME, f"scheme tag {tag:#04x}")
    if not 1 <= m <= MAX_M:
        raise WireError(Reason.BAD_PARAMS, f"field_m={m}")

    if tag == SCHEME_CODE:
        _need(data, 10, "code header")
        k = int.from_bytes(data[3:5], "big")
        n = int.from_bytes(data[5:9], "big") or 2**32
        ell = data[9]
        mu, gen = 0, ""
        body = data[10:]
        nbits = ell * (INDEX_BITS + m)
    else:
        _need(data, 9, "prng header")
        k = int.from_bytes(data[3:5], "big")
        ell = data[5]
        mu = int.from_bytes(data[6:8], "big")
        gid = data[8]
        if gid not in _GENERATOR_NAMES:
            raise WireError(Reason.UNKNOWN_GENERATOR, f"generator id {gid:#04x}")
        gen = _GENERATOR_NAMES[gid]
        n = 0
        body = data[9:]
        nbits = (mu + ell) * m
        if mu < 1:
            raise WireError(Reason.BAD_PARAMS, "mu=0")
    if k < 1 or ell < 1:
        raise WireError(Reason.BAD_PARAMS, f"k={k}, ell={ell}")

    nbytes = (nbits + 7) // 8
    if len(body) < nbytes:
        raise WireError(Reason.TRUNCATED, f"payload: need {nbytes} bytes, have {len(body)}")
    if len(body) > nbytes:
        raise WireError(Reason.LENGTH_MISMATCH, f"payload: {len(body) - nbytes} trailing bytes")
    r = BitReader(body)
    if tag == SCHEME_CODE:
        indices, tags = [], []
        for _ in range(ell):
            i = r.read(INDEX_BITS)
            if i >= n:
                raise WireError(Reason.INDEX_RANGE, f"index {i} >= n={n}")
            indices.append(i)
            tags.append(r.read(m))
        seed = ()
    else:
        seed = tuple(r.read(m) for _ in range(mu))
        tags = [r.read(m) for _ in range(ell)]
        indices = ()
    if r.rest():
        raise WireError(Reason.NONZERO_PAD, "padding bits are not zero")
    return WireWord(
        _SCHEME_NAMES[tag], m, k, ell, tuple(tags), n=n, indices=tuple(indices), mu=mu, generator=gen, seed=seed
    )


def check_header(scheme: CodeSpec | PrngScheme, w: WireWord, ell: int | None = None) -> Verdict | None:
    """Reject words whose header disagrees with the local configuration."""
    f = scheme.field
    if isinstance(scheme, CodeSpec):
        expect = ("code", f.m, scheme.k, scheme.n)
        got = (w.scheme, w.m, w.k, w.n)
        if got != expect or (ell is not None and w.ell != ell):
            return Verdict(False, Reason.PARAM_MISMATCH, f"header {got}/ell={w.ell}, expected {expect}/ell={ell}")
    else:
        expect = ("prng", f.m, scheme.k, scheme.ell, scheme.mu, scheme.generator)
        got = (w.scheme, w.m, w.k, w.ell, w.mu, w.generator)
        if got != expect:
            return Verdict(False, Reason.PARAM_MISMATCH, f"header {got}, expected {expect}")
    return None


def verify_encoded(scheme: CodeSpec | PrngScheme, u_expected: FieldVector, data: bytes, ell: int | None = None) -> Verdict:
    """Decode ``data`` and verify it against ``u_expected``; never raises on bad input."""
    try:
        w = decode_word(data)
    except WireError as e:
        return Verdict(False, e.reason, e.detail)
    bad = check_header(scheme, w, ell)
    if bad is not None:
        return bad
    if isinstance(scheme, CodeSpec):
        return verify(scheme, u_expected, w.to_code_word(scheme.field))
    return prng_verify(scheme, u_expected, w.to_prng_word(scheme.field))


def encode_code_word(spec: CodeSpec, w: CodeIdentWord) -> bytes:
    return encode_word(WireWord.from_code(spec, w))


def encode_prng_word(scheme: PrngScheme, w: PrngIdentWord) -> bytes:
    return encode_word(WireWord.from_prng(scheme, w))
