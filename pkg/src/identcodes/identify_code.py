"""Identification over a keyed random linear code.

The generator matrix ``G`` (k rows, n columns) is never stored.  Column
``i`` is expanded on demand from ``(key, i)`` with SHAKE-256, so both ends
only share the key.  A sender picks random column indices and transmits
``(i, <u, g_i>)`` pairs; a receiver accepts iff every tag matches the one
computed from its own identifier.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import LengthMismatchError, ParameterError
from .gf import FieldSpec, FieldVector
from .verdict import Reason, Verdict
from .xof import frame, uniform_symbols

MAX_INDEX = 2**32 - 1
_COLUMN_LABEL = b"identcodes/code-column/v1"


@dataclass(frozen=True)
class CodeSpec:
    field: FieldSpec
    k: int
    n: int
    key: bytes

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if not 1 <= self.n <= MAX_INDEX + 1:
            raise ParameterError(f"n must be in 1..2^32, got {self.n}")
        if not isinstance(self.key, bytes):
            object.__setattr__(self, "key", bytes(self.key))

    @property
    def q(self) -> int:
        return self.field.q

    def message(self, values) -> FieldVector:
        """Build and validate a message vector of length k."""
        u = values if isinstance(values, FieldVector) else FieldVector(self.field, tuple(values))
        check_message(self, u)
        return u


@dataclass(frozen=True)
class CodeIdentWord:
    indices: tuple[int, ...]
    tags: FieldVector

    @property
    def ell(self) -> int:
        return len(self.indices)


def check_message(spec, u: FieldVector) -> None:
    if u.field != spec.field:
        raise ParameterError(f"message over {u.field!r}, scheme uses {spec.field!r}")
    if len(u) != spec.k:
        raise LengthMismatchError(f"message has {len(u)} symbols, expected k={spec.k}")


@lru_cache(maxsize=8192)
def _column(m: int, q: int, k: int, key: bytes, i: int) -> tuple[int, ...]:
    material = frame(_COLUMN_LABEL, bytes([m]), k.to_bytes(4, "big"), key, i.to_bytes(8, "big"))
    return tuple(uniform_symbols(material, k, m, q))


def derive_column(spec: CodeSpec, i: int) -> FieldVector:
    """Column ``g_i`` of the generator matrix, a pure function of ``(key, i)``."""
    return FieldVector(spec.field, column_values(spec, i))


def column_values(spec: CodeSpec, i: int) -> tuple[int, ...]:
    if not 0 <= i < spec.n:
        raise ParameterError(f"column index {i} out of range [0, {spec.n})")
    return _column(spec.field.m, spec.field.q, spec.k, spec.key, i)


def generator_matrix(spec: CodeSpec) -> list[tuple[int, ...]]:
    """All n columns; only sensible for small codes."""
    return [column_values(spec, i) for i in range(spec.n)]


def compute_tag(spec: CodeSpec, u: FieldVector, i: int):
    check_message(spec, u)
    return spec.field.element(spec.field.dot(u.values, column_values(spec, i)))


def send(spec: CodeSpec, u: FieldVector, ell: int = 1, rng: random.Random | None = None) -> CodeIdentWord:
    """Identification word of ``ell`` (index, tag) pairs for message ``u``.

    Indices are drawn with replacement; ``randrange`` rejection-samples so
    there is no modulo bias.
    """
    if ell < 1:
        raise ParameterError(f"ell must be >= 1, got {ell}")
    check_message(spec, u)
    rng = rng if rng is not None else random.SystemRandom()
    f = spec.field
    indices = tuple(rng.randrange(spec.n) for _ in range(ell))
    tags = tuple(f.dot(u.values, column_values(spec, i)) for i in indices)
    return CodeIdentWord(indices, FieldVector.trusted(f, tags))


def verify(spec: CodeSpec, u_expected: FieldVector, w: CodeIdentWord) -> Verdict:
    """Accept iff every received tag equals the expected message's tag."""
    check_message(spec, u_expected)
    if w.tags.field != spec.field:
        return Verdict(False, Reason.PARAM_MISMATCH, "tag field differs from scheme field")
    if len(w.indices) != len(w.tags) or not w.indices:
        return Verdict(False, Reason.LENGTH_MISMATCH, f"{len(w.indices)} indices vs {len(w.tags)} tags")
    for i in w.indices:
        if not 0 <= i < spec.n:
            return Verdict(False, Reason.INDEX_RANGE, f"index {i} >= n={spec.n}")
    f = spec.field
    ok = True
    for i, t in zip(w.indices, w.tags.values):
        # no early exit: every tag is always evaluated
        ok &= f.dot(u_expected.values, column_values(spec, i)) == t
    return Verdict.accept() if ok else Verdict(False, Reason.TAG_MISMATCH)


def ident_rate_code(field, k: int, n: int) -> float:
    """Identification rate (log k + log log q) / (log n + log q), base-2 logs."""
    q = field.q if isinstance(field, FieldSpec) else int(field)
    if q < 2:
        raise ParameterError(f"q must be >= 2, got {q}")
    if k < 2 or n < 2:
        raise ParameterError(f"need k >= 2 and n >= 2, got k={k}, n={n}")
    return (math.log2(k) + math.log2(math.log2(q))) / (math.log2(n) + math.log2(q))


def word_bits_code(field, n: int, ell: int = 1) -> float:
    """Information content of an ell-fold word: ell * (log2 n + log2 q)."""
    q = field.q if isinstance(field, FieldSpec) else int(field)
    return ell * (math.log2(n) + math.log2(q))
