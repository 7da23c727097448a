"""Identification with a seeded pseudo-random generator.

The sender draws a random seed ``sigma`` (mu symbols), expands it into
``ell * k`` symbols that fill the columns of ``G(sigma)`` one after another,
and transmits ``(sigma, u G(sigma))``.  The receiver repeats the expansion
from the received seed and compares tags.

Two generators are available:

``nonlinear-default``
    SHAKE-256 keyed by the packed seed.  Stands in for an ideal generator.
``lfsr``
    A linear feedback shift register.  Provided to demonstrate that a linear
    generator breaks the scheme whenever ``mu < k`` (see :func:`lfsr_attack`).
"""
from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass

from .bits import pack_symbols, random_symbols
from .errors import AttackNotApplicableError, LengthMismatchError, ParameterError
from .gf import FieldSpec, FieldVector
from .identify_code import check_message
from .verdict import Reason, Verdict
from .xof import frame, uniform_symbols

NONLINEAR = "nonlinear-default"
LFSR = "lfsr"
GENERATOR_IDS = {NONLINEAR: 0x01, LFSR: 0x02}
_EXPAND_LABEL = b"identcodes/prng-expand/v1"


class LinearGeneratorWarning(UserWarning):
    """An LFSR generator is used in the regime where it is insecure."""


@dataclass(frozen=True)
class LfsrSpec:
    """LFSR with feedback polynomial ``1 + a_1 x + ... + a_mu x^mu``.

    ``coeffs`` holds ``(a_1, ..., a_mu)`` as raw field ints; ``a_0 = 1`` is
    implicit.
    """

    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise ParameterError("LFSR needs at least one feedback coefficient")
        for a in self.coeffs:
            self.field.check(a)

    @property
    def mu(self) -> int:
        return len(self.coeffs)

    def polynomial(self) -> tuple[int, ...]:
        """Coefficients ``(a_0, a_1, ..., a_mu)``."""
        return (1,) + self.coeffs


@dataclass(frozen=True)
class PrngScheme:
    field: FieldSpec
    k: int
    ell: int
    mu: int
    generator: str = NONLINEAR
    lfsr: LfsrSpec | None = None

    def __post_init__(self):
        if self.k < 1 or self.ell < 1 or self.mu < 1:
            raise ParameterError(f"need k, ell, mu >= 1, got k={self.k}, ell={self.ell}, mu={self.mu}")
        if self.k > 0xFFFF or self.mu > 0xFFFF or self.ell > 0xFF:
            raise ParameterError("k and mu must fit in 16 bits, ell in 8 bits")
        if self.generator not in GENERATOR_IDS:
            raise ParameterError(f"unknown generator {self.generator!r}")
        if self.generator == LFSR:
            if self.lfsr is None:
                raise ParameterError("generator 'lfsr' needs an LfsrSpec")
            if self.lfsr.mu != self.mu or self.lfsr.field != self.field:
                raise ParameterError("LfsrSpec does not match scheme field/mu")
            if self.mu < self.k:
                warnings.warn(
                    f"LFSR generator with mu={self.mu} < k={self.k}: a fixed message pair is "
                    "accepted for every seed",
                    LinearGeneratorWarning,
                    stacklevel=3,
                )
        elif self.lfsr is not None:
            raise ParameterError("LfsrSpec given for a non-LFSR generator")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def generator_id(self) -> int:
        return GENERATOR_IDS[self.generator]

    def message(self, values) -> FieldVector:
        u = values if isinstance(values, FieldVector) else FieldVector(self.field, tuple(values))
        check_message(self, u)
        return u


@dataclass(frozen=True)
class PrngIdentWord:
    seed: FieldVector
    tags: FieldVector


def lfsr_step_sequence(spec: LfsrSpec, seed: FieldVector | tuple[int, ...], count: int) -> FieldVector:
    """First ``count`` outputs of the LFSR started in state ``seed``.

    The first mu outputs are the seed itself; afterwards
    ``s[t] = -sum_{j=1..mu} a_j s[t-j]``.
    """
    f = spec.field
    values = seed.values if isinstance(seed, FieldVector) else tuple(seed)
    if len(values) != spec.mu:
        raise LengthMismatchError(f"seed has {len(values)} symbols, register length is {spec.mu}")
    for v in values:
        f.check(v)
    return FieldVector(f, tuple(_lfsr_raw(f, spec.coeffs, values, count)))


def _lfsr_raw(f: FieldSpec, coeffs, seed, count: int) -> list[int]:
    mu = len(coeffs)
    s = list(seed[:count])
    exp, log = f._exp, f._log
    # (j, log a_j) for the nonzero taps; a_j multiplies s[t-j]
    taps = [(j, log[a]) for j, a in enumerate(coeffs, start=1) if a]
    for t in range(mu, count):
        acc = 0
        for j, la in taps:
            x = s[t - j]
            if x:
                acc ^= exp[la + log[x]]
        # negation is the identity in characteristic 2
        s.append(f.neg(acc))
    return s


def _expand_raw(scheme: PrngScheme, seed: tuple[int, ...], count: int) -> list[int]:
    f = scheme.field
    if scheme.generator == LFSR:
        return _lfsr_raw(f, scheme.lfsr.coeffs, seed, count)
    material = frame(_EXPAND_LABEL, bytes([f.m]), pack_symbols(seed, f.m))
    return uniform_symbols(material, count, f.m, f.q)


def _check_seed(scheme: PrngScheme, seed: FieldVector) -> None:
    if seed.field != scheme.field:
        raise ParameterError("seed field differs from scheme field")
    if len(seed) != scheme.mu:
        raise LengthMismatchError(f"seed has {len(seed)} symbols, expected mu={scheme.mu}")


def prng_expand(scheme: PrngScheme, seed: FieldVector, count: int) -> FieldVector:
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count}")
    _check_seed(scheme, seed)
    return FieldVector(scheme.field, tuple(_expand_raw(scheme, seed.values, count)))


def _columns(scheme: PrngScheme, seed: tuple[int, ...]) -> list[list[int]]:
    k = scheme.k
    s = _expand_raw(scheme, seed, scheme.ell * k)
    return [s[j * k:(j + 1) * k] for j in range(scheme.ell)]


def build_tag_matrix(scheme: PrngScheme, seed: FieldVector) -> tuple[FieldVector, ...]:
    """Columns of ``G(sigma)``; column j takes expanded symbols ``[j*k, (j+1)*k)``."""
    _check_seed(scheme, seed)
    return tuple(FieldVector(scheme.field, tuple(c)) for c in _columns(scheme, seed.values))


def apply_tag_matrix(field: FieldSpec, u: tuple[int, ...], columns) -> tuple[int, ...]:
    """Row vector times matrix: ``(<u, g_1>, ..., <u, g_ell>)``."""
    return tuple(field.dot(u, col) for col in columns)


def prng_send(scheme: PrngScheme, u: FieldVector, rng: random.Random | None = None) -> PrngIdentWord:
    check_message(scheme, u)
    rng = rng if rng is not None else random.SystemRandom()
    f = scheme.field
    seed = tuple(random_symbols(rng, f.m, scheme.mu))
    tags = apply_tag_matrix(f, u.values, _columns(scheme, seed))
    return PrngIdentWord(FieldVector.trusted(f, seed), FieldVector.trusted(f, tags))


def prng_verify(scheme: PrngScheme, u_expected: FieldVector, w: PrngIdentWord) -> Verdict:
    check_message(scheme, u_expected)
    if w.seed.field != scheme.field or w.tags.field != scheme.field:
        return Verdict(False, Reason.PARAM_MISMATCH, "word field differs from scheme field")
    if len(w.seed) != scheme.mu or len(w.tags) != scheme.ell:
        return Verdict(
            False,
            Reason.LENGTH_MISMATCH,
            f"word has mu={len(w.seed)}, ell={len(w.tags)}; expected {scheme.mu}, {scheme.ell}",
        )
    expected = apply_tag_matrix(scheme.field, u_expected.values, _columns(scheme, w.seed.values))
    if expected == w.tags.values:
        return Verdict.accept()
    return Verdict(False, Reason.TAG_MISMATCH)


def lfsr_attack(spec: LfsrSpec, k: int) -> tuple[FieldVector, FieldVector]:
    """A message pair that the LFSR scheme confuses for every seed.

    Returns ``(0, v)`` with ``v = (a_mu, ..., a_1, 1, 0, ..., 0)``.  Each
    column of ``G(sigma)`` is a run of consecutive LFSR outputs, and ``v``
    dotted with any mu+1 consecutive outputs is the feedback relation, so
    ``v G(sigma) = 0`` identically.
    """
    if spec.mu >= k:
        raise AttackNotApplicableError(f"attack needs mu < k, got mu={spec.mu}, k={k}")
    f = spec.field
    v = tuple(reversed(spec.coeffs)) + (1,) + (0,) * (k - spec.mu - 1)
    return f.zeros(k), FieldVector(f, v)


def ident_rate_prng(field, k: int, ell: int, mu: int) -> float:
    """(log k + log log q) / ((mu + ell) log q), base-2 logs."""
    q = field.q if isinstance(field, FieldSpec) else int(field)
    if q < 2:
        raise ParameterError(f"q must be >= 2, got {q}")
    if k < 2:
        raise ParameterError(f"need k >= 2, got {k}")
    if ell < 1 or mu < 1:
        raise ParameterError("ell and mu must be >= 1")
    return (math.log2(k) + math.log2(math.log2(q))) / ((mu + ell) * math.log2(q))
