"""Monte Carlo and exhaustive checks of false-acceptance probabilities.

Randomness follows one derivation tree: every trial ``t`` of a run with
master seed ``s`` draws from ``derive_rng(s, "trial", t)``.  Trials are
therefore independent of scheduling, and ``workers > 1`` reproduces the
serial report exactly.
"""
from __future__ import annotations

import itertools
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist

import numpy as np

from . import bounds
from .errors import EnumerationTooLargeError, ParameterError
from .gf import FieldVector, field_new
from .identify_code import CodeIdentWord, CodeSpec, column_values, generator_matrix, send, verify
from .identify_prng import (
    LFSR,
    LfsrSpec,
    LinearGeneratorWarning,
    PrngIdentWord,
    PrngScheme,
    _columns,
    apply_tag_matrix,
    lfsr_attack,
    prng_send,
    prng_verify,
)
from .bits import random_symbols
from .xof import derive_rng

EXHAUSTIVE_BUDGET = 2**24
DISTANCE_BUDGET = 2**20
SEED_SWEEP_LIMIT = 2**16
Z95 = NormalDist().inv_cdf(0.975)


class DegenerateCodeWarning(UserWarning):
    """A nonzero message maps to the zero codeword (minimum distance 0)."""


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    p = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class TrialConfig:
    """What to simulate.

    ``scheme`` is a :class:`CodeSpec` (with ``ell`` words per call) or a
    :class:`PrngScheme` (which carries its own ell).  ``pair`` pins the
    (sent, expected) messages instead of drawing a fresh distinct pair per
    trial.
    """

    scheme: CodeSpec | PrngScheme
    trials: int = 10_000
    seed: int = 0
    mode: str = "random-pairs"
    ell: int = 1
    pair: tuple[FieldVector, FieldVector] | None = None
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if self.mode not in ("random-pairs", "worst-pair-exhaustive"):
            raise ParameterError(f"unknown mode {self.mode!r}")
        if self.ell < 1:
            raise ParameterError("ell must be >= 1")

    @property
    def effective_ell(self) -> int:
        return self.scheme.ell if isinstance(self.scheme, PrngScheme) else self.ell


@dataclass(frozen=True)
class TrialReport:
    accepts: int
    trials: int
    reference: float
    mode: str = "random-pairs"
    exact: bool = False
    # exhaustive mode: exact reference as a fraction and the worst pair found
    reference_exact: Fraction | None = None
    worst_pair: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    details: dict = field(default_factory=dict)

    @property
    def p_hat(self) -> float:
        return self.accepts / self.trials

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_interval(self.accepts, self.trials)

    @property
    def covers(self) -> bool:
        if self.exact and self.reference_exact is not None:
            return Fraction(self.accepts, self.trials) == self.reference_exact
        lo, hi = self.ci
        return lo <= self.reference <= hi

    def as_kv(self) -> dict[str, object]:
        lo, hi = self.ci
        return {
            "mode": self.mode,
            "accepts": self.accepts,
            "trials": self.trials,
            "p_hat": repr(self.p_hat),
            "ci_low": repr(lo),
            "ci_high": repr(hi),
            "reference": repr(self.reference),
            "covers": str(self.covers).lower(),
        }


def _random_message(scheme, rng) -> tuple[int, ...]:
    return tuple(random_symbols(rng, scheme.field.m, scheme.k))


def _distinct_pair(scheme, rng):
    u = _random_message(scheme, rng)
    while True:
        up = _random_message(scheme, rng)
        if up != u:
            return u, up


def _one_trial(cfg: TrialConfig, t: int) -> bool:
    scheme = cfg.scheme
    rng = derive_rng(cfg.seed, "trial", t)
    if cfg.pair is not None:
        u, up = cfg.pair
    else:
        a, b = _distinct_pair(scheme, rng)
        u, up = FieldVector.trusted(scheme.field, a), FieldVector.trusted(scheme.field, b)
    if isinstance(scheme, PrngScheme):
        return prng_verify(scheme, up, prng_send(scheme, u, rng)).accepted
    return verify(scheme, up, send(scheme, u, cfg.ell, rng)).accepted


def _run_range(cfg: TrialConfig, start: int, stop: int) -> int:
    return sum(_one_trial(cfg, t) for t in range(start, stop))


def _reference(cfg: TrialConfig) -> float:
    if cfg.pair is not None and cfg.pair[0].values == cfg.pair[1].values:
        return 1.0
    return cfg.scheme.field.q ** -cfg.effective_ell


def estimate_lambda2(cfg: TrialConfig) -> TrialReport:
    """Empirical false-acceptance frequency (or exact worst pair).

    ``random-pairs``: each trial draws distinct messages ``u != u'``, sends
    ``u`` and verifies against ``u'``.  The reference is ``q^-ell``, the
    acceptance probability for uniformly random columns.

    ``worst-pair-exhaustive``: enumerates every message pair and every
    choice of sender randomness, and reports the pair with the most accepts.
    For the code scheme the reference is ``(1 - d/n)^ell`` with d from
    :func:`brute_force_min_distance`, and the comparison is exact.
    """
    if cfg.mode == "worst-pair-exhaustive":
        return _exhaustive(cfg)
    if cfg.workers > 1:
        bounds_ = np.linspace(0, cfg.trials, cfg.workers + 1).astype(int)
        with ProcessPoolExecutor(cfg.workers) as pool:
            parts = pool.map(_run_range, itertools.repeat(cfg), bounds_[:-1], bounds_[1:])
            accepts = sum(parts)
    else:
        accepts = _run_range(cfg, 0, cfg.trials)
    return TrialReport(accepts, cfg.trials, _reference(cfg), mode=cfg.mode)


def _all_messages(f, k):
    return itertools.product(range(f.q), repeat=k)


def _exhaustive(cfg: TrialConfig) -> TrialReport:
    scheme = cfg.scheme
    f = scheme.field
    nmsg = f.q**scheme.k
    if isinstance(scheme, PrngScheme):
        choices = [FieldVector(f, s) for s in itertools.product(range(f.q), repeat=scheme.mu)]
    else:
        choices = list(itertools.product(range(scheme.n), repeat=cfg.ell))
    total = nmsg * nmsg * len(choices)
    if total > EXHAUSTIVE_BUDGET:
        raise EnumerationTooLargeError(f"{total} cases exceed the budget of {EXHAUSTIVE_BUDGET}")

    msgs = [FieldVector(f, u) for u in _all_messages(f, scheme.k)]
    words = {}
    for u in msgs:
        ws = []
        for c in choices:
            if isinstance(scheme, PrngScheme):
                ws.append(_prng_word_for_seed(scheme, u, c))
            else:
                ws.append(_code_word_for_indices(scheme, u, c))
        words[u.values] = ws

    best, worst = -1, None
    for u in msgs:
        for up in msgs:
            if up.values == u.values:
                continue
            if isinstance(scheme, PrngScheme):
                acc = sum(prng_verify(scheme, up, w).accepted for w in words[u.values])
            else:
                acc = sum(verify(scheme, up, w).accepted for w in words[u.values])
            if acc > best:
                best, worst = acc, (u.values, up.values)

    if isinstance(scheme, PrngScheme):
        ref = f.q ** -scheme.ell
        return TrialReport(best, len(choices), ref, mode=cfg.mode, worst_pair=worst)
    d = brute_force_min_distance(scheme)
    ref_exact = Fraction(scheme.n - d, scheme.n) ** cfg.ell
    return TrialReport(
        best,
        len(choices),
        float(ref_exact),
        mode=cfg.mode,
        exact=True,
        reference_exact=ref_exact,
        worst_pair=worst,
        details={"d": d},
    )


def _code_word_for_indices(spec: CodeSpec, u: FieldVector, indices):
    f = spec.field
    tags = tuple(f.dot(u.values, column_values(spec, i)) for i in indices)
    return CodeIdentWord(tuple(indices), FieldVector(f, tags))


def _prng_word_for_seed(scheme: PrngScheme, u: FieldVector, seed: FieldVector):
    tags = apply_tag_matrix(scheme.field, u.values, _columns(scheme, seed.values))
    return PrngIdentWord(seed, FieldVector(scheme.field, tags))


def codeword_table(spec: CodeSpec, rows: int) -> np.ndarray:
    """Codewords ``uG`` for all u supported on the first ``rows`` coordinates.

    Row index ``r`` of the result corresponds to ``u = digits of r in base
    q`` with ``u_0`` most significant.
    """
    f = spec.field
    cols = generator_matrix(spec)
    g_rows = [[cols[i][j] for i in range(spec.n)] for j in range(spec.k)]
    table = np.zeros((1, spec.n), dtype=np.uint16)
    for j in range(rows):
        mult = np.array([f.scale(c, g_rows[j]) for c in range(f.q)], dtype=np.uint16)
        table = (table[:, None, :] ^ mult[None, :, :]).reshape(-1, spec.n)
    return table


def brute_force_min_distance(spec: CodeSpec) -> int:
    """Minimum Hamming weight over all nonzero codewords of the keyed code.

    Enumerates all q^k messages (at most 2^20).  A result of 0 means the
    generator matrix has rank < k; a :class:`DegenerateCodeWarning` is
    emitted in that case.
    """
    f = spec.field
    total = f.q**spec.k
    if total > DISTANCE_BUDGET:
        raise EnumerationTooLargeError(f"q^k = {total} exceeds {DISTANCE_BUDGET}")
    # split rows: a table for the low rows, looped over the high rows
    low = max(1, min(spec.k, int(12 // max(1, f.m))))
    high = spec.k - low
    low_table = codeword_table(spec, low)  # indexed by the first `low` coords
    cols = generator_matrix(spec)
    g_rows = [np.array([cols[i][j] for i in range(spec.n)], dtype=np.uint16) for j in range(spec.k)]
    best = spec.n + 1
    for tail in itertools.product(range(f.q), repeat=high):
        offset = np.zeros(spec.n, dtype=np.uint16)
        for c, j in zip(tail, range(low, spec.k)):
            if c:
                offset ^= np.array(f.scale(c, g_rows[j].tolist()), dtype=np.uint16)
        weights = np.count_nonzero(low_table ^ offset, axis=1)
        if not any(tail):
            weights = weights[1:]
        if weights.size:
            best = min(best, int(weights.min()))
    if best == 0:
        warnings.warn(f"degenerate code: rank < k for key {spec.key.hex()}", DegenerateCodeWarning, stacklevel=2)
    return best


@dataclass(frozen=True)
class VgSampleReport:
    q: int
    n: int
    k: int
    delta: float
    eps: float
    successes: int
    samples: int
    bound: bounds.SuccessBound
    distances: tuple[int, ...] = ()

    @property
    def fraction(self) -> float:
        return self.successes / self.samples

    @property
    def vacuous(self) -> bool:
        return self.bound.vacuous

    @property
    def bound_label(self) -> str:
        return "vacuous" if self.vacuous else repr(self.bound.P)

    @property
    def meets_bound(self) -> bool:
        return self.fraction >= max(0.0, self.bound.P)

    def as_kv(self) -> dict[str, object]:
        return {
            "q": self.q,
            "n": self.n,
            "k": self.k,
            "delta": repr(self.delta),
            "eps": repr(self.eps),
            "samples": self.samples,
            "successes": self.successes,
            "fraction": repr(self.fraction),
            "bound_P": repr(self.bound.P),
            "bound": self.bound_label,
        }


def vg_sample(q: int, n: int, delta: float, eps: float, samples: int = 200, seed: int = 0) -> VgSampleReport:
    """Fraction of keyed random codes with d/n >= delta at the planned k."""
    if q < 2 or q & (q - 1):
        raise ParameterError(f"q must be a power of two, got {q}")
    if samples < 1:
        raise ParameterError("samples must be >= 1")
    k = bounds.dimension_for(q, n, delta, eps)
    if k < 1:
        raise ParameterError(f"planned dimension k={k} is degenerate; lower eps or delta")
    f = field_new(q.bit_length() - 1)
    if f.q**k > DISTANCE_BUDGET:
        raise EnumerationTooLargeError(f"q^k = {f.q ** k} exceeds {DISTANCE_BUDGET}")
    dists = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateCodeWarning)
        for s in range(samples):
            key = derive_rng(seed, "vg-key", s).randbytes(16)
            dists.append(brute_force_min_distance(CodeSpec(f, k, n, key)))
    ok = sum(d / n >= delta for d in dists)
    return VgSampleReport(q, n, k, delta, eps, ok, samples, bounds.success_probability(q, n, eps), tuple(dists))


@dataclass(frozen=True)
class AttackReport:
    accepted: int
    seeds: int
    exhaustive: bool

    @property
    def lambda2(self) -> float:
        return self.accepted / self.seeds

    def as_kv(self) -> dict[str, object]:
        return {
            "accepted": self.accepted,
            "seeds": self.seeds,
            "exhaustive": str(self.exhaustive).lower(),
            "lambda2": _fmt_ratio(self.accepted, self.seeds),
        }


def _fmt_ratio(a: int, b: int) -> str:
    return str(a // b) if a % b == 0 else repr(a / b)


def lfsr_attack_sweep(
    spec: LfsrSpec,
    k: int,
    ell: int = 1,
    seeds: int | str = "auto",
    seed: int = 0,
    generator: str = LFSR,
) -> AttackReport:
    """Send ``0`` and verify against the attack message for many seeds.

    ``seeds="all"`` enumerates every register state (requires q^mu <=
    2^16); ``"auto"`` does so when feasible and otherwise samples 10^4
    states; an int samples that many.  ``generator`` may be switched to the
    nonlinear default to show the same pair is not special there.
    """
    f = spec.field
    u, up = lfsr_attack(spec, k)
    if generator == LFSR:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LinearGeneratorWarning)
            scheme = PrngScheme(f, k, ell, spec.mu, LFSR, spec)
    else:
        scheme = PrngScheme(f, k, ell, spec.mu, generator)
    space = f.q**spec.mu
    if seeds == "auto":
        seeds = "all" if space <= SEED_SWEEP_LIMIT else 10_000
    if seeds == "all":
        if space > SEED_SWEEP_LIMIT:
            raise EnumerationTooLargeError(f"q^mu = {space} exceeds {SEED_SWEEP_LIMIT}")
        states = itertools.product(range(f.q), repeat=spec.mu)
        total, exhaustive = space, True
    else:
        total, exhaustive = int(seeds), False
        rng = derive_rng(seed, "attack-seeds")
        states = (tuple(random_symbols(rng, f.m, spec.mu)) for _ in range(total))
    accepted = 0
    for s in states:
        w = _prng_word_for_seed(scheme, u, FieldVector.trusted(f, tuple(s)))
        accepted += prng_verify(scheme, up, w).accepted
    return AttackReport(accepted, total, exhaustive)
