"""Entropy, Varshamov-Gilbert and random-code bounds, and a parameter planner.

Everything is evaluated with mpmath at 50 significant digits; results are
returned as floats.  Quantities such as ``q**(-eps*n + 1)`` are handled in
log space so they never underflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .errors import ParameterError

_DPS = 50


def _ctx():
    return mpmath.workdps(_DPS)


def _mp(x):
    # shortest decimal repr, so eps=0.1 means one tenth rather than the
    # binary double just above it
    return mpmath.mpf(repr(float(x))) if isinstance(x, float) else mpmath.mpf(x)


def _h(q, x):
    """q-ary entropy at mpmath precision; caller holds the precision context."""
    q = mpmath.mpf(q)
    x = _mp(x)
    out = mpmath.mpf(0)
    if x > 0:
        out += x * mpmath.log(q - 1, q) - x * mpmath.log(x, q)
    if x < 1:
        out -= (1 - x) * mpmath.log(1 - x, q)
    return out


def entropy_q(q: int, x: float) -> float:
    """h_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x), with 0 log 0 = 0."""
    if q < 2:
        raise ParameterError(f"q must be >= 2, got {q}")
    if not 0 <= x <= 1:
        raise ParameterError(f"x must lie in [0, 1], got {x}")
    with _ctx():
        return float(_h(q, x))


def _check_delta(q: int, delta: float) -> None:
    if q < 2:
        raise ParameterError(f"q must be >= 2, got {q}")
    if not 0 <= delta < 1 - 1 / q:
        raise ParameterError(f"delta must lie in [0, 1 - 1/q) = [0, {1 - 1 / q}), got {delta}")


def vg_rate(q: int, delta: float) -> float:
    """Varshamov-Gilbert rate 1 - h_q(delta)."""
    _check_delta(q, delta)
    with _ctx():
        return float(1 - _h(q, delta))


@dataclass(frozen=True)
class SuccessBound:
    """``P = 1 - q^(1 - eps n)`` together with ``log10(1 - P)``.

    ``P`` itself rounds to 1.0 in double precision for realistic sizes;
    ``log10_one_minus_P`` keeps the information.  A non-positive ``P`` means
    the bound says nothing at this size.
    """

    P: float
    log10_one_minus_P: float

    @property
    def neg_log10_one_minus_P(self) -> float:
        return -self.log10_one_minus_P

    @property
    def vacuous(self) -> bool:
        return self.P <= 0


def success_probability(q: int, n: int, eps: float) -> SuccessBound:
    """Probability that a random code meets the VG-style rate and distance."""
    if q < 2 or n < 1:
        raise ParameterError(f"need q >= 2 and n >= 1, got q={q}, n={n}")
    with _ctx():
        expo = 1 - _mp(eps) * n
        log10_fail = expo * mpmath.log10(q)
        P = 1 - mpmath.power(q, expo)
        return SuccessBound(float(P), float(log10_fail))


theorem1_probability = success_probability


@dataclass(frozen=True)
class ParamSet:
    """Code parameters; every derived quantity is computed on access."""

    q: int
    n: int
    k: int
    delta: float
    eps: float
    ell: int = 1

    @property
    def code_rate(self) -> float:
        return self.k / self.n

    @property
    def lambda2_single(self) -> float:
        """Per-word false-acceptance bound 1 - d/n with d = delta n."""
        return 1 - self.delta

    @property
    def lambda2(self) -> float:
        return (1 - self.delta) ** self.ell

    @property
    def word_bits(self) -> float:
        """Information content of the ell-fold word, ell (log2 n + log2 q)."""
        return self.ell * (math.log2(self.n) + math.log2(self.q))

    @property
    def message_bits(self) -> float:
        return self.k * math.log2(self.q)

    @property
    def rate(self) -> float:
        """Identification rate over the whole ell-fold transmission."""
        if self.k < 2:
            raise ParameterError("identification rate needs k >= 2")
        return (math.log2(self.k) + math.log2(math.log2(self.q))) / self.word_bits

    @property
    def success_bound(self) -> SuccessBound:
        return success_probability(self.q, self.n, self.eps)

    @property
    def P(self) -> float:
        return self.success_bound.P

    @property
    def log10_one_minus_P(self) -> float:
        return self.success_bound.log10_one_minus_P

    def as_kv(self) -> dict[str, object]:
        """Machine-readable keys of the ``plan`` output."""
        return {
            "q": self.q,
            "n": self.n,
            "k": self.k,
            "delta": _fmt(self.delta),
            "eps": _fmt(self.eps),
            "ell": self.ell,
            "lambda2": _fmt(self.lambda2),
            "word_bits": _fmt(self.word_bits),
            "rate": _fmt(self.rate),
            "log10_one_minus_P": _fmt(self.log10_one_minus_P),
            "message_bits": _fmt(self.message_bits),
        }


def _fmt(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def dimension_for(q: int, n: int, delta: float, eps: float) -> int:
    """k = floor((1 - h_q(delta) - eps) n)."""
    _check_delta(q, delta)
    with _ctx():
        slack = 1 - _h(q, delta)
        if not 0 < eps < slack:
            raise ParameterError(f"eps must lie in (0, 1 - h_q(delta)) = (0, {float(slack)}), got {eps}")
        return int(mpmath.floor((slack - _mp(eps)) * n))


def plan_example(q: int, n: int, delta: float, eps: float, ell: int = 1) -> ParamSet:
    """Parameter set of a random code sized by the VG-style rate bound."""
    if ell < 1:
        raise ParameterError(f"ell must be >= 1, got {ell}")
    k = dimension_for(q, n, delta, eps)
    return ParamSet(q=q, n=n, k=k, delta=delta, eps=eps, ell=ell)


@dataclass(frozen=True)
class TrendRow:
    n: int
    log_q_over_log_n: float
    log_k_over_log_n: float
    delta: float


@dataclass(frozen=True)
class TrendReport:
    rows: tuple[TrendRow, ...]
    # per ratio: "toward-limit", "away", or "no trend"
    trends: dict[str, str]

    @property
    def all_toward_limits(self) -> bool:
        return all(v == "toward-limit" for v in self.trends.values())


def _trend(values, limit) -> str:
    dists = [abs(limit - v) for v in values]
    if all(b == a for a, b in zip(dists, dists[1:])):
        return "no trend"
    if all(b < a for a, b in zip(dists, dists[1:])):
        return "toward-limit"
    return "away"


def optimality_check(points) -> TrendReport:
    """Finite-size trend of log q/log n -> 0, log k/log n -> 1, d/n -> 1.

    ``points`` are ParamSet-like objects with ``q, n, k, delta`` and must be
    given in order of increasing n.  Purely diagnostic: it reports whether
    each ratio moves strictly toward its limit, never that it gets there.
    """
    points = list(points)
    if len(points) < 3:
        raise ParameterError("optimality_check needs at least 3 points")
    rows = []
    for p in points:
        ln = math.log2(p.n)
        if ln == 0 or p.k < 1:
            raise ParameterError("points need n >= 2 and k >= 1")
        rows.append(TrendRow(p.n, math.log2(p.q) / ln, math.log2(p.k) / ln, float(p.delta)))
    ns = [r.n for r in rows]
    if all(b == a for a, b in zip(ns, ns[1:])):
        trends = {k: "no trend" for k in ("log_q_over_log_n", "log_k_over_log_n", "delta")}
    else:
        if any(b < a for a, b in zip(ns, ns[1:])):
            raise ParameterError("points must be ordered by non-decreasing n")
        trends = {
            "log_q_over_log_n": _trend([r.log_q_over_log_n for r in rows], 0.0),
            "log_k_over_log_n": _trend([r.log_k_over_log_n for r in rows], 1.0),
            "delta": _trend([r.delta for r in rows], 1.0),
        }
    return TrendReport(tuple(rows), trends)


def growth_schedule(ms=(8, 12, 16)) -> list[ParamSet]:
    """A growing family that drives all three ratios toward their limits.

    For field size ``q = 2^m``: ``n = 2^(m^2/4)``, ``delta = 1 - 2^(-m/2)``,
    ``eps = (1 - h_q(delta)) / 4`` and k from :func:`dimension_for`.  Then
    ``log q/log n = 4/m`` falls, delta rises, and ``log k/log n`` rises
    because ``log(1 - h_q(delta) - eps)`` grows much slower than ``log n``.
    """
    out = []
    for m in ms:
        q = 2**m
        n = 2 ** (m * m // 4)
        delta = 1 - 2.0 ** -(m // 2)
        with _ctx():
            eps = float((1 - _h(q, delta)) / 4)
        out.append(plan_example(q, n, delta, eps))
    return out
