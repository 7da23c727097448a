import itertools
import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from identcodes.errors import EnumerationTooLargeError, ParameterError
from identcodes.experiments import (
    DegenerateCodeWarning,
    TrialConfig,
    brute_force_min_distance,
    estimate_lambda2,
    lfsr_attack_sweep,
    vg_sample,
    wilson_interval,
)
from identcodes.gf import field_new
from identcodes.identify_code import CodeSpec, derive_column
from identcodes.identify_prng import LfsrSpec, PrngScheme


def _wilson_oracle(x, n, z=1.959963984540054):
    # the interval's endpoints are the roots in p of (phat - p)^2 = z^2 p(1-p)/n
    phat = x / n
    a = 1 + z * z / n
    b = -(2 * phat + z * z / n)
    c = phat * phat
    lo, hi = sorted(np.roots([a, b, c]).real)
    return lo, hi


@pytest.mark.parametrize("x,n", [(0, 10), (1, 10), (5, 10), (10, 10), (37, 1000), (6250, 100000)])
def test_wilson_matches_quadratic_roots(x, n):
    lo, hi = wilson_interval(x, n)
    olo, ohi = _wilson_oracle(x, n)
    assert lo == pytest.approx(max(0.0, olo), abs=1e-9)
    assert hi == pytest.approx(min(1.0, ohi), abs=1e-9)


def test_wilson_bad_trials():
    with pytest.raises(ParameterError):
        wilson_interval(0, 0)


def test_report_reproducible():
    f = field_new(4)
    cfg = TrialConfig(PrngScheme(f, 6, 1, 4), trials=500, seed=17)
    assert estimate_lambda2(cfg) == estimate_lambda2(cfg)


def test_serial_equals_parallel():
    f = field_new(4)
    spec = CodeSpec(f, 6, 1000, b"k")
    a = estimate_lambda2(TrialConfig(spec, trials=400, seed=3))
    b = estimate_lambda2(TrialConfig(spec, trials=400, seed=3, workers=2))
    assert a.accepts == b.accepts


def test_forced_equal_pair_always_accepted():
    f = field_new(8)
    spec = CodeSpec(f, 4, 100, b"k")
    u = f.vector([1, 2, 3, 4])
    rep = estimate_lambda2(TrialConfig(spec, trials=1, pair=(u, u)))
    assert rep.accepts == 1 and rep.reference == 1.0


def test_prng_q16_monte_carlo():
    rep = estimate_lambda2(TrialConfig(PrngScheme(field_new(4), 8, 1, 4), trials=20_000, seed=1))
    assert rep.reference == 1 / 16
    assert abs(rep.p_hat - 1 / 16) <= 4 * math.sqrt(1 / 16 * 15 / 16 / 20_000)


def test_exhaustive_code_q2_k3_n7():
    spec = CodeSpec(field_new(1), 3, 7, b"exhaustive")
    rep = estimate_lambda2(TrialConfig(spec, mode="worst-pair-exhaustive"))
    d = rep.details["d"]
    assert rep.exact and rep.trials == 7
    assert rep.reference_exact == Fraction(7 - d, 7)
    assert rep.covers


def test_exhaustive_agrees_with_monte_carlo():
    spec = CodeSpec(field_new(1), 2, 4, b"mc-vs-exact")
    ex = estimate_lambda2(TrialConfig(spec, mode="worst-pair-exhaustive"))
    u, up = (field_new(1).vector(v) for v in ex.worst_pair)
    N = 4000
    mc = estimate_lambda2(TrialConfig(spec, trials=N, seed=5, pair=(u, up)))
    p = ex.accepts / ex.trials
    assert abs(mc.p_hat - p) <= 4 * math.sqrt(max(p * (1 - p), 1e-12) / N) + 1e-12


def test_exhaustive_budget():
    spec = CodeSpec(field_new(8), 4, 100, b"k")
    with pytest.raises(EnumerationTooLargeError):
        estimate_lambda2(TrialConfig(spec, mode="worst-pair-exhaustive"))


def _pairwise_min_distance(spec):
    f = spec.field
    cols = [derive_column(spec, i).values for i in range(spec.n)]
    words = []
    for u in itertools.product(range(f.q), repeat=spec.k):
        words.append(tuple(f.dot(u, c) for c in cols))
    best = spec.n + 1
    for a, b in itertools.combinations(range(len(words)), 2):
        best = min(best, sum(x != y for x, y in zip(words[a], words[b])))
    return best


@pytest.mark.parametrize("key", [b"a", b"b", b"c"])
def test_min_distance_pairwise_oracle(key):
    spec = CodeSpec(field_new(1), 4, 8, key)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateCodeWarning)
        assert brute_force_min_distance(spec) == _pairwise_min_distance(spec)


def test_min_distance_gf4_oracle():
    spec = CodeSpec(field_new(2), 3, 10, b"gf4")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateCodeWarning)
        assert brute_force_min_distance(spec) == _pairwise_min_distance(spec)


def test_min_distance_k1_is_row_weight():
    for key in (b"x", b"y", b"z"):
        spec = CodeSpec(field_new(4), 1, 20, key)
        row = [derive_column(spec, i).values[0] for i in range(20)]
        assert any(row)
        assert brute_force_min_distance(spec) == sum(1 for x in row if x)


def test_degenerate_code_flagged():
    # a 4x4 binary random matrix is singular with probability about 0.69
    for s in range(50):
        spec = CodeSpec(field_new(1), 4, 4, bytes([s]))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            d = brute_force_min_distance(spec)
        if d == 0:
            assert any(issubclass(w.category, DegenerateCodeWarning) for w in caught)
            return
    pytest.fail("no singular key found")


def test_vg_sample_nonvacuous():
    rep = vg_sample(2, 14, 0.2, 0.1, samples=200, seed=0)
    assert rep.k == 2
    assert not rep.vacuous
    assert rep.meets_bound
    assert rep.fraction >= 1 - 2 ** (-0.1 * 14 + 1)


def test_vg_sample_vacuous_reported():
    rep = vg_sample(2, 14, 0.2, 0.02, samples=50, seed=0)
    assert rep.k == 3
    assert rep.vacuous and rep.bound_label == "vacuous"
    assert rep.as_kv()["bound"] == "vacuous"


def test_vg_sample_zero_delta():
    rep = vg_sample(2, 14, 0.0, 0.3, samples=20)
    assert rep.fraction == 1.0


def test_vg_sample_degenerate_k():
    with pytest.raises(ParameterError):
        vg_sample(2, 14, 0.2, 0.27)


def test_attack_sweep_example():
    rep = lfsr_attack_sweep(LfsrSpec(field_new(1), (1, 1)), 4, seeds="all")
    assert (rep.accepted, rep.seeds, rep.exhaustive) == (4, 4, True)
    assert rep.as_kv()["lambda2"] == "1"


def test_attack_sweep_nonlinear_not_broken():
    spec = LfsrSpec(field_new(2), (1, 3, 2, 1, 1, 2, 3, 1))
    rep = lfsr_attack_sweep(spec, 10, seeds="all", generator="nonlinear-default")
    p = 1 / 4
    assert abs(rep.lambda2 - p) <= 4 * math.sqrt(p * (1 - p) / rep.seeds)


def test_attack_sweep_sampled():
    spec = LfsrSpec(field_new(4), (1, 2, 3, 4, 5))  # 16^5 states, above the sweep limit
    rep = lfsr_attack_sweep(spec, 7, seeds=300)
    assert (rep.accepted, rep.exhaustive) == (300, False)
    with pytest.raises(EnumerationTooLargeError):
        lfsr_attack_sweep(spec, 7, seeds="all")
