import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from identcodes.bounds import (
    ParamSet,
    dimension_for,
    entropy_q,
    growth_schedule,
    optimality_check,
    plan_example,
    success_probability,
    vg_rate,
)
from identcodes.errors import ParameterError


def _h_oracle(q, x):
    # natural-log form, divided by ln q at the end
    with mpmath.workdps(60):
        q, x = mpmath.mpf(q), mpmath.mpf(x)
        v = x * mpmath.ln(q - 1) - x * mpmath.ln(x) - (1 - x) * mpmath.ln(1 - x)
        return float(v / mpmath.ln(q))


def test_entropy_endpoints():
    for q in (2, 3, 16, 1024):
        assert entropy_q(q, 0) == 0
        assert entropy_q(q, 1 - 1 / q) == pytest.approx(1, abs=1e-15)
    assert entropy_q(2, 1) == 0


def test_entropy_example_value():
    x = 1 - 2**-7
    assert entropy_q(1024, x) == pytest.approx(0.99864, abs=5e-6)
    assert entropy_q(1024, x) == pytest.approx(_h_oracle(1024, x), rel=1e-14)


def test_entropy_domain():
    with pytest.raises(ParameterError):
        entropy_q(4, -0.1)
    with pytest.raises(ParameterError):
        entropy_q(4, 1.1)
    with pytest.raises(ParameterError):
        entropy_q(1, 0.5)


@settings(max_examples=200)
@given(st.sampled_from([2, 4, 16, 256, 1024]), st.floats(0.001, 0.999))
def test_entropy_matches_oracle(q, x):
    assert entropy_q(q, x) == pytest.approx(_h_oracle(q, x), rel=1e-12, abs=1e-15)


@settings(max_examples=100)
@given(st.sampled_from([2, 4, 16, 256]), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_entropy_increasing_and_concave(q, a, b):
    top = 1 - 1 / q
    x, y = sorted((a * top, b * top))
    assert entropy_q(q, x) <= entropy_q(q, y) + 1e-15
    mid = entropy_q(q, (x + y) / 2)
    assert mid >= (entropy_q(q, x) + entropy_q(q, y)) / 2 - 1e-12


def test_vg_rate_examples():
    assert vg_rate(7, 0) == 1
    assert vg_rate(1024, 1 - 2**-7) == pytest.approx(0.00136, abs=5e-6)
    with pytest.raises(ParameterError):
        vg_rate(2, 0.5)  # R=0 lies on the excluded edge
    assert 1 - entropy_q(2, 0.5) == 0


def test_success_probability_example():
    b = success_probability(1024, 2**18, 2**-14)
    # 1 - P = 1024^(1 - 16) = 2^-150
    assert b.log10_one_minus_P == pytest.approx(-150 * math.log10(2), rel=1e-12)
    assert b.neg_log10_one_minus_P == pytest.approx(45.1545, abs=1e-4)
    assert b.P == 1.0 and not b.vacuous


def test_success_probability_small_cases():
    assert success_probability(2, 100, 0.1).P == pytest.approx(1 - 2**-9, rel=1e-15)
    b = success_probability(2, 100, 0.01)
    assert b.P == 0 and b.vacuous
    assert success_probability(2, 10, 0.05).vacuous


def test_example_parameter_set():
    ps = plan_example(2**10, 2**18, 1 - 2**-7, 2**-14)
    assert ps.k == 340
    assert ps.lambda2 == pytest.approx(1 / 128)
    assert ps.word_bits == 28
    assert ps.rate == pytest.approx(0.419, abs=1e-3)
    assert ps.message_bits == 3400
    ps2 = plan_example(2**10, 2**18, 1 - 2**-7, 2**-14, ell=2)
    assert ps2.lambda2 == pytest.approx(0.00006, abs=5e-6)
    assert ps2.word_bits == 56


def test_dimension_oracle():
    raw = (1 - _h_oracle(1024, 1 - 2**-7) - 2**-14) * 2**18
    assert raw == pytest.approx(340.7556, abs=1e-3)
    assert dimension_for(1024, 2**18, 1 - 2**-7, 2**-14) == math.floor(raw)


def test_zero_distance():
    ps = plan_example(16, 1000, 0.0, 0.1)
    assert ps.lambda2_single == 1
    assert ps.k == 900


def test_plan_hypotheses():
    with pytest.raises(ParameterError):
        plan_example(16, 100, 0.95, 0.01)  # delta >= 1 - 1/q
    with pytest.raises(ParameterError):
        plan_example(16, 100, 0.5, 0.9)  # eps too large
    with pytest.raises(ParameterError):
        plan_example(16, 100, 0.5, 0.0)
    with pytest.raises(ParameterError):
        plan_example(16, 100, 0.5, 0.01, ell=0)


def test_as_kv_keys():
    kv = plan_example(2**10, 2**18, 1 - 2**-7, 2**-14).as_kv()
    assert kv["k"] == 340
    assert kv["word_bits"] == "28"
    assert float(kv["log10_one_minus_P"]) == pytest.approx(-45.1545, abs=1e-4)


def test_growth_schedule_toward_limits():
    pts = growth_schedule()
    rep = optimality_check(pts)
    assert rep.all_toward_limits
    qs = [r.log_q_over_log_n for r in rep.rows]
    assert qs == pytest.approx([0.5, 1 / 3, 0.25])


def test_constant_q_growing_n():
    pts = [ParamSet(16, n, n // 2, 0.1, 0.01) for n in (2**8, 2**12, 2**16)]
    rep = optimality_check(pts)
    assert rep.trends["log_q_over_log_n"] == "toward-limit"
    assert rep.trends["delta"] == "no trend"


def test_constant_n_no_trend():
    pts = [ParamSet(16, 1024, 100, 0.5, 0.01)] * 3
    rep = optimality_check(pts)
    assert set(rep.trends.values()) == {"no trend"}


def test_optimality_too_few_points():
    with pytest.raises(ParameterError):
        optimality_check(growth_schedule()[:2])
