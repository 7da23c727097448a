import pickle
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from identcodes.errors import FieldMismatchError, LengthMismatchError, ParameterError
from identcodes.gf import (
    REDUCTION_POLYS,
    FieldVector,
    add,
    clmul_mod,
    dot,
    field_new,
    is_irreducible,
    mul,
)


def _roots_in_f2(p):
    # evaluate at x=0 and x=1
    return [x for x in (0, 1) if (p & 1 if x == 0 else bin(p).count("1") % 2) == 0]


def _naive_irreducible(p):
    """Independent check: no factor of degree 1..deg/2 via polynomial long division."""
    d = p.bit_length() - 1
    for f in range(2, 1 << (d // 2 + 1)):
        r = p
        df = f.bit_length() - 1
        for shift in range(d - df, -1, -1):
            if r >> (shift + df) & 1:
                r ^= f << shift
        if r == 0:
            return False
    return True


def test_field_new_m1():
    f = field_new(1)
    assert f.q == 2
    assert f.reduction_poly == 0b11


def test_field_new_m10_order():
    assert field_new(10).q == 1024


def test_m8_poly_irreducible():
    f = field_new(8)
    assert f.q == 256
    assert f.reduction_poly == 0x11B  # x^8 + x^4 + x^3 + x + 1
    assert _roots_in_f2(0x11B) == []
    assert _naive_irreducible(0x11B)


def test_pinned_table_is_least_irreducible():
    for m, poly in REDUCTION_POLYS.items():
        assert poly.bit_length() - 1 == m
        assert _naive_irreducible(poly)
        smaller = [p for p in range((1 << m) | 1, poly, 2) if _naive_irreducible(p)]
        assert smaller == [], m


def test_is_irreducible_rejects_reducible():
    assert not is_irreducible(0b101)  # (x+1)^2
    assert not is_irreducible(0x11A)  # divisible by x


@pytest.mark.parametrize("m", [0, 17, -1])
def test_field_new_out_of_range(m):
    with pytest.raises(ParameterError):
        field_new(m)


def test_field_cached():
    assert field_new(5) is field_new(5)
    assert pickle.loads(pickle.dumps(field_new(5))) is field_new(5)


def test_add_examples():
    f = field_new(4)
    for x in range(16):
        assert add(f.element(0), f.element(x)).value == x
        assert add(f.element(x), f.element(x)).value == 0
    assert add(f.element(0x5), f.element(0x9)).value == 0x5 ^ 0x9 == 0xC


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        add(field_new(4).element(1), field_new(5).element(1))
    with pytest.raises(FieldMismatchError):
        mul(field_new(4).element(1), field_new(5).element(1))
    with pytest.raises(FieldMismatchError):
        dot(field_new(4).zeros(3), field_new(5).zeros(3))


def test_element_range_checked():
    with pytest.raises(ParameterError):
        field_new(4).element(16)
    with pytest.raises(ParameterError):
        FieldVector(field_new(2), (0, 4))


@pytest.mark.parametrize("m", range(1, 9))
def test_mul_matches_schoolbook_exhaustive(m):
    f = field_new(m)
    for a in range(f.q):
        for b in range(f.q):
            assert f.mul(a, b) == clmul_mod(a, b, f.reduction_poly)


def _pow_by_squaring(f, a, e):
    r = 1
    while e:
        if e & 1:
            r = clmul_mod(r, a, f.reduction_poly)
        a = clmul_mod(a, a, f.reduction_poly)
        e >>= 1
    return r


@pytest.mark.parametrize("m", range(1, 9))
def test_fermat_exhaustive(m):
    f = field_new(m)
    for a in range(1, f.q):
        assert _pow_by_squaring(f, a, f.q - 1) == 1
        assert f.pow(a, f.q - 1) == 1


@pytest.mark.parametrize("m", range(1, 9))
def test_inverse_exhaustive(m):
    f = field_new(m)
    for a in range(1, f.q):
        assert f.mul(a, f.inv(a)) == 1
        assert f.inv(a) == _pow_by_squaring(f, a, f.q - 2)
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


def test_identity_and_annihilator():
    f = field_new(6)
    for x in range(f.q):
        assert mul(f.one, f.element(x)).value == x
        assert mul(f.zero, f.element(x)).value == 0


def test_gf2_is_and():
    f = field_new(1)
    for a in (0, 1):
        for b in (0, 1):
            assert f.mul(a, b) == a & b


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_field_axioms_exhaustive(m):
    f = field_new(m)
    r = range(f.q)
    for a in r:
        for b in r:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            for c in r:
                assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@settings(max_examples=300)
@given(st.integers(5, 16), st.data())
def test_field_axioms_random(m, data):
    f = field_new(m)
    el = st.integers(0, f.q - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.mul(a, b) == clmul_mod(a, b, f.reduction_poly)


def test_dot_zero_and_basis():
    f = field_new(8)
    rng = random.Random(1)
    g = f.vector(rng.randrange(256) for _ in range(10))
    assert dot(f.zeros(10), g).value == 0
    for j in range(10):
        assert dot(f.basis(10, j), g).value == g.values[j]


def test_dot_matches_double_loop_gf4():
    f = field_new(2)
    rng = random.Random(7)
    for _ in range(200):
        a = [rng.randrange(4) for _ in range(8)]
        b = [rng.randrange(4) for _ in range(8)]
        ref = 0
        for x, y in zip(a, b):
            ref ^= clmul_mod(x, y, f.reduction_poly)
        assert dot(f.vector(a), f.vector(b)).value == ref


def test_dot_length_mismatch():
    f = field_new(3)
    with pytest.raises(LengthMismatchError):
        dot(f.zeros(3), f.zeros(4))


@settings(max_examples=100)
@given(st.integers(1, 16), st.integers(1, 12), st.data())
def test_dot_linear(m, k, data):
    f = field_new(m)
    vec = st.lists(st.integers(0, f.q - 1), min_size=k, max_size=k)
    u, up, g = (f.vector(data.draw(vec)) for _ in range(3))
    assert dot(u + up, g) == add(dot(u, g), dot(up, g))


def test_element_operators():
    f = field_new(4)
    a, b = f.element(7), f.element(9)
    assert (a * b) / b == a
    assert a - a == f.zero
    assert a ** (f.q - 1) == f.one
    assert a * a.inverse() == f.one
