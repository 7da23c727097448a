"""Arithmetic in GF(2^m) for 1 <= m <= 16.

Elements are stored as integers in ``[0, 2^m)`` whose bits are polynomial
coefficients over GF(2); bit ``j`` is the coefficient of ``x^j``.  Addition
is XOR, multiplication goes through log/antilog tables built once per field.

Two layers are exposed:

* ``FieldSpec`` methods work on raw ints and are what the hot loops use.
* ``FieldElement`` / ``FieldVector`` wrap values together with their field
  and refuse to mix fields.

Pinned reduction polynomials (lexicographically least irreducible of each
degree with nonzero constant term)::

    m   poly        m   poly
    1   0x3         9   0x203
    2   0x7         10  0x409
    3   0xb         11  0x805
    4   0x13        12  0x1009
    5   0x25        13  0x201b
    6   0x43        14  0x4021
    7   0x83        15  0x8003
    8   0x11b       16  0x1002b
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import FieldMismatchError, LengthMismatchError, ParameterError

MAX_M = 16

REDUCTION_POLYS = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x203,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
}


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, b: int) -> int:
    """Remainder of GF(2)[x] division ``a mod b``."""
    db = poly_degree(b)
    while a and poly_degree(a) >= db:
        a ^= b << (poly_degree(a) - db)
    return a


def is_irreducible(p: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(p)//2."""
    d = poly_degree(p)
    if d < 1:
        return False
    for f in range(2, 1 << (d // 2 + 1)):
        if poly_mod(p, f) == 0:
            return False
    return True


def clmul_mod(a: int, b: int, poly: int) -> int:
    """Schoolbook shift-and-add product of ``a*b mod poly``, no tables."""
    m = poly_degree(poly)
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> m & 1:
            a ^= poly
    return r


class FieldSpec:
    """The field GF(2^m) with the pinned reduction polynomial for ``m``.

    Instances are immutable and safe to share between threads.  Use
    :func:`field_new` rather than the constructor so each ``m`` maps to a
    single cached instance.
    """

    __slots__ = ("m", "q", "reduction_poly", "generator", "_exp", "_log", "_order")

    def __init__(self, m: int, reduction_poly: int | None = None):
        if not isinstance(m, int) or not 1 <= m <= MAX_M:
            raise ParameterError(f"field bit-width m must be in 1..{MAX_M}, got {m!r}")
        poly = REDUCTION_POLYS[m] if reduction_poly is None else reduction_poly
        if poly_degree(poly) != m or not is_irreducible(poly):
            raise ParameterError(f"{poly:#x} is not an irreducible polynomial of degree {m}")
        self.m = m
        self.q = 1 << m
        self.reduction_poly = poly
        self._order = self.q - 1
        self.generator, self._exp, self._log = self._build_tables()

    def _build_tables(self):
        # The pinned polynomial need not be primitive (0x11b is not), so
        # search for a generator of the multiplicative group.
        order = self._order
        for g in range(1 if self.q == 2 else 2, self.q):
            exp = [0] * (2 * order)
            log = [0] * self.q
            x = 1
            ok = True
            for i in range(order):
                if i and x == 1:
                    ok = False
                    break
                exp[i] = x
                log[x] = i
                x = clmul_mod(x, g, self.reduction_poly)
            if ok:
                exp[order:] = exp[:order]
                return g, exp, log
        raise AssertionError("no generator found")  # pragma: no cover

    def __repr__(self) -> str:
        return f"FieldSpec(m={self.m}, reduction_poly={self.reduction_poly:#x})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return self.m == other.m and self.reduction_poly == other.reduction_poly

    def __hash__(self) -> int:
        return hash((self.m, self.reduction_poly))

    def __reduce__(self):
        if self.reduction_poly == REDUCTION_POLYS[self.m]:
            return field_new, (self.m,)
        return FieldSpec, (self.m, self.reduction_poly)

    # raw-int arithmetic

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ParameterError(f"{a!r} is not an element of GF(2^{self.m})")
        return a

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    sub = add

    @staticmethod
    def neg(a: int) -> int:
        return a

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._exp[(self._order - self._log[a]) % self._order]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self._order]

    def dot(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Scalar product of two raw int sequences of equal length."""
        if len(a) != len(b):
            raise LengthMismatchError(f"length mismatch: {len(a)} vs {len(b)}")
        exp, log = self._exp, self._log
        acc = 0
        for x, y in zip(a, b):
            if x and y:
                acc ^= exp[log[x] + log[y]]
        return acc

    def scale(self, c: int, a: Iterable[int]) -> list[int]:
        return [self.mul(c, x) for x in a]

    # wrapped values

    def element(self, value: int) -> FieldElement:
        return FieldElement(self.check(value), self)

    def vector(self, values: Iterable[int]) -> FieldVector:
        return FieldVector(self, tuple(values))

    def zeros(self, length: int) -> FieldVector:
        return FieldVector(self, (0,) * length)

    def basis(self, length: int, j: int) -> FieldVector:
        return FieldVector(self, tuple(1 if t == j else 0 for t in range(length)))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self)


@lru_cache(maxsize=None)
def field_new(m: int) -> FieldSpec:
    """Return the (cached) field GF(2^m) with its pinned reduction polynomial."""
    return FieldSpec(m)


def _same_field(a, b) -> FieldSpec:
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field!r} vs {b.field!r}")
    return a.field


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: FieldSpec

    def __post_init__(self):
        self.field.check(self.value)

    def __add__(self, other: FieldElement) -> FieldElement:
        return add(self, other)

    __sub__ = __add__

    def __neg__(self) -> FieldElement:
        return self

    def __mul__(self, other: FieldElement) -> FieldElement:
        return mul(self, other)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        f = _same_field(self, other)
        return FieldElement(f.div(self.value, other.value), f)

    def __pow__(self, e: int) -> FieldElement:
        return FieldElement(self.field.pow(self.value, e), self.field)

    def inverse(self) -> FieldElement:
        return FieldElement(self.field.inv(self.value), self.field)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"GF(2^{self.field.m})({self.value:#x})"


@dataclass(frozen=True)
class FieldVector:
    field: FieldSpec
    values: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.values, tuple):
            object.__setattr__(self, "values", tuple(self.values))
        q = self.field.q
        for v in self.values:
            if not 0 <= v < q:
                raise ParameterError(f"{v!r} is not an element of GF(2^{self.field.m})")

    @classmethod
    def trusted(cls, field: FieldSpec, values: tuple[int, ...]) -> FieldVector:
        """Construct without range checks; for values produced by field ops."""
        v = object.__new__(cls)
        object.__setattr__(v, "field", field)
        object.__setattr__(v, "values", values)
        return v

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, j: int) -> FieldElement:
        return FieldElement(self.values[j], self.field)

    def __iter__(self):
        f = self.field
        return (FieldElement(v, f) for v in self.values)

    def __add__(self, other: FieldVector) -> FieldVector:
        f = _same_field(self, other)
        if len(self) != len(other):
            raise LengthMismatchError(f"length mismatch: {len(self)} vs {len(other)}")
        return FieldVector(f, tuple(a ^ b for a, b in zip(self.values, other.values)))

    __sub__ = __add__

    def scale(self, c: FieldElement) -> FieldVector:
        f = _same_field(self, c)
        return FieldVector(f, tuple(f.scale(c.value, self.values)))

    def is_zero(self) -> bool:
        return not any(self.values)

    def __repr__(self) -> str:
        return f"FieldVector(m={self.field.m}, {list(self.values)})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    f = _same_field(a, b)
    return FieldElement(a.value ^ b.value, f)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    f = _same_field(a, b)
    return FieldElement(f.mul(a.value, b.value), f)


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def dot(a: FieldVector, b: FieldVector) -> FieldElement:
    f = _same_field(a, b)
    return FieldElement(f.dot(a.values, b.values), f)
