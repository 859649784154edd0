"""GF(2^7) arithmetic modulo x^7 + x^3 + 1, via log/antilog tables.

Elements are 7-bit integers in polynomial representation (bit i is the
coefficient of x^i). alpha = x is primitive, so the 127 nonzero elements
are alpha^0 .. alpha^126 and multiplication reduces to index addition.
"""

from __future__ import annotations

PRIMITIVE_POLY = 0b10001001  # x^7 + x^3 + 1
FIELD_BITS = 7
ORDER = (1 << FIELD_BITS) - 1  # 127 nonzero elements

EXP = [0] * (2 * ORDER)
LOG = [0] * (ORDER + 1)

_x = 1
for _i in range(ORDER):
    EXP[_i] = _x
    LOG[_x] = _i
    _x <<= 1
    if _x & (1 << FIELD_BITS):
        _x ^= PRIMITIVE_POLY
for _i in range(ORDER, 2 * ORDER):
    EXP[_i] = EXP[_i - ORDER]
del _x, _i


def gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def gf_inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("zero has no inverse in GF(128)")
    return EXP[ORDER - LOG[a]]


def gf_pow(a: int, e: int) -> int:
    if a == 0:
        if e == 0:
            return 1
        if e < 0:
            raise ZeroDivisionError("negative power of zero")
        return 0
    return EXP[(LOG[a] * e) % ORDER]


def alpha_pow(e: int) -> int:
    """alpha^e for any integer exponent."""
    return EXP[e % ORDER]


class GF128Element:
    """Thin wrapper giving operator syntax over the table arithmetic."""

    __slots__ = ("value",)

    def __init__(self, value: int):
        if not 0 <= value < (1 << FIELD_BITS):
            raise ValueError(f"value {value} outside GF(128)")
        self.value = value

    @classmethod
    def alpha(cls) -> "GF128Element":
        return cls(2)

    def __add__(self, other: "GF128Element") -> "GF128Element":
        return GF128Element(self.value ^ other.value)

    __sub__ = __add__

    def __mul__(self, other: "GF128Element") -> "GF128Element":
        return GF128Element(gf_mul(self.value, other.value))

    def __pow__(self, e: int) -> "GF128Element":
        return GF128Element(gf_pow(self.value, e))

    def inverse(self) -> "GF128Element":
        return GF128Element(gf_inv(self.value))

    def __eq__(self, other) -> bool:
        return isinstance(other, GF128Element) and self.value == other.value

    def __hash__(self) -> int:
        return hash(("gf128", self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"GF128Element({self.value:#09b})"
