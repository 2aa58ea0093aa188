"""Exact arithmetic in Q(i, sqrt2).

An element is stored as four rationals ``(r0, r1, r2, r3)`` standing for
``r0 + r1*i + r2*s + r3*i*s`` with ``s = sqrt(2)``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpq

__all__ = ["Scalar", "ScalarParseError", "parse_scalar", "ZERO", "ONE", "I", "SQRT2"]


def _q(x) -> mpq:
    if isinstance(x, mpq):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class Scalar:
    __slots__ = ("r0", "r1", "r2", "r3", "_hash")

    def __init__(self, r0=0, r1=0, r2=0, r3=0):
        self.r0 = _q(r0)
        self.r1 = _q(r1)
        self.r2 = _q(r2)
        self.r3 = _q(r3)
        self._hash = None

    @classmethod
    def _raw(cls, r0, r1, r2, r3) -> Scalar:
        obj = object.__new__(cls)
        obj.r0, obj.r1, obj.r2, obj.r3 = r0, r1, r2, r3
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, x) -> Scalar:
        if isinstance(x, Scalar):
            return x
        if isinstance(x, str):
            return parse_scalar(x)
        return cls._raw(_q(x), _Z, _Z, _Z)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not (self.r0 or self.r1 or self.r2 or self.r3)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not (self.r1 or self.r2 or self.r3)

    def is_one(self) -> bool:
        return self.r0 == 1 and not (self.r1 or self.r2 or self.r3)

    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return tuple(Fraction(int(c.numerator), int(c.denominator)) for c in
                     (self.r0, self.r1, self.r2, self.r3))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction, type(_Z))):
                other = Scalar.coerce(other)
            else:
                return NotImplemented
        return (self.r0 == other.r0 and self.r1 == other.r1
                and self.r2 == other.r2 and self.r3 == other.r3)

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(int(self.r0.numerator), int(self.r0.denominator)))
            else:
                self._hash = hash((self.r0, self.r1, self.r2, self.r3))
        return self._hash

    # -- ring operations --------------------------------------------------
    def __add__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction, type(_Z))):
                return Scalar._raw(self.r0 + _q(other), self.r1, self.r2, self.r3)
            return NotImplemented
        return Scalar._raw(self.r0 + other.r0, self.r1 + other.r1,
                           self.r2 + other.r2, self.r3 + other.r3)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar._raw(-self.r0, -self.r1, -self.r2, -self.r3)

    def __sub__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction, type(_Z))):
                return Scalar._raw(self.r0 - _q(other), self.r1, self.r2, self.r3)
            return NotImplemented
        return Scalar._raw(self.r0 - other.r0, self.r1 - other.r1,
                           self.r2 - other.r2, self.r3 - other.r3)

    def __rsub__(self, other) -> Scalar:
        return (-self) + other

    def __mul__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction, type(_Z))):
                c = _q(other)
                return Scalar._raw(self.r0 * c, self.r1 * c, self.r2 * c, self.r3 * c)
            return NotImplemented
        a, b, c, d = self.r0, self.r1, self.r2, self.r3
        e, f, g, h = other.r0, other.r1, other.r2, other.r3
        if not (b or c or d):
            if not (f or g or h):
                return Scalar._raw(a * e, _Z, _Z, _Z)
            return Scalar._raw(a * e, a * f, a * g, a * h)
        if not (f or g or h):
            return Scalar._raw(a * e, b * e, c * e, d * e)
        return Scalar._raw(
            a * e - b * f + 2 * (c * g - d * h),
            a * f + b * e + 2 * (c * h + d * g),
            a * g + c * e - b * h - d * f,
            a * h + d * e + b * g + c * f,
        )

    __rmul__ = __mul__

    def conj_i(self) -> Scalar:
        """Image under i -> -i."""
        return Scalar._raw(self.r0, -self.r1, self.r2, -self.r3)

    def conj_s(self) -> Scalar:
        """Image under sqrt2 -> -sqrt2."""
        return Scalar._raw(self.r0, self.r1, -self.r2, -self.r3)

    def inverse(self) -> Scalar:
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(i, sqrt2)")
        if self.is_rational():
            return Scalar._raw(1 / self.r0, _Z, _Z, _Z)
        # x * conj_i(x) lies in Q(sqrt2); times its sqrt2-conjugate it is rational
        y = self * self.conj_i()
        n = y.r0 * y.r0 - 2 * y.r2 * y.r2
        return self.conj_i() * y.conj_s() * (1 / n)

    def __truediv__(self, other) -> Scalar:
        other = Scalar.coerce(other)
        if other.is_rational():
            if not other.r0:
                raise ZeroDivisionError("division by zero in Q(i, sqrt2)")
            c = 1 / other.r0
            return Scalar._raw(self.r0 * c, self.r1 * c, self.r2 * c, self.r3 * c)
        return self * other.inverse()

    def __rtruediv__(self, other) -> Scalar:
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> Scalar:
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def to_complex(self) -> complex:
        s = 2 ** 0.5
        return complex(float(self.r0) + float(self.r2) * s, float(self.r1) + float(self.r3) * s)

    # -- text -------------------------------------------------------------
    def __str__(self) -> str:
        parts = []
        for value, unit in ((self.r0, ""), (self.r1, "*i"), (self.r2, "*s"), (self.r3, "*i*s")):
            if not value:
                continue
            text = _fmt_rational(abs(value)) + unit
            sign = "-" if value < 0 else "+"
            if not parts:
                parts.append(("-" if value < 0 else "") + text)
            else:
                parts.append(sign + text)
        return "".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"Scalar('{self}')"


def _fmt_rational(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


_Z = mpq(0)

ZERO = Scalar()
ONE = Scalar(1)
I = Scalar(0, 1)
SQRT2 = Scalar(0, 0, 1)


class ScalarParseError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


_NUMBER = re.compile(r"\d+(?:/\d+)?")
_INNER_SPACE = re.compile(r"[\w/*]\s+[\w/*]")


def parse_scalar(text: str) -> Scalar:
    """Parse ``p/q``, ``p/q*i``, ``p/q*s``, ``p/q*i*s`` terms joined by +/-.

    A bare unit (``i``, ``s``, ``i*s``) stands for coefficient 1.
    """
    gap = _INNER_SPACE.search(text)
    if gap:
        raise ScalarParseError("whitespace inside a term", text, gap.start() + 1)
    src = re.sub(r"\s+", "", text)
    if not src:
        raise ScalarParseError("empty scalar", text, 0)
    acc = [mpq(0)] * 4
    pos = 0
    first = True
    while pos < len(src):
        sign = 1
        if src[pos] in "+-":
            sign = -1 if src[pos] == "-" else 1
            pos += 1
        elif not first:
            raise ScalarParseError("expected '+' or '-'", text, pos)
        first = False
        coeff = mpq(1)
        units = []
        m = _NUMBER.match(src, pos)
        if m:
            coeff = mpq(m.group(0))
            pos = m.end()
            expect_unit = False
            if pos < len(src) and src[pos] == "*":
                pos += 1
                expect_unit = True
        else:
            expect_unit = True
        while expect_unit:
            if pos < len(src) and src[pos] in "is":
                units.append(src[pos])
                pos += 1
            else:
                raise ScalarParseError("expected number or unit 'i'/'s'", text, pos)
            expect_unit = pos < len(src) and src[pos] == "*"
            if expect_unit:
                pos += 1
        if pos < len(src) and src[pos] not in "+-":
            raise ScalarParseError(f"unexpected character {src[pos]!r}", text, pos)
        if units.count("i") > 1 or units.count("s") > 1:
            raise ScalarParseError("repeated unit in term", text, pos)
        slot = ("i" in units) + 2 * ("s" in units)
        acc[slot] += sign * coeff
    return Scalar._raw(*acc)
