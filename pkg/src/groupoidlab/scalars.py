"""Exact complex rationals (Gaussian rationals) on gmpy2.mpq, with a Fraction fallback."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

__all__ = ["QQi", "Q", "ZERO", "ONE", "I", "parse_scalar"]


try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    Q = Fraction

_Q0 = Q(0)


def _new(re, im) -> QQi:
    z = object.__new__(QQi)
    object.__setattr__(z, "re", re)
    object.__setattr__(z, "im", im)
    return z


class QQi:
    """A complex number ``re + im*i`` with arbitrary-precision rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Q(Fraction(re)) if isinstance(re, float) else Q(re))
        object.__setattr__(self, "im", Q(Fraction(im)) if isinstance(im, float) else Q(im))

    def __setattr__(self, name, value):
        raise AttributeError("QQi is immutable")

    def __reduce__(self):
        return (QQi, (Fraction(int(self.re.numerator), int(self.re.denominator)),
                      Fraction(int(self.im.numerator), int(self.im.denominator))))

    @classmethod
    def coerce(cls, value) -> QQi:
        if type(value) is QQi:
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, (int, Rational, float)) or type(value) is type(_Q0):
            return cls(value, 0)
        if isinstance(value, str):
            return parse_scalar(value)
        raise TypeError(f"cannot coerce {value!r} to QQi")

    def __add__(self, other):
        o = other if type(other) is QQi else QQi.coerce(other)
        return _new(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = other if type(other) is QQi else QQi.coerce(other)
        return _new(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return QQi.coerce(other) - self

    def __mul__(self, other):
        o = other if type(other) is QQi else QQi.coerce(other)
        if not self.im and not o.im:
            return _new(self.re * o.re, _Q0)
        return _new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = other if type(other) is QQi else QQi.coerce(other)
        n = o.abs2()
        if n == 0:
            raise ZeroDivisionError("QQi division by zero")
        num = self * o.conjugate()
        return _new(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        return QQi.coerce(other) / self

    def __neg__(self):
        return _new(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if type(other) is not QQi:
            try:
                other = QQi.coerce(other)
            except TypeError:
                return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def conjugate(self) -> QQi:
        return _new(self.re, -self.im)

    def abs2(self):
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return abs(complex(self))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QQi({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = QQi(0)
ONE = QQi(1)
I = QQi(0, 1)

_RAT = r"[+-]?\d+(?:/\d+)?"
_SCALAR = re.compile(
    rf"^(?:(?P<re>{_RAT})(?:(?P<im>[+-]\d+(?:/\d+)?|[+-])i)?|(?P<imonly>{_RAT}|[+-]?)i)$"
)


def parse_scalar(text: str) -> QQi:
    """Parse ``p/q``, ``p/q+r/si``, ``-i`` style literals into an exact scalar."""
    s = text.replace(" ", "")
    m = _SCALAR.match(s)
    if not m:
        raise ValueError(f"malformed scalar literal {text!r}")
    if m.group("imonly") is not None:
        im = m.group("imonly")
        return QQi(0, Fraction(im + "1" if im in ("", "+", "-") else im))
    re_part = Fraction(m.group("re"))
    im = m.group("im")
    if im is None:
        return QQi(re_part, 0)
    return QQi(re_part, Fraction(im + "1" if im in ("+", "-") else im))
