"""Exact arithmetic in real quadratic extensions Q(sqrt(D)).

A :class:`Quad` stores the real number ``x + y*sqrt(d)`` with ``x``, ``y``
and ``d`` exact rationals, ``d >= 0``.  Sign, comparison and floor are
decided exactly (integer arithmetic only), so every rounding decision made
downstream is provably correct.

Canonical form: if ``d`` is the square of a rational the irrational part is
folded into ``x`` (and ``d`` is kept for display only); otherwise square
factors of the radicand are extracted into ``y``, so values built over
radicands like 8, 9q or p/s all land in the same representation.  Square
extraction uses trial division up to 1000 plus a perfect-square test on the
remainder; radicands up to 10**6 are therefore fully reduced, which covers
every field this package computes in.  Signs, floors and comparisons do not
depend on the reduction being complete.

Values are immutable and all operations are pure; instances can be shared
freely across threads.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt

from .errors import DomainError, RadicandMismatch

_SQUARE_TRIAL_LIMIT = 1000

RationalLike = "Fraction | int"


def _square_part(n: int) -> tuple[int, int]:
    """Split n >= 1 as s*s*m with m free of squares up to the trial limit."""
    s, m = 1, n
    while m % 4 == 0:
        m //= 4
        s *= 2
    d = 3
    while d <= _SQUARE_TRIAL_LIMIT:
        dd = d * d
        if dd > m:
            break
        while m % dd == 0:
            m //= dd
            s *= d
        d += 2
    r = isqrt(m)
    if r * r == m:
        s, m = s * r, 1
    return s, m


def _sign(r: Fraction) -> int:
    if r > 0:
        return 1
    if r < 0:
        return -1
    return 0


def _floor(r: Fraction) -> int:
    return r.numerator // r.denominator


class Quad:
    """The real number ``x + y*sqrt(d)`` over exact rationals."""

    __slots__ = ("x", "y", "d")

    x: Fraction
    y: Fraction
    d: Fraction

    def __init__(self, x, y=0, d=0):
        x = Fraction(x)
        y = Fraction(y)
        d = Fraction(d)
        if d < 0:
            raise DomainError(f"negative radicand: {d}")
        if y != 0 and d != 0:
            # sqrt(a/b) = sqrt(a*b)/b = (s/b)*sqrt(m) with m square-reduced
            m = d.numerator * d.denominator
            s, core = _square_part(m)
            if core == 1:
                x += y * Fraction(s, d.denominator)
                y = Fraction(0)
            else:
                y *= Fraction(s, d.denominator)
                d = Fraction(core)
        elif y != 0:
            y = Fraction(0)  # y*sqrt(0) == 0
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Quad values are immutable")

    @classmethod
    def _raw(cls, x: Fraction, y: Fraction, d: Fraction) -> "Quad":
        """Internal constructor for results whose radicand is already canonical."""
        self = object.__new__(cls)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y if d != 0 else Fraction(0))
        object.__setattr__(self, "d", d)
        return self

    @classmethod
    def sqrt(cls, d) -> "Quad":
        return cls(0, 1, d)

    # -- predicates ------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.y == 0

    def as_fraction(self) -> Fraction:
        if self.y != 0:
            raise DomainError(f"{self} is irrational")
        return self.x

    def is_integer(self) -> bool:
        return self.y == 0 and self.x.denominator == 1

    # -- coercion and radicand matching ----------------------------------

    @staticmethod
    def _coerce(value) -> "Quad":
        if isinstance(value, Quad):
            return value
        if isinstance(value, (int, Fraction)):
            return Quad._raw(Fraction(value), Fraction(0), Fraction(0))
        return NotImplemented  # type: ignore[return-value]

    def _common_radicand(self, other: "Quad") -> Fraction:
        if self.y == 0:
            return other.d
        if other.y == 0:
            return self.d
        if self.d != other.d:
            raise RadicandMismatch(f"sqrt({self.d}) vs sqrt({other.d})")
        return self.d

    # -- field arithmetic -------------------------------------------------

    def __add__(self, other):
        other = Quad._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._common_radicand(other)
        return Quad._raw(self.x + other.x, self.y + other.y, d)

    __radd__ = __add__

    def __neg__(self):
        return Quad._raw(-self.x, -self.y, self.d)

    def __sub__(self, other):
        other = Quad._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other):
        other = Quad._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__add__(-self)

    def __mul__(self, other):
        other = Quad._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._common_radicand(other)
        x = self.x * other.x + self.y * other.y * d
        y = self.x * other.y + other.x * self.y
        return Quad._raw(x, y, d)

    __rmul__ = __mul__

    def inverse(self) -> "Quad":
        norm = self.x * self.x - self.y * self.y * self.d
        if norm == 0:
            # x^2 == y^2 d with canonical d happens only at zero
            raise ZeroDivisionError("inversion of zero")
        return Quad._raw(self.x / norm, -self.y / norm, self.d)

    def __truediv__(self, other):
        other = Quad._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.__mul__(other.inverse())

    def __rtruediv__(self, other):
        other = Quad._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__truediv__(self)

    # -- exact decisions ---------------------------------------------------

    def sign(self) -> int:
        """Sign of the represented real number, decided exactly."""
        if self.y == 0:
            return _sign(self.x)
        if self.x == 0:
            return _sign(self.y)
        sx, sy = _sign(self.x), _sign(self.y)
        if sx == sy:
            return sx
        xx = self.x * self.x
        yyd = self.y * self.y * self.d
        if xx == yyd:
            return 0
        return sx if xx > yyd else sy

    def _at_least(self, n: int) -> bool:
        """Exact test self >= n for an integer n."""
        a = self.x - n
        if self.y == 0:
            return a >= 0
        if self.y > 0:
            if a >= 0:
                return True
            return self.y * self.y * self.d >= a * a
        if a < 0:
            return False
        return a * a >= self.y * self.y * self.d

    def floor(self) -> int:
        """The unique integer n with n <= self < n + 1, certified exactly."""
        if self.y == 0:
            return _floor(self.x)
        s = self.y * self.y * self.d
        m = isqrt(s.numerator * s.denominator) // s.denominator
        n = _floor(self.x) + (m if self.y > 0 else -m - 1)
        while self._at_least(n + 1):
            n += 1
        while not self._at_least(n):
            n -= 1
        return n

    def ceil(self) -> int:
        return -(-self).floor()

    def compare(self, other) -> int:
        """Exact ordering: -1, 0 or +1 for self <, ==, > other.

        Unlike the field operations, comparison also handles operands over
        two different radicands: the sign of a + b*sqrt(d1) - c*sqrt(d2) is
        decided by one more exact squaring, over the radicand d1*d2.
        """
        other = Quad._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare Quad with {type(other).__name__}")
        if self.y == 0 or other.y == 0 or self.d == other.d:
            return (self - other).sign()
        a = self.x - other.x
        lhs = self.y * self.y * self.d
        rhs = other.y * other.y * other.d
        s1, s2 = _sign(self.y), _sign(other.y)
        if s1 == s2:
            sign_b = 0 if lhs == rhs else (s1 if lhs > rhs else -s1)
        else:
            sign_b = s1  # strict: both root terms pull the same way
        if sign_b == 0:
            return _sign(a)
        if a == 0:
            return sign_b
        if _sign(a) == sign_b:
            return sign_b
        # a and the root difference pull in opposite directions: compare
        # a^2 against (y1*sqrt(d1) - y2*sqrt(d2))^2 exactly
        c = Quad(a * a - lhs - rhs, 2 * self.y * other.y, self.d * other.d)
        sc = c.sign()
        if sc == 0:
            return 0
        return _sign(a) if sc > 0 else sign_b

    def __eq__(self, other):
        other = Quad._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.y == 0 and other.y == 0:
            return self.x == other.x
        # x + y sqrt(d) == x' + y' sqrt(d') iff the rational and irrational
        # parts agree; the latter is an exact integer comparison.
        return (self.x == other.x
                and _sign(self.y) == _sign(other.y)
                and self.y * self.y * self.d == other.y * other.y * other.d)

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        if self.y == 0:
            return hash(self.x)
        return hash((self.x, _sign(self.y), self.y * self.y * self.d))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    # -- rendering ---------------------------------------------------------

    def __repr__(self):
        return f"Quad({self.x!r}, {self.y!r}, {self.d!r})"

    def __str__(self):
        return render_quad(self)

    def __float__(self):
        import math

        return float(self.x) + float(self.y) * math.sqrt(float(self.d))


def render_quad(u: Quad) -> str:
    """Render as ``x + y*sqrt(D)`` with all parts reduced fractions."""
    if u.y == 0:
        return str(u.x)
    op = "+" if u.y > 0 else "-"
    return f"{u.x} {op} {abs(u.y)}*sqrt({u.d})"


_FRACTION = r"-?\d+(?:/\d+)?"
_QUAD_RE = re.compile(
    rf"^\s*({_FRACTION})\s*([+-])\s*({_FRACTION})\*sqrt\(({_FRACTION})\)\s*$"
)
_RATIONAL_RE = re.compile(rf"^\s*({_FRACTION})\s*$")


def parse_quad(text: str) -> Quad:
    """Parse the rendering produced by :func:`render_quad`."""
    m = _RATIONAL_RE.match(text)
    if m:
        return Quad(Fraction(m.group(1)))
    m = _QUAD_RE.match(text)
    if m is None:
        raise DomainError(f"not a quadratic-irrational literal: {text!r}")
    x = Fraction(m.group(1))
    y = Fraction(m.group(3))
    if m.group(2) == "-":
        y = -y
    return Quad(x, y, Fraction(m.group(4)))
