"""Exact arithmetic in real quadratic fields Q(sqrt(D)).

A :class:`QuadraticNumber` stands for ``(a + b*sqrt(D)) / 2``. Eigenvalues
of integer matrices that are roots of monic integer quadratics always fit
this shape with integer ``a`` and ``b``. Sums and products can leave the
half-integer lattice, so ``a`` and ``b`` are carried as rationals and
normalised back to ``int`` whenever they are integral.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from numbers import Rational

__all__ = [
    "QuadraticNumber",
    "square_free_part",
    "is_square_free",
    "is_perfect_square",
    "is_quadratic_integer",
]


def square_free_part(k: int) -> tuple[int, int]:
    """Return ``(sigma, theta)`` with ``k == sigma**2 * theta`` and theta square-free."""
    if k < 1:
        raise ValueError(f"square_free_part needs k >= 1, got {k}")
    sigma, theta = 1, 1
    rest = k
    p = 2
    while p * p <= rest:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        sigma *= p ** (e // 2)
        if e % 2:
            theta *= p
        p += 1 if p == 2 else 2
    theta *= rest
    return sigma, theta


def is_square_free(k: int) -> bool:
    return k >= 1 and square_free_part(k)[0] == 1


def is_perfect_square(k: int) -> bool:
    return k >= 0 and math.isqrt(k) ** 2 == k


def _norm_rational(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


@total_ordering
class QuadraticNumber:
    __slots__ = ("a", "b", "D")

    def __init__(self, a, b=0, D: int = 1):
        if not isinstance(D, int) or D < 1:
            raise ValueError(f"D must be a positive integer, got {D!r}")
        a, b = Fraction(a), Fraction(b)
        if b != 0 and D > 1:
            sigma, theta = square_free_part(D)
            b *= sigma
            D = theta
        if D == 1:
            a, b = a + b, Fraction(0)
        if b == 0:
            D = 1
        object.__setattr__(self, "a", _norm_rational(a))
        object.__setattr__(self, "b", _norm_rational(b))
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticNumber is immutable")

    @classmethod
    def from_rational(cls, x) -> QuadraticNumber:
        return cls(2 * Fraction(x), 0, 1)

    @classmethod
    def sqrt(cls, k: int) -> QuadraticNumber:
        """Exact square root of a nonnegative integer."""
        if k < 0:
            raise ValueError("negative radicand")
        if k == 0:
            return cls(0)
        return cls(0, 2, k)

    # -- inspection -------------------------------------------------------

    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.a) / 2

    @property
    def surd_coefficient(self) -> Fraction:
        return Fraction(self.b) / 2

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integer(self) -> bool:
        return self.b == 0 and Fraction(self.a) / 2 == int(Fraction(self.a) / 2)

    def has_integer_coordinates(self) -> bool:
        """True when ``a`` and ``b`` in ``(a + b*sqrt(D))/2`` are integers."""
        return isinstance(self.a, int) and isinstance(self.b, int)

    def conjugate(self) -> QuadraticNumber:
        return QuadraticNumber(self.a, -self.b, self.D)

    def __float__(self) -> float:
        return (float(self.a) + float(self.b) * math.sqrt(self.D)) / 2

    def sign(self) -> int:
        p, q = self.rational_part, self.surd_coefficient
        sp = (p > 0) - (p < 0)
        sq = (q > 0) - (q < 0)
        if sq == 0 or sp == sq:
            return sp or sq
        if sp == 0:
            return sq
        # opposite signs; p^2 == q^2 * D is impossible for square-free D > 1
        return sp if p * p > q * q * self.D else sq

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> QuadraticNumber:
        if isinstance(other, QuadraticNumber):
            if other.D != self.D and self.D != 1 and other.D != 1:
                raise ValueError(f"cannot combine sqrt({self.D}) and sqrt({other.D})")
            return other
        if isinstance(other, (int, Rational)):
            return QuadraticNumber.from_rational(other)
        return NotImplemented

    def _field(self, other: QuadraticNumber) -> int:
        return max(self.D, other.D)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadraticNumber(self.a + other.a, self.b + other.b, self._field(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-Fraction(self.a), -Fraction(self.b), self.D)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        D = self._field(other)
        p1, q1 = self.rational_part, self.surd_coefficient
        p2, q2 = other.rational_part, other.surd_coefficient
        p = p1 * p2 + q1 * q2 * D
        q = p1 * q2 + p2 * q1
        return QuadraticNumber(2 * p, 2 * q, D)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = QuadraticNumber(2)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        norm = other * other.conjugate()
        if norm == 0:
            raise ZeroDivisionError("division by zero quadratic number")
        num = self * other.conjugate()
        n = norm.rational_part
        return QuadraticNumber(Fraction(num.a) / n, Fraction(num.b) / n, num.D)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            other = QuadraticNumber.from_rational(other)
        if not isinstance(other, QuadraticNumber):
            return NotImplemented
        return (self.a, self.b, self.D) == (other.a, other.b, other.D)

    def __lt__(self, other):
        if isinstance(other, (int, Rational)):
            other = QuadraticNumber.from_rational(other)
        if not isinstance(other, QuadraticNumber):
            return NotImplemented
        if self.D != other.D and self.D != 1 and other.D != 1:
            return float(self) < float(other)
        return (self - other).sign() < 0

    def __hash__(self):
        return hash((self.a, self.b, self.D))

    def __repr__(self):
        return f"QuadraticNumber({self.a!r}, {self.b!r}, {self.D})"

    def __str__(self):
        if self.b == 0:
            half = Fraction(self.a) / 2
            return str(half.numerator) if half.denominator == 1 else f"{half}"
        p, q = self.rational_part, self.surd_coefficient
        surd = f"sqrt({self.D})" if abs(q) == 1 else f"{abs(q)}*sqrt({self.D})"
        sgn = "-" if q < 0 else "+"
        if p == 0:
            return f"-{surd}" if q < 0 else surd
        return f"{p} {sgn} {surd}"


def is_quadratic_integer(q: QuadraticNumber) -> bool:
    """Decide whether ``(a + b*sqrt(D))/2`` is an algebraic integer.

    For ``D`` congruent to 2 or 3 mod 4 both ``a`` and ``b`` must be even;
    for ``D`` congruent to 1 mod 4 (including ``D == 1``) they need equal parity.
    """
    if not q.has_integer_coordinates():
        return False
    if q.D % 4 == 1:
        return (q.a - q.b) % 2 == 0
    if q.D % 4 in (2, 3):
        return q.a % 2 == 0 and q.b % 2 == 0
    # D divisible by 4 is never square-free
    raise ValueError(f"D={q.D} is not square-free")
