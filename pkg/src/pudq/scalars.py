"""Exact scalar fields used as polynomial coefficients.

Three kinds of coefficient values circulate through the package:

* real rationals, stored as ``gmpy2.mpq`` (plain ``int`` is accepted on input),
* :class:`Scalar`, a complex number with rational real and imaginary parts,
* :class:`QuadExt`, an element ``a + b*sqrt(d)`` of a quadratic extension
  whose parts ``a``, ``b`` are themselves real or complex rationals.

Every arithmetic result is normalized to the simplest representation: a
``Scalar`` with zero imaginary part collapses to ``mpq`` and a ``QuadExt`` with
zero surd part collapses to its rational part.  Polynomial code can therefore
test ``if not c`` for zero and never stores redundant wrappers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = [
    "Scalar",
    "QuadExt",
    "I",
    "rational",
    "as_coeff",
    "to_complex",
    "is_real",
    "real_part",
    "imag_part",
    "conjugate",
    "format_coeff",
    "sqrt_exact",
]

_RATIONAL_TYPES = (int, type(mpq(0)), Fraction)


def rational(value) -> mpq:
    """Coerce ints, Fractions, mpq and strings like ``"5/3"`` to ``mpq``."""
    if isinstance(value, type(mpq(0))):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(Fraction(value.strip()))
    if isinstance(value, Rational):
        return mpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _is_rat(x) -> bool:
    return isinstance(x, _RATIONAL_TYPES) and not isinstance(x, bool)


class Scalar:
    """Complex rational ``re + i*im``; immutable and hashable.

    ``Scalar(re, 0)`` returns the plain rational ``re``.
    """

    __slots__ = ("re", "im")

    def __new__(cls, re=0, im=0):
        return Scalar.make(rational(re), rational(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def make(re, im):
        """Normalized constructor: returns ``mpq`` when ``im == 0``."""
        if not im:
            return re
        s = object.__new__(Scalar)
        object.__setattr__(s, "re", re)
        object.__setattr__(s, "im", im)
        return s

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if _is_rat(other):
            return Scalar.make(self.re + other, self.im)
        if isinstance(other, Scalar):
            return Scalar.make(self.re + other.re, self.im + other.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Scalar.make(-self.re, -self.im)

    def __sub__(self, other):
        if _is_rat(other):
            return Scalar.make(self.re - other, self.im)
        if isinstance(other, Scalar):
            return Scalar.make(self.re - other.re, self.im - other.im)
        return NotImplemented

    def __rsub__(self, other):
        if _is_rat(other):
            return Scalar.make(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if _is_rat(other):
            if not other:
                return mpq(0)
            return Scalar.make(self.re * other, self.im * other)
        if isinstance(other, Scalar):
            a, b, c, d = self.re, self.im, other.re, other.im
            return Scalar.make(a * c - b * d, a * d + b * c)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        return Scalar.make(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if _is_rat(other):
            return Scalar.make(self.re / other, self.im / other)
        if isinstance(other, Scalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_rat(other):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = mpq(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self):
        return Scalar.make(self.re, -self.im)

    # comparison / conversion -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if _is_rat(other):
            return False  # normalized Scalars always have im != 0
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return True

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"Scalar({format_coeff(self.re)}, {format_coeff(self.im)})"

    def __str__(self):
        return format_coeff(self)


I = Scalar.make(mpq(0), mpq(1))


class QuadExt:
    """Element ``a + b*sqrt(d)`` of a quadratic extension of the (complex) rationals.

    ``d`` is a positive square-free integer; ``a`` and ``b`` are ``mpq`` or
    :class:`Scalar`.  Mixing elements with different ``d`` raises ``ValueError``.
    """

    __slots__ = ("a", "b", "d")

    def __new__(cls, a, b, d: int):
        d = int(d)
        if d <= 1 or _squarefree_part(d)[0] != 1:
            raise ValueError(f"radicand must be a square-free integer > 1, got {d}")
        return QuadExt.make(as_coeff(a), as_coeff(b), d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @staticmethod
    def make(a, b, d):
        if not b:
            return a
        e = object.__new__(QuadExt)
        object.__setattr__(e, "a", a)
        object.__setattr__(e, "b", b)
        object.__setattr__(e, "d", d)
        return e

    def _parts(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(f"incompatible radicands {self.d} and {other.d}")
            return other.a, other.b
        if _is_rat(other) or isinstance(other, Scalar):
            return other, mpq(0)
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return QuadExt.make(self.a + p[0], self.b + p[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt.make(-self.a, -self.b, self.d)

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return QuadExt.make(self.a - p[0], self.b - p[1], self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, e = p
        return QuadExt.make(self.a * c + self.b * e * self.d, self.a * e + self.b * c, self.d)

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - self.b * self.b * self.d
        if isinstance(n, Scalar):
            ninv = n.inverse()
        else:
            ninv = 1 / n
        return QuadExt.make(self.a * ninv, -self.b * ninv, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadExt):
            return self * other.inverse()
        if _is_rat(other):
            return QuadExt.make(self.a / other, self.b / other, self.d)
        if isinstance(other, Scalar):
            inv = other.inverse()
            return QuadExt.make(self.a * inv, self.b * inv, self.d)
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = mpq(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self):
        # complex conjugation; sqrt(d) is real
        return QuadExt.make(conjugate(self.a), conjugate(self.b), self.d)

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if _is_rat(other) or isinstance(other, Scalar):
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return True

    def __complex__(self):
        return complex(self.a) + complex(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadExt({format_coeff(self.a)}, {format_coeff(self.b)}, {self.d})"

    def __str__(self):
        return format_coeff(self)


def _squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``n == s**2 * f`` and ``f`` square-free."""
    s, f, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            f *= p
        p += 1
    return s, f * n


def sqrt_exact(value):
    """Exact square root of a non-negative rational.

    Returns ``mpq`` for perfect squares and a :class:`QuadExt` otherwise.
    """
    r = rational(value)
    if r < 0:
        raise ValueError("sqrt_exact expects a non-negative rational")
    if r == 0:
        return mpq(0)
    num, den = int(r.numerator), int(r.denominator)
    # sqrt(num/den) = sqrt(num*den)/den
    s, f = _squarefree_part(num * den)
    if f == 1:
        return mpq(s, den)
    return QuadExt.make(mpq(0), mpq(s, den), f)


def as_coeff(value):
    """Coerce any supported numeric input to a normalized exact coefficient."""
    if isinstance(value, (Scalar, QuadExt)):
        return value
    if isinstance(value, complex):
        raise TypeError("floating complex values are not exact coefficients")
    return rational(value)


def to_complex(c) -> complex:
    return complex(c)


def is_real(c) -> bool:
    if isinstance(c, Scalar):
        return False
    if isinstance(c, QuadExt):
        return is_real(c.a) and is_real(c.b)
    return True


def real_part(c):
    if isinstance(c, Scalar):
        return c.re
    if isinstance(c, QuadExt):
        return QuadExt.make(real_part(c.a), real_part(c.b), c.d)
    return c


def imag_part(c):
    if isinstance(c, Scalar):
        return c.im
    if isinstance(c, QuadExt):
        return QuadExt.make(imag_part(c.a), imag_part(c.b), c.d)
    return mpq(0)


def conjugate(c):
    if isinstance(c, (Scalar, QuadExt)):
        return c.conjugate()
    return c


def _fmt_rat(r) -> str:
    r = rational(r)
    if r.denominator == 1:
        return str(int(r.numerator))
    return f"{int(r.numerator)}/{int(r.denominator)}"


def format_coeff(c) -> str:
    """Render an exact coefficient: ``a/b``, ``(a/b + c/d*i)``, ``(x + y*sqrt(d))``."""
    if isinstance(c, QuadExt):
        return f"({format_coeff(c.a)} + {format_coeff(c.b)}*sqrt({c.d}))"
    if isinstance(c, Scalar):
        if not c.re:
            return f"{_fmt_rat(c.im)}*i"
        return f"({_fmt_rat(c.re)} + {_fmt_rat(c.im)}*i)"
    return _fmt_rat(c)
