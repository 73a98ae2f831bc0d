"""Exact Gaussian rationals, i.e. elements of Q(i)."""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Optional, Union

import mpmath

__all__ = ["GaussianRational", "GR", "I", "as_gr", "root_of_unity"]

Scalar = Union["GaussianRational", int, Fraction]


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with exact rational parts.

    Instances are immutable and hashable; a value with zero imaginary part
    compares (and hashes) equal to the corresponding int or Fraction.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction, str] = 0, im: Union[int, Fraction, str] = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __reduce__(self):
        return (GaussianRational, (self.re, self.im))

    # -- construction / coercion ------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Inverse of ``str``: accepts ``p/q``, ``p/q*i`` and ``p/q+r/s*i``."""
        m = _GR_RE.fullmatch(text.replace(" ", ""))
        if m is None:
            raise ValueError(f"not a Gaussian rational: {text!r}")
        re_part, im_part, im_only = m.group("re"), m.group("im"), m.group("imonly")
        if im_only is not None:
            return cls(0, Fraction(im_only))
        return cls(Fraction(re_part), Fraction(im_part) if im_part is not None else 0)

    # -- predicates ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if not o.im:
            return GaussianRational(self.re * o.re, self.im * o.re)
        if not self.im:
            return GaussianRational(self.re * o.re, self.re * o.im)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero in Q(i)")
        if not o.im:
            return GaussianRational(self.re / o.re, self.im / o.re)
        n = o.norm()
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n
        )

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussianRational(1) / (self ** (-k))
        result = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # -- comparison / hashing -----------------------------------------------------

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self):
        return (self.re, self.im)

    # -- conversion -----------------------------------------------------------------

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_mpc(self, ctx=mpmath.mp):
        return ctx.mpc(ctx.mpf(self.re.numerator) / self.re.denominator,
                       ctx.mpf(self.im.numerator) / self.im.denominator)

    def _mpmath_(self, prec, rounding):
        # Raw mpf tuples survive mpmath's convert() without re-rounding.
        from mpmath.libmp import from_rational

        re = from_rational(self.re.numerator, self.re.denominator, prec, rounding)
        im = from_rational(self.im.numerator, self.im.denominator, prec, rounding)
        return mpmath.mp.make_mpc((re, im))

    def __repr__(self):
        return f"GaussianRational({str(self)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}*i"

    # -- exact roots ------------------------------------------------------------------

    def sqrt(self) -> Optional["GaussianRational"]:
        """An exact square root in Q(i), or None when there is none."""
        if self.is_zero():
            return GaussianRational(0)
        a, b = self.re, self.im
        if not b:
            r = _rational_sqrt(abs(a))
            if r is None:
                return None
            return GaussianRational(r) if a > 0 else GaussianRational(0, r)
        modulus = _rational_sqrt(a * a + b * b)
        if modulus is None:
            return None
        x = _rational_sqrt((a + modulus) / 2)
        y = _rational_sqrt((modulus - a) / 2)
        if x is None or y is None:
            return None
        if b < 0:
            y = -y
        return GaussianRational(x, y)

    def nth_root(self, n: int) -> Optional["GaussianRational"]:
        """Some exact n-th root in Q(i), or None when none exists.

        Writes ``self = a / D`` with ``a`` a Gaussian integer and ``D`` a positive
        integer; any root in Q(i) is then ``s / D`` with ``s`` a Gaussian integer
        root of ``a * D**(n-1)`` (Z[i] is integrally closed), which is located
        numerically, rounded and verified exactly.
        """
        if n < 1:
            raise ValueError("root index must be positive")
        if n == 1 or self.is_zero():
            return self
        if n == 2:
            return self.sqrt()
        den = _lcm(self.re.denominator, self.im.denominator)
        target = GaussianRational(self.re * den, self.im * den) * (den ** (n - 1))
        digits = len(str(abs(target.re.numerator))) + len(str(abs(target.im.numerator)))
        ctx = mpmath.MPContext()
        ctx.dps = max(30, digits // n + 20)
        base = ctx.root(target.to_mpc(ctx), n)
        for k in range(n):
            approx = base * ctx.exp(2j * ctx.pi * k / n)
            cand = GaussianRational(int(ctx.nint(approx.real)), int(ctx.nint(approx.imag)))
            if cand ** n == target:
                return cand / den
        return None


GR = GaussianRational
I = GaussianRational(0, 1)

_GR_RE = re.compile(
    r"(?:(?P<re>[+-]?\d+(?:/\d+)?)(?:(?P<im>[+-]\d+(?:/\d+)?)\*i)?)|(?:(?P<imonly>[+-]?\d+(?:/\d+)?)\*i)"
)


def _coerce(x) -> Optional[GaussianRational]:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Rational)):
        return GaussianRational(Fraction(x))
    return None


def as_gr(x) -> GaussianRational:
    """Coerce an int, Fraction, Gaussian-integral complex or string to Q(i)."""
    c = _coerce(x)
    if c is not None:
        return c
    if isinstance(x, complex):
        return GaussianRational(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, str):
        return GaussianRational.parse(x)
    raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def root_of_unity(r: int, k: int = 1, ctx=None):
    """``exp(2*pi*i*k/r)``: exact in Q(i) when r divides 4, otherwise an mpc."""
    if r < 1:
        raise ValueError("order must be positive")
    k %= r
    if 4 % r == 0:
        return (GaussianRational(0, 1)) ** (k * (4 // r))
    ctx = ctx or mpmath.mp
    return ctx.expjpi(ctx.mpf(2 * k) / r)
