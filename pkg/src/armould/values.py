"""Exact scalar values: Gaussian rationals and literal parsing.

Decorations, mould tables and golden files use exact arithmetic; floats are
rejected at parse time so that shuffle and contraction identities can be
tested with equality rather than tolerances.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

Exactable = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = as_gaussian(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_gaussian(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_gaussian(other) - self

    def __mul__(self, other):
        other = as_gaussian(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_gaussian(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __rtruediv__(self, other):
        return as_gaussian(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    # -- comparisons / hashing ------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    @property
    def is_real(self):
        return self.im == 0

    @property
    def is_positive_integer(self):
        return self.im == 0 and self.re.denominator == 1 and self.re >= 1

    def sort_key(self):
        return (self.re, self.im)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_exact(self)


def as_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational (floats are rejected)")


_LITERAL = re.compile(
    r"""^\s*
    (?P<re>[+-]?\d+(?:/\d+)?)?
    (?P<im>[+-](?:\d+(?:/\d+)?)?)?
    (?P<unit>i)?
    \s*$""",
    re.VERBOSE,
)


def parse_exact(text: str) -> GaussianRational:
    """Parse an exact literal: ``3``, ``-1/2``, ``2+1i``, ``-i``, ``1/3-2/5i``.

    Floating literals (``0.5``) are rejected.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty exact literal")
    if "." in s or "e" in s.lower().replace("i", ""):
        raise ValueError(f"floating literal rejected: {text!r}")
    m = _LITERAL.match(s)
    if not m:
        raise ValueError(f"bad exact literal: {text!r}")
    re_part, im_part, unit = m.group("re"), m.group("im"), m.group("unit")
    if unit is None:
        if im_part is not None:
            raise ValueError(f"bad exact literal: {text!r}")
        return GaussianRational(Fraction(re_part))
    # has an 'i'
    if im_part is None:
        # forms: "i", "2i", "1/2i" -> purely imaginary
        coeff = Fraction(re_part) if re_part is not None else Fraction(1)
        return GaussianRational(0, coeff)
    if im_part in ("+", "-"):
        coeff = Fraction(im_part + "1")
    else:
        coeff = Fraction(im_part)
    if re_part is None:
        raise ValueError(f"bad exact literal: {text!r}")
    return GaussianRational(Fraction(re_part), coeff)


def format_exact(x) -> str:
    """Inverse of :func:`parse_exact`; used by serializers and golden files."""
    g = as_gaussian(x)
    if g.im == 0:
        return str(g.re)
    im = f"{g.im}i" if g.im >= 0 else f"{g.im}i"
    sign = "+" if g.im >= 0 else ""
    if g.re == 0:
        return f"{g.im}i"
    return f"{g.re}{sign}{im}"
