"""Exact scalars: rationals and elements of a real quadratic field Q(sqrt(d)).

Rationals are plain :class:`fractions.Fraction` values.  Irrational equilibria
and cycle values are :class:`QuadraticSurd` instances ``p + q*sqrt(d)`` with
``p, q, d`` rational and ``d`` positive and not a rational square.  Surds mix
freely with ``int`` and ``Fraction``; two surds mix when their radicands differ
by a rational square factor (they then live in the same field).
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Union

import gmpy2

from .errors import ParseError

_MPFR = type(gmpy2.mpfr(0))
_RATIO_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_ratio(text) -> Fraction:
    """Parse ``"p/q"`` or ``"n"`` into a Fraction.  Ints and Fractions pass through."""
    if isinstance(text, bool):
        raise ParseError(f"not a rational literal: {text!r}")
    if isinstance(text, int | Fraction):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"rational values must be strings, got {type(text).__name__}: {text!r}")
    m = _RATIO_RE.match(text)
    if m is None:
        raise ParseError(f"not a rational literal: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_ratio(x: Fraction) -> str:
    return str(Fraction(x))


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if it is not a square."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class QuadraticSurd:
    """The real number ``p + q*sqrt(d)``; construct through :func:`surd`."""

    __slots__ = ("p", "q", "d")

    def __init__(self, p, q, d):
        self.p = Fraction(p)
        self.q = Fraction(q)
        self.d = Fraction(d)
        if self.d <= 0 or rational_sqrt(self.d) is not None:
            raise ValueError(f"radicand must be a positive non-square rational, got {self.d}")
        if self.q == 0:
            raise ValueError("use a Fraction for rational values")

    # -- field bookkeeping -------------------------------------------------
    def _coerce(self, other):
        """Return (p, q) of ``other`` expressed over this surd's radicand."""
        if isinstance(other, QuadraticSurd):
            if other.d == self.d:
                return other.p, other.q
            s = rational_sqrt(other.d / self.d)
            if s is None:
                raise ValueError(
                    f"sqrt({other.d}) and sqrt({self.d}) lie in different quadratic fields"
                )
            return other.p, other.q * s
        if isinstance(other, Rational):
            return Fraction(other), Fraction(0)
        return None

    def _make(self, p, q):
        return surd(p, q, self.d)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self._make(self.p + c[0], self.q + c[1])

    __radd__ = __add__

    def __neg__(self):
        return self._make(-self.p, -self.q)

    def __pos__(self):
        return self

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self._make(self.p - c[0], self.q - c[1])

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self._make(c[0] - self.p, c[1] - self.q)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        return self._make(self.p * a + self.q * b * self.d, self.p * b + self.q * a)

    __rmul__ = __mul__

    def _inverse(self):
        norm = self.p * self.p - self.q * self.q * self.d
        # norm != 0 because d is not a square and q != 0
        return self._make(self.p / norm, -self.q / norm)

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        if c[1] == 0:
            if c[0] == 0:
                raise ZeroDivisionError("division by zero")
            return self._make(self.p / c[0], self.q / c[0])
        return self * surd(c[0], c[1], self.d)._inverse()

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return surd(c[0], c[1], self.d) * self._inverse()

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order ----------------------------------------------------------------
    def sign(self) -> int:
        sp, sq = _sign(self.p), _sign(self.q)
        if sp == 0 or sp == sq:
            return sq
        # opposite signs: compare p^2 with q^2 d (never equal, d is not a square)
        return sp if self.p * self.p > self.q * self.q * self.d else sq

    def _cmp(self, other):
        if isinstance(other, float):
            if math.isinf(other):
                return -1 if other > 0 else 1
            return _sign(float(self) - other)
        if isinstance(other, _MPFR):
            return _sign(self.to_mpfr() - other)
        diff = self - other
        return diff.sign() if isinstance(diff, QuadraticSurd) else _sign(diff)

    def __eq__(self, other):
        try:
            c = self._coerce(other)
        except ValueError:
            return False
        if c is None:
            return NotImplemented
        return self.p == c[0] and self.q == c[1]

    def __hash__(self):
        return hash((self.p, self.q, self.d))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # -- conversions ------------------------------------------------------------
    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(float(self.d))

    def to_mpfr(self):
        """Value at the current gmpy2 context precision."""
        return gmpy2.mpfr(self.p) + gmpy2.mpfr(self.q) * gmpy2.sqrt(gmpy2.mpfr(self.d))

    def bit_size(self) -> int:
        return max(
            x.numerator.bit_length() if i == 0 else x.denominator.bit_length()
            for x in (self.p, self.q)
            for i in (0, 1)
        )

    def __repr__(self):
        return f"QuadraticSurd({self.p}, {self.q}, {self.d})"

    def __str__(self):
        return format_value(self)


Number = Union[Fraction, QuadraticSurd]


def surd(p, q, d) -> Number:
    """``p + q*sqrt(d)``, collapsed to a Fraction when it is rational."""
    p, q, d = Fraction(p), Fraction(q), Fraction(d)
    if q == 0 or d == 0:
        return p
    if d < 0:
        raise ValueError("negative radicand")
    s = rational_sqrt(d)
    if s is not None:
        return p + q * s
    return QuadraticSurd(p, q, d)


def sqrt_exact(x) -> Number:
    """Square root of a nonnegative rational as a Fraction or a surd."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative rational")
    return surd(0, 1, x)


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int, QuadraticSurd)) and not isinstance(x, bool)


def to_mpfr(x):
    """Convert any supported scalar to mpfr at the current gmpy2 precision."""
    if isinstance(x, QuadraticSurd):
        return x.to_mpfr()
    return gmpy2.mpfr(x)


def bit_size(x) -> int:
    if isinstance(x, QuadraticSurd):
        return x.bit_size()
    if isinstance(x, Fraction):
        return max(x.numerator.bit_length(), x.denominator.bit_length())
    return 0


def format_value(x) -> str:
    """Render a value: ``p/q`` for rationals, ``p + q*sqrt(d)`` for surds, full precision for floats."""
    if isinstance(x, Fraction | int):
        return format_ratio(Fraction(x))
    if isinstance(x, QuadraticSurd):
        parts = []
        if x.p != 0:
            parts.append(f"{x.p}")
        q = f"{abs(x.q)}*" if abs(x.q) != 1 else ""
        sgn = "-" if x.q < 0 else ("+" if parts else "")
        term = f"{q}sqrt({x.d})"
        parts.append(f"{sgn} {term}" if parts else f"{sgn}{term}")
        return " ".join(parts)
    if isinstance(x, _MPFR):
        prec = x.precision
        digits = int(math.ceil(prec * math.log10(2))) + 1
        return format(x, f".{digits}g")
    return repr(x)
