"""Exact arithmetic over rationals extended by square roots.

A RadQ value is a finite sum  sum_d q_d * sqrt(d)  with rational q_d and
squarefree integer radicands d (d = 1 carries the rational part).  This is
enough to keep chaos-moment oracles exact when eigenvalues or coefficients
look like 1/sqrt(2d): odd power sums pick up a radical that even moments
cancel again.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache

from .exact_poly import Q, RationalLike


@lru_cache(maxsize=None)
def _squarefree_split(n: int):
    """n >= 1 as (s, m) with n = s*s*m and m squarefree, by trial division."""
    if n < 1:
        raise ValueError("radicand must be >= 1")
    s, m, rem, d = 1, 1, n, 2
    while d * d <= rem:
        if rem % d == 0:
            e = 0
            while rem % d == 0:
                rem //= d
                e += 1
            s *= d ** (e // 2)
            if e % 2:
                m *= d
        d += 1
    return s, m * rem


class RadQ:
    """Immutable exact number of the form sum_d q_d sqrt(d)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=()):
        # terms: iterable of (squarefree radicand, Fraction), assumed normalized
        cleaned = tuple(sorted((d, c) for d, c in terms if c != 0))
        object.__setattr__(self, "_terms", cleaned)
        object.__setattr__(self, "_hash", None)

    # -- constructors -----------------------------------------------------------

    @classmethod
    def from_rational(cls, value: RationalLike) -> "RadQ":
        q = Q(value)
        return cls(((1, q),)) if q else cls()

    @classmethod
    def sqrt(cls, value: RationalLike) -> "RadQ":
        """Exact square root of a nonnegative rational."""
        q = Q(value)
        if q < 0:
            raise ValueError("sqrt of a negative rational")
        if q == 0:
            return cls()
        # sqrt(p/r) = sqrt(p*r)/r
        s, m = _squarefree_split(q.numerator * q.denominator)
        return cls(((m, Fraction(s, q.denominator)),))

    @classmethod
    def coerce(cls, value) -> "RadQ":
        if isinstance(value, RadQ):
            return value
        return cls.from_rational(value)

    # -- queries ------------------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return all(d == 1 for d, _ in self._terms)

    def as_fraction(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self._terms[0][1]

    def __float__(self) -> float:
        return float(sum(float(c) * math.sqrt(d) for d, c in self._terms))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- arithmetic -----------------------------------------------------------------

    def _combined(self, other, flip: bool) -> "RadQ":
        acc = dict(self._terms)
        for d, c in other._terms:
            acc[d] = acc.get(d, Fraction(0)) + (-c if flip else c)
        return RadQ(acc.items())

    def __add__(self, other):
        try:
            return self._combined(RadQ.coerce(other), flip=False)
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return self._combined(RadQ.coerce(other), flip=True)
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return RadQ.coerce(other) - self

    def __neg__(self) -> "RadQ":
        return RadQ((d, -c) for d, c in self._terms)

    def __mul__(self, other):
        try:
            rhs = RadQ.coerce(other)
        except TypeError:
            return NotImplemented
        acc = {}
        for d1, c1 in self._terms:
            for d2, c2 in rhs._terms:
                s, m = _squarefree_split(d1 * d2)
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2 * s
        return RadQ(acc.items())

    __rmul__ = __mul__

    def __truediv__(self, other):
        # Division by rationals only; that is all the oracles need.
        q = Q(other) if not isinstance(other, RadQ) else other.as_fraction()
        return RadQ((d, c / q) for d, c in self._terms)

    def __pow__(self, exponent: int) -> "RadQ":
        if exponent < 0:
            raise ValueError("negative powers not supported")
        out = RadQ.from_rational(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- comparisons / rendering ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (RadQ, Fraction, int)):
            return self._terms == RadQ.coerce(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        # Fraction hashing is costly; cache it (values are immutable).
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self._terms))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for d, c in self._terms:
            if d == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({d})")
            elif c == -1:
                parts.append(f"-sqrt({d})")
            else:
                parts.append(f"{c}*sqrt({d})")
        text = parts[0]
        for p in parts[1:]:
            text += f" + {p}" if not p.startswith("-") else f" - {p[1:]}"
        return text

    def __repr__(self) -> str:
        return f"RadQ({self})"


_SQRT_PATTERN = re.compile(
    r"(?P<sign>-)?(?:(?P<pre>[+-]?\d+(?:/\d+)?)\*)?sqrt\((?P<rad>\d+(?:/\d+)?)\)"
)


def parse_scalar(text: str) -> RadQ:
    """Parse 'a/b', 'sqrt(a/b)', '-sqrt(a/b)' or 'c/d*sqrt(a/b)'."""
    cleaned = text.strip().replace(" ", "")
    if "sqrt" not in cleaned:
        return RadQ.from_rational(Q(cleaned))
    match = _SQRT_PATTERN.fullmatch(cleaned)
    if not match:
        raise ValueError(f"cannot parse scalar: {text!r}")
    value = RadQ.sqrt(Q(match.group("rad")))
    if match.group("pre"):
        value = Q(match.group("pre")) * value
    if match.group("sign"):
        value = -value
    return value
