"""Exact rational scalars and dense univariate polynomials.

Everything in this module is exact: coefficients are arbitrary-precision
rationals, stored in lowest terms with positive denominators, and no
operation ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

RationalLike = Union[Fraction, int, str]


def Q(value: RationalLike) -> Fraction:
    """Coerce an int, a Fraction or an 'a/b' string to an exact rational.

    Floats are rejected on purpose: silently converting a float would
    launder rounding error into the exact layer.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def double_factorial(n: int) -> int:
    """n!! = n(n-2)(n-4)..., with (-1)!! = 0!! = 1.

    (2k-1)!! is the 2k-th moment of a standard Gaussian.
    """
    if n < -1:
        raise ValueError(f"double factorial undefined for {n}")
    out = 1
    for v in range(n, 1, -2):
        out *= v
    return out


class Polynomial:
    """Dense univariate polynomial with exact rational coefficients.

    Coefficients are indexed by degree.  The zero polynomial is stored as an
    empty coefficient tuple and its ``degree`` is None (a sentinel, never a
    negative integer).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @classmethod
    def monomial(cls, degree: int, coeff: RationalLike = 1) -> "Polynomial":
        if degree < 0:
            raise ValueError("degree must be >= 0")
        c = Q(coeff)
        if c == 0:
            return cls.zero()
        return cls((0,) * degree + (c,))

    # -- structure -------------------------------------------------------------

    @property
    def degree(self):
        """Degree as an int, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, degree: int) -> Fraction:
        if 0 <= degree < len(self.coeffs):
            return self.coeffs[degree]
        return Fraction(0)

    def leading_coefficient(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_even_function(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def is_odd_function(self) -> bool:
        return all(c == 0 for c in self.coeffs[0::2])

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial.zero()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return Polynomial(out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c: RationalLike) -> "Polynomial":
        c = Q(c)
        return Polynomial(c * a for a in self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # -- calculus ---------------------------------------------------------------

    def integrate(self) -> "Polynomial":
        """Antiderivative R with R(0) = 0 and R' = self, exactly."""
        return Polynomial(
            [Fraction(0)] + [c / (i + 1) for i, c in enumerate(self.coeffs)]
        )

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def __call__(self, x: RationalLike) -> Fraction:
        """Exact Horner evaluation."""
        x = Q(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- serialization ------------------------------------------------------------

    def to_json_dict(self) -> dict:
        """JSON form: coefficients ascending by degree, exact strings."""
        return {"coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Polynomial":
        if "coeffs" not in data or not isinstance(data["coeffs"], list):
            raise ValueError("polynomial JSON needs a 'coeffs' list")
        return cls(Q(c) for c in data["coeffs"])

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for deg in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[deg]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if deg == 0:
                body = str(mag)
            else:
                var = "x" if deg == 1 else f"x^{deg}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Polynomial({self})"


#: The monomial x, handy for building polynomials.
X = Polynomial.monomial(1)
ONE = Polynomial.monomial(0)


def gaussian_expectation(p: Polynomial) -> Fraction:
    """E[p(N)] for N standard Gaussian: sum of c_{2m} * (2m-1)!!.

    Odd-degree terms integrate to zero.
    """
    total = Fraction(0)
    for j in range(0, len(p.coeffs), 2):
        c = p.coeffs[j]
        if c:
            total += c * double_factorial(j - 1)
    return total


def integral_01(p: Polynomial) -> Fraction:
    """Exact definite integral of p over [0, 1]."""
    return p.integrate()(1)
