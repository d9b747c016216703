"""Probabilists' Hermite polynomials and closed-form Gaussian integrals.

The recurrence is H_0 = 1, H_1 = x, H_{k+1} = x H_k - k H_{k-1}, so each
H_k is monic of degree k and the family is orthogonal for the standard
Gaussian weight with E[H_k^2] = k!.  The physicists' normalization is
deliberately not supported.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .exact_poly import ONE, Polynomial, Q, X


@lru_cache(maxsize=None)
def hermite(k: int) -> Polynomial:
    """The k-th probabilists' Hermite polynomial, exactly."""
    if k < 0:
        raise ValueError("Hermite index must be >= 0")
    if k == 0:
        return ONE
    h_prev, h = ONE, X
    for j in range(1, k):
        h_prev, h = h, X * h - j * h_prev
    return h


class HermiteExpansion:
    """A finite linear combination of Hermite polynomials, index -> coefficient.

    Treat instances as immutable; they are shared through caches.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients: dict):
        self._coeffs = {
            int(n): Q(c) for n, c in coefficients.items() if Q(c) != 0
        }

    def coefficient(self, n: int) -> Fraction:
        return self._coeffs.get(n, Fraction(0))

    def items(self):
        return sorted(self._coeffs.items())

    def indices(self):
        return sorted(self._coeffs)

    def to_polynomial(self) -> Polynomial:
        total = Polynomial.zero()
        for n, c in self._coeffs.items():
            total = total + c * hermite(n)
        return total

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "HermiteExpansion":
        """Exact basis change; H_k is monic so the solve is unit-triangular."""
        coeffs = {}
        rem = p
        while not rem.is_zero:
            deg = rem.degree
            c = rem.leading_coefficient()
            coeffs[deg] = c
            rem = rem - c * hermite(deg)
        return cls(coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HermiteExpansion) and self._coeffs == other._coeffs
        )

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{n}: {c}" for n, c in self.items())
        return f"HermiteExpansion({{{body}}})"


@lru_cache(maxsize=None)
def hermite_linearize(m: int, n: int) -> HermiteExpansion:
    """Expand the product H_m * H_n back over the Hermite basis.

    H_m H_n = sum_r r! C(m,r) C(n,r) H_{m+n-2r} for r = 0..min(m,n).
    """
    if m < 0 or n < 0:
        raise ValueError("Hermite indices must be >= 0")
    expansion = HermiteExpansion(
        {
            m + n - 2 * r: Fraction(factorial(r) * comb(m, r) * comb(n, r))
            for r in range(min(m, n) + 1)
        }
    )
    # Debug-mode cross-check against direct polynomial multiplication; runs
    # once per (m, n) thanks to the cache.
    assert expansion.to_polynomial() == hermite(m) * hermite(n)
    return expansion


def hermite_triple_expectation(l: int, m: int, n: int) -> Fraction:
    """E[H_l(N) H_m(N) H_n(N)] in closed form.

    Equals l! m! n! over the factorials of the three half-sums
    (-l+m+n)/2, (l-m+n)/2, (l+m-n)/2, and vanishes whenever any half-sum
    is negative or non-integral (in particular whenever l+m+n is odd).
    """
    if min(l, m, n) < 0:
        raise ValueError("Hermite indices must be >= 0")
    if (l + m + n) % 2:
        return Fraction(0)
    s1 = (-l + m + n) // 2
    s2 = (l - m + n) // 2
    s3 = (l + m - n) // 2
    if min(s1, s2, s3) < 0:
        return Fraction(0)
    return Fraction(
        factorial(l) * factorial(m) * factorial(n),
        factorial(s1) * factorial(s2) * factorial(s3),
    )


def monomial_hermite_expectation(m: int, n: int) -> Fraction:
    """E[N^{2m} H_{2n}(N)] = (2m)! / (2^{m-n} (m-n)!), zero when n > m."""
    if m < 0 or n < 0:
        raise ValueError("indices must be >= 0")
    if n > m:
        return Fraction(0)
    return Fraction(factorial(2 * m), 2 ** (m - n) * factorial(m - n))
