"""The W-polynomial family and everything built on top of it.

W_k(x) = (2k-1) * (x * int_0^x H_k H_{k-2} - H_k(x) H_{k-2}(x)) is even,
monic of degree 2k, and has zero Gaussian expectation.  Nonnegative
combinations of the W_k form the cone that drives every moment criterion
in this package:

  * T_k(x)     = x^{2k} - k (2k-1)!! x^2 + (k-1)(2k-1)!! expands over
                 {W_2..W_k} with strictly positive coefficients alpha_{i,k};
  * T_{k,l}(x) = x^{2l} + a x^{2k} + b, with (a, b) forced by the two
                 vanishing conditions E[T(N)] = 0 and d/dt E[T(tN)]|_{t=1} = 0;
  * Q_k        solves x * int_0^x Q_k - Q_k = T_k;
  * C_k        = 4 / sqrt(2k(k-1) int_0^1 ((1+t^2)/2)^{k-2} dt) scales the
                 total-variation bound attached to the 2k-th moment.

Two independent exact routes exist for the alpha_{i,k}: the closed-form
integral (evaluated here as an exact polynomial integral via u = 1 - t^2)
and the unit-triangular solve in expand_in_w.  Their agreement is a
zero-tolerance test elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .exact_poly import ONE, Polynomial, X, double_factorial, integral_01
from .hermite import hermite


@lru_cache(maxsize=None)
def w_poly(k: int) -> Polynomial:
    """W_k, exactly. Requires k >= 2."""
    if k < 2:
        raise ValueError("w_poly requires k >= 2")
    prod = hermite(k) * hermite(k - 2)
    return (2 * k - 1) * (X * prod.integrate() - prod)


def t_poly(k: int) -> Polynomial:
    """x^{2k} - k (2k-1)!! x^2 + (k-1) (2k-1)!!. Requires k >= 2."""
    if k < 2:
        raise ValueError("t_poly requires k >= 2")
    df = double_factorial(2 * k - 1)
    return (
        Polynomial.monomial(2 * k)
        + Polynomial.monomial(2, -k * df)
        + Polynomial.monomial(0, (k - 1) * df)
    )


def q_poly(k: int) -> Polynomial:
    """The unique even solution Q of x * int_0^x Q - Q = T_k.

    Q_k = -beta_k + sum_{p=1}^{k-1} (2k-1)!!/(2p-1)!! x^{2p}; the defining
    equation is re-checked exactly on every construction.
    """
    if k < 2:
        raise ValueError("q_poly requires k >= 2")
    df = double_factorial(2 * k - 1)
    q = Polynomial.monomial(0, -(k - 1) * df)
    for p in range(1, k):
        q = q + Polynomial.monomial(2 * p, Fraction(df, double_factorial(2 * p - 1)))
    if X * q.integrate() - q != t_poly(k):
        raise AssertionError(f"Q_{k} fails its defining equation")
    return q


@dataclass(frozen=True)
class FamilyMembershipVerdict:
    """Whether an expansion lies in the nonnegative W-cone."""

    in_family: bool
    negative_indices: tuple


@dataclass(frozen=True)
class WExpansion:
    """P = sum_k coefficients[k] * W_k + residual_a * x^2 + residual_b."""

    coefficients: dict
    residual_a: Fraction
    residual_b: Fraction

    def coefficient(self, k: int) -> Fraction:
        return self.coefficients.get(k, Fraction(0))

    def reconstruct(self) -> Polynomial:
        total = (
            Polynomial.monomial(2, self.residual_a)
            + Polynomial.monomial(0, self.residual_b)
        )
        for k, c in self.coefficients.items():
            total = total + c * w_poly(k)
        return total

    def verdict(self) -> FamilyMembershipVerdict:
        negatives = tuple(sorted(k for k, c in self.coefficients.items() if c < 0))
        in_family = (
            not negatives and self.residual_a == 0 and self.residual_b == 0
        )
        return FamilyMembershipVerdict(in_family, negatives)

    def to_json_dict(self) -> dict:
        verdict = self.verdict()
        return {
            "w_coeffs": {str(k): str(c) for k, c in sorted(self.coefficients.items())},
            "residual": [str(self.residual_a), str(self.residual_b)],
            "in_family": verdict.in_family,
            "negative_indices": list(verdict.negative_indices),
        }


def expand_in_w(p: Polynomial) -> WExpansion:
    """Expand an even polynomial of degree >= 4 over {W_m..W_2, x^2, 1}.

    Each W_k is monic of degree 2k, so peeling leading coefficients from the
    top degree down is an exact unit-triangular back-substitution.
    """
    if p.is_zero or p.degree < 4 or p.degree % 2 or not p.is_even_function():
        raise ValueError("expand_in_w needs an even polynomial of degree >= 4")
    coeffs = {}
    rem = p
    for k in range(p.degree // 2, 1, -1):
        c = rem.coefficient(2 * k)
        if c:
            coeffs[k] = c
            rem = rem - c * w_poly(k)
    return WExpansion(coeffs, rem.coefficient(2), rem.coefficient(0))


def alpha_coeff(i: int, k: int) -> Fraction:
    """Coefficient of W_i in the expansion of T_k, by the integral route.

    alpha_{i,k} = (2k-1)!! / (2^{i-1} (2i-1) (i-2)!) * C(k,i)
                  * int_0^1 (1-u)^{-1/2} u^{i-2} (1-u/2)^{k-i} du.

    Substituting u = 1 - t^2 turns the integral into
    2 * int_0^1 (1-t^2)^{i-2} ((1+t^2)/2)^{k-i} dt, a polynomial integral
    evaluated exactly.
    """
    if not 2 <= i <= k:
        raise ValueError("alpha_coeff requires 2 <= i <= k")
    one_minus_t2 = ONE - Polynomial.monomial(2)
    half_one_plus_t2 = Fraction(1, 2) * (ONE + Polynomial.monomial(2))
    integrand = ONE
    for _ in range(i - 2):
        integrand = integrand * one_minus_t2
    for _ in range(k - i):
        integrand = integrand * half_one_plus_t2
    prefactor = Fraction(
        double_factorial(2 * k - 1) * comb(k, i),
        2 ** (i - 1) * (2 * i - 1) * factorial(i - 2),
    )
    return prefactor * 2 * integral_01(integrand)


def stein_constant(k: int):
    """(exact inner value, C_k) with C_k = 4 / sqrt(inner).

    inner = 2k(k-1) int_0^1 ((1+t^2)/2)^{k-2} dt, a rational number.
    """
    if k < 2:
        raise ValueError("stein_constant requires k >= 2")
    half_one_plus_t2 = Fraction(1, 2) * (ONE + Polynomial.monomial(2))
    integrand = ONE
    for _ in range(k - 2):
        integrand = integrand * half_one_plus_t2
    inner = 2 * k * (k - 1) * integral_01(integrand)
    return inner, 4.0 / math.sqrt(inner)


def t_kl_poly(k: int, l: int):
    """The two-moment target x^{2l} + a x^{2k} + b and its W-expansion.

    (a, b) are the unique solution of E[T(N)] = 0 and
    d/dt E[T(tN)]|_{t=1} = 0:

        a = - l (2l-1)!! / (k (2k-1)!!),   b = (l/k - 1) (2l-1)!!.

    Returns (polynomial, expansion, family verdict).
    """
    if not 2 <= k < l:
        raise ValueError("t_kl_poly requires 2 <= k < l")
    dfl = double_factorial(2 * l - 1)
    dfk = double_factorial(2 * k - 1)
    a = -Fraction(l * dfl, k * dfk)
    b = (Fraction(l, k) - 1) * dfl
    poly = (
        Polynomial.monomial(2 * l)
        + Polynomial.monomial(2 * k, a)
        + Polynomial.monomial(0, b)
    )
    expansion = expand_in_w(poly)
    return poly, expansion, expansion.verdict()
