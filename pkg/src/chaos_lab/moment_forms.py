"""Moment matrices, positivity certificates and moment inequalities.

The (k+1) x (k+1) moment matrix of a random variable X is

    M_k[i, j] = (k - ij/(i+j-1)) * E[X^{i+j}],   0 <= i, j <= k,

with ij/(i+j-1) read as 0 when ij = 0.  For eigenfunctions of a diffusive
Markov generator this matrix is positive semidefinite, which yields the
inequality suite implemented below.  Exact sequences are certified with
zero tolerance through exact leading principal minors; float sequences get
a relative tolerance of 1e-9.  Nonnegative leading minors alone do not
certify semidefiniteness for singular matrices, so a floating eigenvalue
diagnostic is reported alongside, without any equivalence claim.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact_poly import Q, double_factorial
from .wfamily import w_poly

#: Relative tolerance for verdicts on float-tagged moment sequences.
FLOAT_TOLERANCE = 1e-9


def _as_moment(value):
    """Exact values stay exact; floats and decimal strings become floats."""
    if isinstance(value, (Fraction, int)):
        return Q(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            return float(text)
        return Q(text)
    raise TypeError(f"not a moment value: {value!r}")


@dataclass(frozen=True)
class MomentSequence:
    """Moments m_0..m_max of a random variable, exact or float (tagged)."""

    moments: tuple
    exact: bool

    def __post_init__(self):
        if not self.moments:
            raise ValueError("moment sequence is empty")
        m0 = self.moments[0]
        if self.exact:
            if m0 != 1:
                raise ValueError("m_0 must equal 1")
        elif abs(m0 - 1.0) > FLOAT_TOLERANCE:
            raise ValueError("m_0 must equal 1")

    @classmethod
    def from_values(cls, values: Sequence) -> "MomentSequence":
        parsed = [_as_moment(v) for v in values]
        exact = all(isinstance(v, Fraction) for v in parsed)
        if not exact:
            parsed = [float(v) for v in parsed]
        return cls(tuple(parsed), exact)

    @classmethod
    def from_csv(cls, path) -> "MomentSequence":
        """One value per line, line index = moment order, 'a/b' or decimal."""
        values = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or not row[0].strip():
                    continue
                values.append(row[0])
        return cls.from_values(values)

    @classmethod
    def from_json_dict(cls, data: dict) -> "MomentSequence":
        if "moments" not in data or not isinstance(data["moments"], list):
            raise ValueError("moment JSON needs a 'moments' list")
        return cls.from_values(data["moments"])

    @classmethod
    def load(cls, path) -> "MomentSequence":
        text_path = str(path)
        if text_path.endswith(".json"):
            with open(text_path) as fh:
                return cls.from_json_dict(json.load(fh))
        return cls.from_csv(text_path)

    @property
    def max_order(self) -> int:
        return len(self.moments) - 1

    def m(self, order: int):
        if order > self.max_order:
            raise ValueError(
                f"moment m_{order} required but sequence stops at m_{self.max_order}"
            )
        return self.moments[order]

    def to_json_dict(self) -> dict:
        return {
            "exact": self.exact,
            "moments": [str(v) if self.exact else v for v in self.moments],
        }


@dataclass(frozen=True)
class MomentMatrix:
    order: int
    entries: tuple  # row tuples
    exact: bool

    def entry(self, i: int, j: int):
        return self.entries[i][j]

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "exact": self.exact,
            "entries": [[str(e) for e in row] for row in self.entries]
            if self.exact
            else None,
            "entries_float": [[float(e) for e in row] for row in self.entries],
        }


def moment_matrix_weight(k: int, i: int, j: int) -> Fraction:
    """The rational entry weight k - ij/(i+j-1), with 0 when ij = 0."""
    ij = i * j
    if ij == 0:
        return Fraction(k)
    return Fraction(k) - Fraction(ij, i + j - 1)


def build_moment_matrix(k: int, ms: MomentSequence) -> MomentMatrix:
    """Assemble M_k; needs moments up to order 2k."""
    if k < 1:
        raise ValueError("matrix order must be >= 1")
    ms.m(2 * k)  # raises a clear error when moments are missing
    rows = []
    for i in range(k + 1):
        row = []
        for j in range(k + 1):
            weight = moment_matrix_weight(k, i, j)
            value = weight * ms.m(i + j) if ms.exact else float(weight) * ms.m(i + j)
            row.append(value)
        rows.append(tuple(row))
    return MomentMatrix(k, tuple(rows), ms.exact)


def _det_exact(rows) -> Fraction:
    """Fraction-free Bareiss elimination; exact over the rationals."""
    n = len(rows)
    a = [list(r) for r in rows]
    sign = 1
    prev = Fraction(1)
    for r in range(n - 1):
        if a[r][r] == 0:
            for swap in range(r + 1, n):
                if a[swap][r] != 0:
                    a[r], a[swap] = a[swap], a[r]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(r + 1, n):
            for j in range(r + 1, n):
                a[i][j] = (a[i][j] * a[r][r] - a[i][r] * a[r][j]) / prev
            a[i][r] = Fraction(0)
        prev = a[r][r]
    return sign * a[n - 1][n - 1]


def leading_minors(matrix: MomentMatrix) -> list:
    """Determinants of the l x l top-left blocks, l = 1..order+1."""
    out = []
    for l in range(1, matrix.order + 2):
        block = [row[:l] for row in matrix.entries[:l]]
        if matrix.exact:
            out.append(_det_exact(block))
        else:
            out.append(float(np.linalg.det(np.array(block, dtype=float))))
    return out


def eigenvalue_diagnostic(matrix: MomentMatrix) -> dict:
    """Secondary floating check: least eigenvalue vs 1e-9 * ||M||_F."""
    arr = np.array([[float(e) for e in row] for row in matrix.entries])
    eigenvalues = np.linalg.eigvalsh(arr)
    tolerance = 1e-9 * float(np.linalg.norm(arr))
    least = float(eigenvalues[0])
    return {
        "min_eigenvalue": least,
        "tolerance": tolerance,
        "psd": least >= -tolerance,
    }


@dataclass(frozen=True)
class InequalityVerdict:
    """Result of one inequality lhs <= rhs; slack = rhs - lhs."""

    name: str
    lhs: object
    rhs: object
    slack: object
    holds: bool
    exact: bool

    def to_json_dict(self) -> dict:
        # Exact strings alongside float renderings; floats alone lose the
        # zero-tolerance guarantee.
        return {
            "name": self.name,
            "lhs": str(self.lhs) if self.exact else None,
            "rhs": str(self.rhs) if self.exact else None,
            "slack": str(self.slack) if self.exact else None,
            "lhs_float": float(self.lhs),
            "rhs_float": float(self.rhs),
            "slack_float": float(self.slack),
            "holds": self.holds,
            "exact": self.exact,
        }


def _verdict(name: str, lhs, rhs, exact: bool) -> InequalityVerdict:
    slack = rhs - lhs
    if exact:
        holds = slack >= 0
    else:
        scale = max(1.0, abs(float(lhs)), abs(float(rhs)))
        holds = float(slack) >= -FLOAT_TOLERANCE * scale
    return InequalityVerdict(name, lhs, rhs, slack, holds, exact)


def check_fourth_moment_ineq(ms: MomentSequence) -> InequalityVerdict:
    """m_3^2 / (2 m_2) <= m_4/3 - m_2^2."""
    m2 = ms.m(2)
    if m2 <= 0:
        raise ValueError("fourth moment inequality needs m_2 > 0")
    lhs = ms.m(3) ** 2 / (2 * m2)
    three = Fraction(3) if ms.exact else 3.0
    rhs = ms.m(4) / three - m2 ** 2
    return _verdict("fourth-moment", lhs, rhs, ms.exact)


def check_sixth_moment_ineq(ms: MomentSequence) -> InequalityVerdict:
    """m_4^2 <= (3/5) m_6 m_2."""
    lhs = ms.m(4) ** 2
    factor = Fraction(3, 5) if ms.exact else 0.6
    rhs = factor * ms.m(6) * ms.m(2)
    return _verdict("sixth-moment", lhs, rhs, ms.exact)


def check_even_bound(ms: MomentSequence, k: int) -> InequalityVerdict:
    """(2k-1)!! m_2^k <= m_{2k}, the Gaussian lower bound on even moments."""
    if k < 2:
        raise ValueError("even bound requires k >= 2")
    df = double_factorial(2 * k - 1)
    lhs = df * ms.m(2) ** k
    rhs = ms.m(2 * k)
    return _verdict(f"even-bound-k{k}", lhs, rhs, ms.exact)


def kappa6(ms: MomentSequence):
    """Sixth cumulant m_6 - 15 m_2 m_4 - 10 m_3^2 + 30 m_2^3 of a centered X."""
    m1 = ms.m(1)
    centered = m1 == 0 if ms.exact else abs(m1) <= FLOAT_TOLERANCE
    if not centered:
        raise ValueError("kappa6 is defined here for centered sequences (m_1 = 0)")
    return ms.m(6) - 15 * ms.m(2) * ms.m(4) - 10 * ms.m(3) ** 2 + 30 * ms.m(2) ** 3


def expected_w(k: int, ms: MomentSequence):
    """E[W_k(X)] by pairing W_k coefficients with moments."""
    poly = w_poly(k)
    ms.m(2 * k)
    total = Fraction(0) if ms.exact else 0.0
    for degree, coeff in enumerate(poly.coeffs):
        if coeff:
            value = coeff * ms.m(degree) if ms.exact else float(coeff) * ms.m(degree)
            total = total + value
    return total
