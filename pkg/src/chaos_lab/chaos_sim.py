"""Concrete chaos elements: exact moment oracles and seeded Monte Carlo.

Three families of concrete random variables are supported:

  * SecondChaos: X = sum_i lambda_i (xi_i^2 - 1) for independent standard
    Gaussians xi_i.  Its cumulants are kappa_r = 2^{r-1} (r-1)! sum lambda_i^r
    for r >= 2 (kappa_1 = 0), which yields every moment exactly.
  * HermiteCombo: X = sum_t c_t prod_i H_{a_{t,i}}(xi_i), a polynomial
    combination of Hermite evaluations on independent coordinates with all
    terms of the same total degree (the chaos order).  Moments are computed
    exactly by multinomial expansion, independence factorization and
    repeated Hermite linearization.
  * Mixture: X = N with probability alpha, else 0, so m_{2j} = alpha (2j-1)!!.

Eigenvalues and coefficients may carry exact square roots (RadQ), which is
what keeps oracles exact for families like lambda_i = 1/sqrt(2d): odd
moments pick up a radical, even moments are rational.

Sampling contract: streams are reproducible bit for bit given
(spec, n, seed, stream) on a fixed kernel backend.  The bit generator is
Philox (counter-based); parallel shards use the documented split rule
"stream s = Philox(key=seed).jumped(s)"; normal variates come from numpy's
ziggurat; blocks have a fixed chunk size; partial sums merge in shard then
chunk order.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial
from typing import Iterable, Optional, Union

import numpy as np

from . import kernels
from .exact_poly import Q, double_factorial
from .hermite import hermite_linearize
from .moment_forms import MomentSequence
from .radicals import RadQ, parse_scalar
from .wfamily import stein_constant

#: Fixed block size of sample streams; part of the reproducibility contract.
CHUNK = 1 << 16

#: Default budget for the exact Hermite-combo expansion (number of product
#: terms in the multinomial expansion across all requested orders).
DEFAULT_TERM_BUDGET = 10 ** 6

#: Default binning for the total-variation estimator: uniform bins on
#: [-6, 6] plus two tail bins.  Beyond 6 sigma the Gaussian mass is
#: negligible next to the bounds being checked.
DTV_BIN_COUNT = 200
DTV_HALF_RANGE = 6.0
DTV_MIN_SAMPLES = 10 ** 4


class ResourceLimitError(Exception):
    """Raised when an exact expansion would exceed its work budget."""


def _scalar(value) -> RadQ:
    if isinstance(value, RadQ):
        return value
    if isinstance(value, str):
        return parse_scalar(value)
    return RadQ.from_rational(value)


# ---------------------------------------------------------------------------
# Chaos element descriptions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SecondChaos:
    """X = sum_i lambda_i (xi_i^2 - 1)."""

    eigenvalues: tuple

    def __post_init__(self):
        values = tuple(_scalar(v) for v in self.eigenvalues)
        if not values:
            raise ValueError("second chaos needs at least one eigenvalue")
        object.__setattr__(self, "eigenvalues", values)

    def to_json_dict(self) -> dict:
        return {
            "type": "second_chaos",
            "lambdas": [str(v) for v in self.eigenvalues],
        }


@dataclass(frozen=True)
class HermiteCombo:
    """X = sum_t coef_t * prod_i H_{degrees_t[i]}(xi_i), fixed total degree."""

    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise ValueError("combo needs at least one term")
        width = max(len(degrees) for _, degrees in self.terms)
        parsed = []
        totals = set()
        for coef, degrees in self.terms:
            degs = tuple(int(d) for d in degrees) + (0,) * (width - len(degrees))
            if any(d < 0 for d in degs):
                raise ValueError("Hermite degrees must be >= 0")
            totals.add(sum(degs))
            parsed.append((_scalar(coef), degs))
        if len(totals) != 1:
            raise ValueError("all terms must share one total degree (chaos order)")
        object.__setattr__(self, "terms", tuple(parsed))

    @property
    def order(self) -> int:
        return sum(self.terms[0][1])

    @property
    def n_coordinates(self) -> int:
        return len(self.terms[0][1])

    def to_json_dict(self) -> dict:
        return {
            "type": "hermite_combo",
            "terms": [
                {"coef": str(coef), "degrees": list(degrees)}
                for coef, degrees in self.terms
            ],
        }


@dataclass(frozen=True)
class Mixture:
    """X = N(0,1) with probability gaussian_weight, else 0."""

    gaussian_weight: Fraction

    def __post_init__(self):
        weight = Q(self.gaussian_weight)
        if not 0 <= weight <= 1:
            raise ValueError("gaussian_weight must lie in [0, 1]")
        object.__setattr__(self, "gaussian_weight", weight)

    def to_json_dict(self) -> dict:
        return {"type": "mixture", "gaussian_weight": str(self.gaussian_weight)}


ChaosSpec = Union[SecondChaos, HermiteCombo, Mixture]


def spec_from_json_dict(data: dict) -> ChaosSpec:
    kind = data.get("type")
    if kind == "second_chaos":
        return SecondChaos(tuple(data["lambdas"]))
    if kind == "hermite_combo":
        return HermiteCombo(
            tuple((t["coef"], tuple(t["degrees"])) for t in data["terms"])
        )
    if kind == "mixture":
        return Mixture(Q(data["gaussian_weight"]))
    raise ValueError(f"unknown chaos spec type: {kind!r}")


def load_spec(path) -> ChaosSpec:
    with open(path) as fh:
        return spec_from_json_dict(json.load(fh))


def clt_family_spec(d: int) -> SecondChaos:
    """d equal eigenvalues 1/sqrt(2d); variance 1, Gaussian as d grows."""
    if d < 1:
        raise ValueError("d must be >= 1")
    lam = RadQ.sqrt(Fraction(1, 2 * d))
    return SecondChaos((lam,) * d)


# ---------------------------------------------------------------------------
# Exact moment oracles
# ---------------------------------------------------------------------------


def _eigenvalue_power_sums(spec: SecondChaos, r_max: int) -> list:
    """[sum lambda^1, ..., sum lambda^r_max], grouping repeated eigenvalues."""
    sums = [RadQ() for _ in range(r_max)]
    for lam, mult in Counter(spec.eigenvalues).items():
        power = RadQ.from_rational(1)
        for r in range(r_max):
            power = power * lam
            sums[r] = sums[r] + mult * power
    return sums


def second_chaos_cumulant_value(lambdas: Iterable, r: int) -> RadQ:
    """kappa_r of sum lambda_i (xi_i^2 - 1) as an exact radical value."""
    spec = lambdas if isinstance(lambdas, SecondChaos) else SecondChaos(tuple(lambdas))
    if r < 1:
        raise ValueError("cumulant order must be >= 1")
    if r == 1:
        return RadQ()
    power_sum = _eigenvalue_power_sums(spec, r)[r - 1]
    return (2 ** (r - 1) * factorial(r - 1)) * power_sum


def second_chaos_cumulant(lambdas: Iterable, r: int) -> Fraction:
    """kappa_r for rational eigenvalues: kappa_1 = 0 and
    kappa_r = 2^{r-1} (r-1)! sum lambda_i^r for r >= 2."""
    return second_chaos_cumulant_value(lambdas, r).as_fraction()


def _moments_from_cumulants(kappas) -> list:
    """m_n = sum_j C(n-1, j-1) kappa_j m_{n-j}, m_0 = 1; exact and generic."""
    moments = [RadQ.from_rational(1)]
    for n in range(1, len(kappas) + 1):
        total = RadQ()
        for j in range(1, n + 1):
            total = total + comb(n - 1, j - 1) * _scalar(kappas[j - 1]) * moments[n - j]
        moments.append(total)
    return moments


def cumulants_to_moments(kappas) -> MomentSequence:
    """Exact moment sequence from cumulants kappa_1..kappa_n."""
    values = _moments_from_cumulants([Q(k) for k in kappas])
    return MomentSequence.from_values([v.as_fraction() for v in values])


def second_chaos_moment_values(spec, up_to: int) -> list:
    """m_0..m_{up_to} of a second-chaos element, exact (RadQ entries)."""
    spec = spec if isinstance(spec, SecondChaos) else SecondChaos(tuple(spec))
    if up_to < 1:
        return [RadQ.from_rational(1)]
    power_sums = _eigenvalue_power_sums(spec, up_to)
    kappas = [RadQ()] + [
        (2 ** (r - 1) * factorial(r - 1)) * power_sums[r - 1]
        for r in range(2, up_to + 1)
    ]
    return _moments_from_cumulants(kappas)


def second_chaos_exact_moments(spec, up_to: int) -> MomentSequence:
    values = second_chaos_moment_values(spec, up_to)
    return MomentSequence.from_values([v.as_fraction() for v in values])


@lru_cache(maxsize=None)
def _hermite_product_expectation(degrees: tuple) -> Fraction:
    """E[prod H_{d}(xi)] for one coordinate, by iterated linearization."""
    if not degrees:
        return Fraction(1)
    if sum(degrees) % 2:
        return Fraction(0)
    expansion = {degrees[0]: Fraction(1)}
    for degree in degrees[1:]:
        nxt: dict = {}
        for index, coeff in expansion.items():
            for index2, coeff2 in hermite_linearize(index, degree).items():
                nxt[index2] = nxt.get(index2, Fraction(0)) + coeff * coeff2
        expansion = nxt
    return expansion.get(0, Fraction(0))


def hermite_combo_moment_values(
    spec: HermiteCombo, up_to: int, term_budget: int = DEFAULT_TERM_BUDGET
) -> list:
    """m_0..m_{up_to} of a Hermite combination, exact (RadQ entries).

    The multinomial expansion of X^j runs over multisets of terms; the
    total number of multisets across all orders is bounded by term_budget.
    """
    n_terms = len(spec.terms)
    work = sum(comb(n_terms + j - 1, j) for j in range(1, up_to + 1))
    if work > term_budget:
        raise ResourceLimitError(
            f"exact expansion needs {work} product terms, budget is {term_budget}"
        )
    values = [RadQ.from_rational(1)]
    for j in range(1, up_to + 1):
        total = RadQ()
        for multiset in combinations_with_replacement(range(n_terms), j):
            counts = Counter(multiset)
            coefficient = RadQ.from_rational(
                Fraction(factorial(j), math.prod(factorial(c) for c in counts.values()))
            )
            for index, mult in counts.items():
                coefficient = coefficient * spec.terms[index][0] ** mult
            if not coefficient:
                continue
            expectation = Fraction(1)
            for coordinate in range(spec.n_coordinates):
                degs = tuple(
                    sorted(
                        d
                        for index, mult in counts.items()
                        for d in [spec.terms[index][1][coordinate]] * mult
                        if d
                    )
                )
                expectation *= _hermite_product_expectation(degs)
                if expectation == 0:
                    break
            if expectation:
                total = total + coefficient * expectation
        values.append(total)
    return values


def hermite_combo_exact_moments(
    spec: HermiteCombo, up_to: int, term_budget: int = DEFAULT_TERM_BUDGET
) -> MomentSequence:
    """Exact rational moments of a combo; raises if a moment is irrational."""
    values = hermite_combo_moment_values(spec, up_to, term_budget)
    return MomentSequence.from_values([v.as_fraction() for v in values])


def mixture_moments(alpha, up_to: int = 12) -> MomentSequence:
    """m_{2j} = alpha (2j-1)!!, odd moments zero, m_0 = 1."""
    alpha = Q(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError("mixture weight must lie in [0, 1]")
    values = [Fraction(1)]
    for order in range(1, up_to + 1):
        values.append(alpha * double_factorial(order - 1) if order % 2 == 0 else Fraction(0))
    return MomentSequence.from_values(values)


def exact_moment_values(spec: ChaosSpec, up_to: int) -> list:
    """Dispatch to the exact oracle of any chaos spec; RadQ entries."""
    if isinstance(spec, SecondChaos):
        return second_chaos_moment_values(spec, up_to)
    if isinstance(spec, HermiteCombo):
        return hermite_combo_moment_values(spec, up_to)
    if isinstance(spec, Mixture):
        ms = mixture_moments(spec.gaussian_weight, up_to)
        return [RadQ.from_rational(m) for m in ms.moments]
    raise TypeError(f"not a chaos spec: {spec!r}")


def exact_moments(spec: ChaosSpec, up_to: int) -> MomentSequence:
    """Exact rational MomentSequence; raises when a moment is irrational."""
    values = exact_moment_values(spec, up_to)
    return MomentSequence.from_values([v.as_fraction() for v in values])


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def _generator(seed: int, stream: int) -> np.random.Generator:
    bitgen = np.random.Philox(key=seed)
    if stream:
        bitgen = bitgen.jumped(stream)
    return np.random.Generator(bitgen)


def sample_chaos(spec: ChaosSpec, n: int, seed: int, stream: int = 0):
    """Yield float64 blocks of i.i.d. realizations, CHUNK samples at a time.

    Bit-reproducible given (spec, n, seed, stream) on a fixed backend.
    """
    if n < 1:
        raise ValueError("need n >= 1 samples")
    rng = _generator(seed, stream)
    remaining = n
    if isinstance(spec, SecondChaos):
        lambdas = np.ascontiguousarray([float(v) for v in spec.eigenvalues])
        while remaining:
            m = min(CHUNK, remaining)
            xi = rng.standard_normal((m, lambdas.size))
            yield kernels.second_chaos_batch(xi, lambdas)
            remaining -= m
    elif isinstance(spec, HermiteCombo):
        coefs = np.ascontiguousarray([float(c) for c, _ in spec.terms])
        degrees = np.ascontiguousarray(
            [list(d) for _, d in spec.terms], dtype=np.int64
        )
        while remaining:
            m = min(CHUNK, remaining)
            xi = rng.standard_normal((m, spec.n_coordinates))
            yield kernels.hermite_combo_batch(xi, coefs, degrees)
            remaining -= m
    elif isinstance(spec, Mixture):
        alpha = float(spec.gaussian_weight)
        while remaining:
            m = min(CHUNK, remaining)
            normals = rng.standard_normal(m)
            uniforms = rng.random(m)
            yield normals * (uniforms < alpha)
            remaining -= m
    else:
        raise TypeError(f"not a chaos spec: {spec!r}")


def collect_samples(spec: ChaosSpec, n: int, seed: int, stream: int = 0) -> np.ndarray:
    return np.concatenate(list(sample_chaos(spec, n, seed, stream)))


# ---------------------------------------------------------------------------
# Total variation distance to the standard Gaussian
# ---------------------------------------------------------------------------


def _gaussian_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def _gaussian_bin_masses(bin_count: int, half_range: float) -> np.ndarray:
    """Masses for [underflow, uniform bins over [-R, R], overflow]."""
    edges = np.linspace(-half_range, half_range, bin_count + 1)
    cdf = np.array([_gaussian_cdf(e) for e in edges])
    masses = np.empty(bin_count + 2)
    masses[0] = cdf[0]
    masses[1:-1] = np.diff(cdf)
    masses[-1] = 1.0 - cdf[-1]
    return masses


def _dtv_from_counts(counts: np.ndarray, n: int, bin_count: int, half_range: float) -> float:
    masses = _gaussian_bin_masses(bin_count, half_range)
    return 0.5 * float(np.abs(counts / n - masses).sum())


def dtv_estimate(
    samples,
    bin_count: int = DTV_BIN_COUNT,
    half_range: float = DTV_HALF_RANGE,
) -> float:
    """Binned estimate of the total variation distance to N(0, 1).

    Accepts an array or an iterable of blocks; needs at least 10^4 samples.
    """
    if isinstance(samples, np.ndarray):
        blocks = [samples]
    else:
        blocks = samples
    counts = np.zeros(bin_count + 2, dtype=np.int64)
    total = 0
    for block in blocks:
        block = np.asarray(block, dtype=float)
        counts += kernels.bin_counts(block, -half_range, half_range, bin_count)
        total += block.size
    if total < DTV_MIN_SAMPLES:
        raise ValueError(f"dtv_estimate needs at least {DTV_MIN_SAMPLES} samples")
    return _dtv_from_counts(counts, total, bin_count, half_range)


def dtv_bound(k: int, m2k) -> Optional[float]:
    """C_k sqrt(m_{2k}/(2k-1)!! - 1), or None when the radicand is negative."""
    _, c_k = stein_constant(k)
    inner = float(m2k) / double_factorial(2 * k - 1) - 1.0
    if inner < 0:
        return None
    return c_k * math.sqrt(inner)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class SampleReport:
    """Empirical moments with standard errors, next to the exact oracle."""

    spec: dict
    n: int
    seed: int
    shards: int
    orders: int
    backend: str
    empirical: list
    standard_errors: list
    oracle: Optional[list] = None  # RadQ entries m_1..m_orders
    dtv: Optional[dict] = None
    chunk: int = CHUNK
    bit_generator: str = "philox"
    normal_method: str = "ziggurat"
    split_rule: str = "stream s = Philox(key=seed).jumped(s)"

    def moment_rows(self) -> list:
        rows = []
        for j in range(1, self.orders + 1):
            emp = self.empirical[j - 1]
            se = self.standard_errors[j - 1]
            row = {"order": j, "empirical": emp, "se": se}
            if self.oracle is not None:
                value = self.oracle[j]
                row["oracle"] = float(value)
                row["oracle_exact"] = str(value) if value.is_rational else None
                diff = emp - float(value)
                row["zscore"] = diff / se if se > 0 else (0.0 if diff == 0 else math.inf)
                row["within_5se"] = abs(row["zscore"]) <= 5.0
                row["flagged_3se"] = 3.0 < abs(row["zscore"]) <= 5.0
            rows.append(row)
        return rows

    def to_json_dict(self) -> dict:
        from . import __version__

        return {
            "spec": self.spec,
            "n": self.n,
            "seed": self.seed,
            "shards": self.shards,
            "chunk": self.chunk,
            "backend": self.backend,
            "bit_generator": self.bit_generator,
            "normal_method": self.normal_method,
            "split_rule": self.split_rule,
            "version": __version__,
            "numpy_version": np.__version__,
            "moments": self.moment_rows(),
            "dtv": self.dtv,
        }


def simulate_report(
    spec: ChaosSpec,
    n: int,
    seed: int,
    orders: int = 8,
    shards: int = 1,
    with_dtv: bool = False,
    bin_count: int = DTV_BIN_COUNT,
    half_range: float = DTV_HALF_RANGE,
    out_path=None,
    require_oracle: bool = False,
) -> SampleReport:
    """Single pass over the sample stream: moments, optional dTV, optional raw dump.

    Standard errors use SE_j = std(X^j)/sqrt(n), so power sums run to 2*orders.
    When the exact oracle exceeds its expansion budget the report degrades to
    empirical-only columns, unless require_oracle is set, in which case the
    resource error propagates.
    """
    if shards < 1:
        raise ValueError("shards must be >= 1")
    power_max = 2 * orders
    sums = np.zeros(power_max)
    counts = np.zeros(bin_count + 2, dtype=np.int64)
    out_file = open(out_path, "wb") if out_path else None
    try:
        for shard in range(shards):
            shard_n = n // shards + (1 if shard < n % shards else 0)
            if shard_n == 0:
                continue
            for block in sample_chaos(spec, shard_n, seed, stream=shard):
                sums += kernels.power_sums(block, power_max)
                if with_dtv:
                    counts += kernels.bin_counts(block, -half_range, half_range, bin_count)
                if out_file is not None:
                    block.astype("<f8").tofile(out_file)
    finally:
        if out_file is not None:
            out_file.close()

    means = sums / n
    empirical = [float(means[j - 1]) for j in range(1, orders + 1)]
    ses = [
        math.sqrt(max(means[2 * j - 1] - means[j - 1] ** 2, 0.0) / n)
        for j in range(1, orders + 1)
    ]

    try:
        oracle = exact_moment_values(spec, orders)
    except ResourceLimitError:
        if require_oracle:
            raise
        oracle = None

    dtv = None
    if with_dtv:
        if n < DTV_MIN_SAMPLES:
            raise ValueError(f"dTV estimation needs at least {DTV_MIN_SAMPLES} samples")
        estimate = _dtv_from_counts(counts, n, bin_count, half_range)
        bounds = []
        if oracle is not None:
            for k in range(2, orders // 2 + 1):
                bound = dtv_bound(k, float(oracle[2 * k]))
                if bound is None:
                    continue
                bounds.append(
                    {"k": k, "bound": bound, "satisfied": estimate <= bound}
                )
        dtv = {
            "estimate": estimate,
            "bin_count": bin_count,
            "half_range": half_range,
            "bounds": bounds,
        }

    return SampleReport(
        spec=spec.to_json_dict(),
        n=n,
        seed=seed,
        shards=shards,
        orders=orders,
        backend=kernels.backend(),
        empirical=empirical,
        standard_errors=ses,
        oracle=oracle,
        dtv=dtv,
    )
