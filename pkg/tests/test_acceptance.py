"""Acceptance suite: one test per criterion, each printing a PASS line.

Exact criteria run at zero tolerance (rational arithmetic end to end);
statistical criteria use a fixed seed and a 5-standard-error gate.
Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
"""

import random
import time
from fractions import Fraction

from chaos_lab.chaos_sim import (
    HermiteCombo,
    SecondChaos,
    clt_family_spec,
    mixture_moments,
    second_chaos_exact_moments,
    second_chaos_moment_values,
    simulate_report,
)
from chaos_lab.exact_poly import X, gaussian_expectation
from chaos_lab.moment_forms import (
    MomentSequence,
    build_moment_matrix,
    check_even_bound,
    check_fourth_moment_ineq,
    check_sixth_moment_ineq,
    expected_w,
    kappa6,
    leading_minors,
)
from chaos_lab.verify import jacobi_moments, random_rational_eigenvalues
from chaos_lab.wfamily import (
    alpha_coeff,
    expand_in_w,
    q_poly,
    stein_constant,
    t_kl_poly,
    t_poly,
    w_poly,
)

SEED = 20240
SAMPLES = 10 ** 6

GAUSSIAN = MomentSequence.from_values([1, 0, 1, 0, 3, 0, 15])


def _report(number: int, label: str) -> None:
    print(f"ACCEPTANCE {number:>2} {label}: PASS")


def test_criterion_01_route_equivalence():
    start = time.perf_counter()
    for k in range(2, 13):
        expansion = expand_in_w(t_poly(k))
        assert expansion.residual_a == 0 and expansion.residual_b == 0
        for i in range(2, k + 1):
            assert alpha_coeff(i, k) == expansion.coefficient(i)
        assert alpha_coeff(2, k) > 0
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _report(1, f"alpha(i,k) route equivalence, 2<=i<=k<=12, {elapsed:.2f}s")


def test_criterion_02_w_family_identities():
    for k in range(2, 13):
        w = w_poly(k)
        assert gaussian_expectation(w) == 0
        assert w.degree == 2 * k
        assert w.leading_coefficient() == 1
        assert w.is_even_function()
        q = q_poly(k)
        assert X * q.integrate() - q == t_poly(k)
    _report(2, "W_k identities and Q_k functional equation, k<=12")


def test_criterion_03_table_reproduction():
    expected = {
        (2, 3): {3: Fraction(1), 2: Fraction(5, 2)},
        (2, 4): {4: Fraction(1), 3: Fraction(84, 5), 2: Fraction(28)},
        (2, 5): {
            5: Fraction(1),
            4: Fraction(180, 7),
            3: Fraction(234),
            2: Fraction(585, 2),
        },
        (3, 4): {4: Fraction(1), 3: Fraction(112, 15), 2: Fraction(14, 3)},
        (3, 5): {5: Fraction(1), 4: Fraction(180, 7), 3: Fraction(129), 2: Fraction(30)},
    }
    for (k, l), coeffs in expected.items():
        poly, expansion, verdict = t_kl_poly(k, l)
        assert expansion.coefficients == coeffs
        assert expansion.residual_a == 0 and expansion.residual_b == 0
        assert verdict.in_family
        assert expansion.reconstruct() == poly
    poly45, expansion45, verdict45 = t_kl_poly(4, 5)
    assert expansion45.coefficient(2) == Fraction(-45, 2)
    assert not verdict45.in_family
    assert verdict45.negative_indices == (2,)
    assert expansion45.reconstruct() == poly45
    _report(3, "five W-expansions exact; T(4,5) carries -45/2 and leaves the family")


def test_criterion_04_moment_matrix_displays():
    marks = MomentSequence(
        (Fraction(1), Fraction(0), Fraction(2), Fraction(3), Fraction(5), Fraction(7), Fraction(11)),
        exact=True,
    )
    m2 = build_moment_matrix(2, marks)
    assert m2.entry(2, 2) == Fraction(2, 3) * marks.m(4)
    assert m2.entry(0, 2) == 2 * marks.m(2)
    assert m2.entry(1, 1) == marks.m(2)
    assert m2.entry(0, 1) == 0
    m3 = build_moment_matrix(3, marks)
    assert m3.entry(3, 3) == Fraction(6, 5) * marks.m(6)
    assert m3.entry(2, 2) == Fraction(5, 3) * marks.m(4)
    assert m3.entry(1, 3) == 2 * marks.m(4)
    assert m3.entry(1, 1) == 2 * marks.m(2)

    rnd = random.Random(SEED)
    for _ in range(100):
        m2v = Fraction(rnd.randint(1, 40), rnd.randint(1, 10))
        m3v = Fraction(rnd.randint(-40, 40), rnd.randint(1, 10))
        m4v = Fraction(rnd.randint(0, 80), rnd.randint(1, 10))
        ms = MomentSequence((Fraction(1), Fraction(0), m2v, m3v, m4v), exact=True)
        det = leading_minors(build_moment_matrix(2, ms))[-1]
        assert det == 4 * m2v * (m4v / 3 - m2v ** 2) - 2 * m3v ** 2
    _report(4, "M_2/M_3 displays and det M_2 identity on 100 random sequences")


def test_criterion_05_inequality_suite_on_exact_second_chaos():
    start = time.perf_counter()
    rnd = random.Random(SEED)
    cases = 200
    for _ in range(cases):
        lambdas = random_rational_eigenvalues(rnd)
        ms = second_chaos_exact_moments(SecondChaos(tuple(lambdas)), 10)
        assert check_fourth_moment_ineq(ms).holds
        assert check_sixth_moment_ineq(ms).holds
        for k in range(2, 6):
            assert check_even_bound(ms, k).holds
        for j in range(2, 6):
            assert expected_w(j, ms) >= 0
        for k in range(2, 5):
            assert all(m >= 0 for m in leading_minors(build_moment_matrix(k, ms)))
        assert kappa6(ms) >= 0
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    _report(5, f"exact inequality suite on {cases} second-chaos laws, {elapsed:.1f}s")


def test_criterion_06_saturation_cases():
    assert check_sixth_moment_ineq(GAUSSIAN).slack == 0
    assert check_fourth_moment_ineq(GAUSSIAN).slack == 0
    gamma = second_chaos_exact_moments(SecondChaos((1,)), 4)
    assert leading_minors(build_moment_matrix(2, gamma))[-1] == 0
    _report(6, "Gaussian saturates; centered gamma gives det M_2 = 0")


def test_criterion_07_jacobi_counterexample():
    ms = jacobi_moments()
    assert ms.m(2) == Fraction(4, 45)
    verdict = check_even_bound(ms, 2)
    assert not verdict.holds
    assert ms.m(4) == Fraction(16, 945)
    assert verdict.lhs == Fraction(16, 675)
    _report(7, "U^2 - 1/3: m_2 = 4/45 and 16/945 < 16/675 breaks the k=2 bound")


def test_criterion_08_mixture_example():
    ms = mixture_moments(Fraction(1, 2), 10)
    assert expected_w(3, ms) == 0
    assert expected_w(5, ms) == 0
    assert expected_w(2, ms) == Fraction(3, 2)
    _report(8, "half-Gaussian mixture: E[W_3] = E[W_5] = 0, E[W_2] = 3/2")


def test_criterion_09_stein_constants():
    inner2, c2 = stein_constant(2)
    assert inner2 == 4 and c2 == 2.0
    inners = [stein_constant(k)[0] for k in range(2, 13)]
    assert all(isinstance(v, Fraction) for v in inners)
    assert all(b > a for a, b in zip(inners, inners[1:]))
    _report(9, "C_2 = 2 with exact inner value 4; inner exact for k<=12")


def test_criterion_10_statistical_suite():
    start = time.perf_counter()
    specs = {
        "N1N2": HermiteCombo(((1, (1, 1)),)),
        "gamma": SecondChaos((1,)),
        "d=10": clt_family_spec(10),
        "d=100": clt_family_spec(100),
    }
    worst = 0.0
    dtv_estimate_d100 = None
    bounds_d100 = None
    for label, spec in specs.items():
        with_dtv = label == "d=100"
        report = simulate_report(spec, SAMPLES, SEED, orders=8, with_dtv=with_dtv)
        rows = report.moment_rows()
        assert all(row["within_5se"] for row in rows), f"{label} moment outside 5 SE"
        worst = max(worst, max(abs(r["zscore"]) for r in rows))
        if with_dtv:
            dtv_estimate_d100 = report.dtv["estimate"]
            bounds_d100 = {entry["k"]: entry["bound"] for entry in report.dtv["bounds"]}

    # k=2 bound is exactly C_2 sqrt(m_4/3 - 1) = 4/sqrt(d) = 0.4 at d = 100
    assert abs(bounds_d100[2] - 0.4) < 1e-12
    assert dtv_estimate_d100 <= 0.4
    # k=3 bound from the exact m_6 = 15 + 260/d + 480/d^2
    m6 = second_chaos_moment_values(clt_family_spec(100), 6)[6].as_fraction()
    assert m6 == Fraction(2206, 125)
    assert dtv_estimate_d100 <= bounds_d100[3]
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    _report(
        10,
        f"moments within 5 SE (max |z| = {worst:.2f}); dTV(d=100) = "
        f"{dtv_estimate_d100:.4f} <= 0.4 and <= {bounds_d100[3]:.4f}; {elapsed:.0f}s",
    )


def test_criterion_11_sixth_moment_exhibit():
    previous = None
    for d in range(1, 1001):
        m6 = second_chaos_moment_values(clt_family_spec(d), 6)[6].as_fraction()
        assert m6 == 15 + Fraction(260, d) + Fraction(480, d * d)
        if previous is not None:
            assert m6 < previous
        previous = m6
    assert previous == Fraction(15 * 10 ** 6 + 260 * 10 ** 3 + 480, 10 ** 6)
    _report(11, "m_6(d) = 15 + 260/d + 480/d^2 strictly decreasing to 15, d<=1000")
