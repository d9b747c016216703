import json
import random
from fractions import Fraction

import numpy as np
import pytest

from chaos_lab.chaos_sim import (
    CHUNK,
    HermiteCombo,
    Mixture,
    ResourceLimitError,
    SecondChaos,
    clt_family_spec,
    collect_samples,
    cumulants_to_moments,
    dtv_bound,
    dtv_estimate,
    exact_moments,
    hermite_combo_exact_moments,
    hermite_combo_moment_values,
    load_spec,
    mixture_moments,
    sample_chaos,
    second_chaos_cumulant,
    second_chaos_exact_moments,
    second_chaos_moment_values,
    simulate_report,
    spec_from_json_dict,
)
from chaos_lab.radicals import RadQ

PRODUCT = SecondChaos((Fraction(1, 2), Fraction(-1, 2)))
PRODUCT_COMBO = HermiteCombo(((1, (1, 1)),))


# ---------------------------------------------------------------------------
# exact oracles
# ---------------------------------------------------------------------------


def test_second_chaos_cumulant_examples():
    assert second_chaos_cumulant([1], 2) == 2
    assert second_chaos_cumulant([Fraction(1, 2), Fraction(-1, 2)], 3) == 0
    assert second_chaos_cumulant([Fraction(1, 2), Fraction(-1, 2)], 4) == 6
    assert second_chaos_cumulant(["1/2", "-1/2"], 1) == 0
    with pytest.raises(ValueError):
        second_chaos_cumulant([], 2)
    with pytest.raises(ValueError):
        second_chaos_cumulant([1], 0)


def test_cumulants_to_moments_examples():
    gaussian = cumulants_to_moments([0, 1, 0, 0, 0, 0])
    assert gaussian.moments == (1, 0, 1, 0, 3, 0, 15)

    gamma_kappas = [second_chaos_cumulant([1], r) for r in range(1, 5)]
    assert cumulants_to_moments(gamma_kappas).m(4) == 60

    product_kappas = [
        second_chaos_cumulant([Fraction(1, 2), Fraction(-1, 2)], r) for r in range(1, 7)
    ]
    assert cumulants_to_moments(product_kappas).m(6) == 225


def test_combo_exact_moments_examples():
    ms = hermite_combo_exact_moments(PRODUCT_COMBO, 8)
    assert ms.m(4) == 9
    assert ms.m(6) == 225
    assert ms.m(8) == 11025

    scaled_h2 = HermiteCombo((("sqrt(1/2)", (2,)),))
    assert hermite_combo_moment_values(scaled_h2, 2)[2] == 1

    scaled_h3 = HermiteCombo((("sqrt(1/6)", (3,)),))
    assert hermite_combo_moment_values(scaled_h3, 2)[2] == 1


def test_combo_irrational_moment_is_refused_as_rational():
    scaled_h2 = HermiteCombo((("sqrt(1/2)", (2,)),))
    values = hermite_combo_moment_values(scaled_h2, 3)
    assert values[3] == 2 * RadQ.sqrt(2)
    with pytest.raises(ValueError):
        hermite_combo_exact_moments(scaled_h2, 3)


def test_combo_term_budget():
    with pytest.raises(ResourceLimitError):
        hermite_combo_moment_values(PRODUCT_COMBO, 10, term_budget=5)


def test_combo_validation():
    with pytest.raises(ValueError):
        HermiteCombo(())
    with pytest.raises(ValueError):
        HermiteCombo(((1, (1, 1)), (1, (2, 1))))  # mixed total degree
    with pytest.raises(ValueError):
        HermiteCombo(((1, (-1,)),))


def test_oracle_agreement_second_chaos_vs_combo():
    # X = sum lambda_i (xi_i^2 - 1) equals the combo sum lambda_i H_2(xi_i)
    rnd = random.Random(17)
    for _ in range(50):
        length = rnd.randint(1, 6)
        lambdas = [
            Fraction(rnd.randint(-2 * d, 2 * d), d)
            for d in [rnd.randint(1, 8) for _ in range(length)]
        ]
        if all(v == 0 for v in lambdas):
            lambdas[0] = Fraction(1, 2)
        combo = HermiteCombo(
            tuple(
                (lam, tuple(2 if i == j else 0 for i in range(length)))
                for j, lam in enumerate(lambdas)
            )
        )
        spectral = cumulants_to_moments(
            [second_chaos_cumulant(lambdas, r) for r in range(1, 11)]
        )
        direct = hermite_combo_exact_moments(combo, 10)
        assert spectral.moments == direct.moments
        assert second_chaos_moment_values(
            SecondChaos(tuple(lambdas)), 10
        ) == hermite_combo_moment_values(combo, 10)


def test_mixture_moments_examples():
    ms = mixture_moments(Fraction(1, 2), 4)
    assert ms.m(2) == Fraction(1, 2)
    assert ms.m(4) == Fraction(3, 2)
    assert ms.m(3) == 0

    atom = mixture_moments(0, 6)
    assert atom.m(0) == 1
    assert all(atom.m(j) == 0 for j in range(1, 7))

    with pytest.raises(ValueError):
        mixture_moments(Fraction(3, 2))


def test_clt_family_even_moments():
    values = second_chaos_moment_values(clt_family_spec(100), 6)
    assert values[2].as_fraction() == 1
    assert values[4].as_fraction() == Fraction(78, 25)  # 3 + 12/d
    assert values[6].as_fraction() == Fraction(2206, 125)  # 15 + 260/d + 480/d^2
    with pytest.raises(ValueError):
        clt_family_spec(0)


def test_exact_moments_dispatcher():
    assert exact_moments(PRODUCT, 6).m(6) == 225
    assert exact_moments(PRODUCT_COMBO, 6).m(6) == 225
    assert exact_moments(Mixture(Fraction(1, 2)), 4).m(4) == Fraction(3, 2)


def test_second_chaos_exact_moments_matches_cumulant_route():
    ms = second_chaos_exact_moments(SecondChaos((1,)), 6)
    assert ms.moments == (1, 0, 2, 8, 60, 544, 6040)


# ---------------------------------------------------------------------------
# spec JSON
# ---------------------------------------------------------------------------


def test_spec_json_round_trip(tmp_path):
    specs = [
        SecondChaos(("1/2", "-1/2")),
        HermiteCombo((("sqrt(1/2)", (2,)),)),
        Mixture(Fraction(1, 2)),
        clt_family_spec(3),
    ]
    for spec in specs:
        data = spec.to_json_dict()
        assert spec_from_json_dict(json.loads(json.dumps(data))) == spec

    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"type": "second_chaos", "lambdas": ["1/2", "-1/2"]}))
    assert load_spec(path) == PRODUCT

    with pytest.raises(ValueError):
        spec_from_json_dict({"type": "nope"})


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def test_streams_are_bit_identical_given_seed():
    for spec in (PRODUCT, PRODUCT_COMBO, Mixture(Fraction(1, 3))):
        a = collect_samples(spec, 3 * CHUNK // 2, 42)
        b = collect_samples(spec, 3 * CHUNK // 2, 42)
        assert np.array_equal(a, b)
        c = collect_samples(spec, 3 * CHUNK // 2, 43)
        assert not np.array_equal(a, c)


def test_streams_differ_across_shard_indices():
    a = collect_samples(PRODUCT, 1000, 42, stream=0)
    b = collect_samples(PRODUCT, 1000, 42, stream=1)
    assert not np.array_equal(a, b)


def test_sample_chaos_validates_n():
    with pytest.raises(ValueError):
        list(sample_chaos(PRODUCT, 0, 1))


def test_standard_normal_mixture_moments():
    report = simulate_report(Mixture(1), 10 ** 6, 5, orders=2)
    assert all(row["within_5se"] for row in report.moment_rows())


def test_half_mixture_fourth_moment():
    report = simulate_report(Mixture(Fraction(1, 2)), 10 ** 6, 15, orders=4)
    rows = report.moment_rows()
    assert rows[3]["oracle_exact"] == "3/2"
    assert all(row["within_5se"] for row in rows)


def test_second_chaos_m4_close_to_oracle():
    report = simulate_report(PRODUCT, 10 ** 6, 6, orders=4)
    rows = report.moment_rows()
    assert rows[3]["oracle"] == 9.0
    assert abs(rows[3]["empirical"] - 9.0) <= 5 * rows[3]["se"]


def test_combo_and_spectral_sampling_agree_in_distribution():
    # same law, different transforms: compare moments loosely
    a = simulate_report(PRODUCT, 200_000, 9, orders=4)
    b = simulate_report(PRODUCT_COMBO, 200_000, 9, orders=4)
    for ra, rb in zip(a.moment_rows(), b.moment_rows()):
        assert ra["within_5se"] and rb["within_5se"]


def test_shards_split_streams_and_stay_deterministic():
    one = simulate_report(PRODUCT, 40_000, 3, orders=4, shards=4)
    two = simulate_report(PRODUCT, 40_000, 3, orders=4, shards=4)
    assert one.empirical == two.empirical
    assert all(row["within_5se"] for row in one.moment_rows())


def test_simulate_report_raw_output(tmp_path):
    out = tmp_path / "samples.f64"
    simulate_report(PRODUCT, 5000, 21, orders=2, out_path=out)
    raw = np.fromfile(out, dtype="<f8")
    assert raw.size == 5000
    direct = collect_samples(PRODUCT, 5000, 21)
    assert np.array_equal(raw, direct)


# ---------------------------------------------------------------------------
# total variation distance
# ---------------------------------------------------------------------------


def test_dtv_needs_enough_samples():
    with pytest.raises(ValueError):
        dtv_estimate(np.zeros(100))


def test_dtv_of_point_mass_is_large():
    assert dtv_estimate(np.zeros(20_000)) >= 0.49


def test_dtv_of_true_normals_is_small():
    samples = collect_samples(Mixture(1), 10 ** 6, 11)
    assert dtv_estimate(samples) <= 0.01


def test_dtv_accepts_block_iterables():
    blocks = sample_chaos(Mixture(1), 50_000, 13)
    value = dtv_estimate(blocks)
    assert 0.0 <= value <= 0.02


def test_dtv_bound_values():
    assert dtv_bound(2, 3.12) == pytest.approx(2.0 * (0.04) ** 0.5)
    assert dtv_bound(2, 2.9) is None  # radicand negative: bound not applicable


def test_simulate_report_dtv_block():
    report = simulate_report(clt_family_spec(25), 50_000, 8, orders=6, with_dtv=True)
    assert report.dtv is not None
    ks = [entry["k"] for entry in report.dtv["bounds"]]
    assert ks == [2, 3]
    assert all(entry["satisfied"] for entry in report.dtv["bounds"])
