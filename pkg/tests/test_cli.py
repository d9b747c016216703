import json

import numpy as np

from chaos_lab.cli import main

GAUSSIAN_CSV = "1\n0\n1\n0\n3\n0\n15\n"
JACOBI_CSV = "1\n0\n4/45\n16/945\n16/945\n"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_expand_tk(capsys):
    code, out, _ = run(capsys, "expand", "--tk", "3", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["w_coeffs"] == {"2": "10", "3": "1"}
    assert payload["residual"] == ["0", "0"]
    assert payload["in_family"] is True


def test_expand_tkl_not_in_family_still_exits_zero(capsys):
    code, out, _ = run(capsys, "expand", "--tkl", "4", "5", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["w_coeffs"]["2"] == "-45/2"
    assert payload["in_family"] is False
    assert payload["negative_indices"] == [2]


def test_expand_tkl_table_output(capsys):
    code, out, _ = run(capsys, "expand", "--tkl", "2", "3")
    assert code == 0
    assert "W_3" in out and "5/2" in out
    assert "in nonnegative W family: True" in out


def test_expand_inline_polynomial(capsys):
    code, out, _ = run(
        capsys, "expand", "--poly", '{"coeffs": ["30", "0", "-45", "0", "0", "0", "1"]}',
        "--json",
    )
    assert code == 0
    assert json.loads(out)["w_coeffs"] == {"2": "10", "3": "1"}


def test_expand_polynomial_from_file(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text('{"coeffs": ["3", "0", "-6", "0", "1"]}')
    code, out, _ = run(capsys, "expand", "--poly", f"@{path}", "--json")
    assert code == 0
    assert json.loads(out)["w_coeffs"] == {"2": "1"}


def test_expand_parse_error_exits_2(capsys):
    code, _, err = run(capsys, "expand", "--poly", "{bad json")
    assert code == 2
    assert "input error" in err


def test_expand_odd_polynomial_exits_2(capsys):
    code, _, err = run(capsys, "expand", "--poly", '{"coeffs": ["0", "1", "0", "0", "1"]}')
    assert code == 2


def test_certify_gaussian_passes(capsys, tmp_path):
    path = tmp_path / "gauss.csv"
    path.write_text(GAUSSIAN_CSV)
    code, out, _ = run(capsys, "certify", "--moments", str(path), "--k", "3", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["pass"] is True
    sixth = next(c for c in payload["checks"] if c["name"] == "sixth-moment")
    assert sixth["slack"] == "0"
    assert payload["kappa6"] == "0"


def test_certify_jacobi_fails_with_exit_1(capsys, tmp_path):
    path = tmp_path / "jacobi.csv"
    path.write_text(JACOBI_CSV)
    code, out, _ = run(capsys, "certify", "--moments", str(path), "--k", "2", "--json")
    assert code == 1
    payload = json.loads(out)
    assert payload["pass"] is False
    bound = next(c for c in payload["checks"] if c["name"] == "even-bound-k2")
    assert bound["holds"] is False


def test_certify_gamma_reports_singular_matrix(capsys, tmp_path):
    path = tmp_path / "gamma.csv"
    path.write_text("1\n0\n2\n8\n60\n")
    code, out, _ = run(capsys, "certify", "--moments", str(path), "--k", "2", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["leading_minors"] == ["2", "4", "0"]


def test_certify_missing_file_exits_2(capsys, tmp_path):
    code, _, err = run(capsys, "certify", "--moments", str(tmp_path / "nope.csv"))
    assert code == 2


def test_certify_malformed_file_exits_2(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("banana\n")
    code, _, err = run(capsys, "certify", "--moments", str(path))
    assert code == 2


def test_simulate_json_is_deterministic(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"type": "second_chaos", "lambdas": ["1/2", "-1/2"]}))
    args = ("simulate", "--spec", str(spec), "--n", "20000", "--seed", "5",
            "--orders", "4", "--json")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["n"] == 20000
    assert payload["seed"] == 5
    orders = [row["order"] for row in payload["moments"]]
    assert orders == [1, 2, 3, 4]
    m4 = payload["moments"][3]
    assert m4["oracle_exact"] == "9"
    assert m4["within_5se"] is True


def test_simulate_table_and_dtv(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"type": "mixture", "gaussian_weight": "1"}))
    code, out, _ = run(
        capsys, "simulate", "--spec", str(spec), "--n", "20000", "--seed", "5",
        "--orders", "4", "--dtv",
    )
    assert code == 0
    assert "dTV estimate" in out
    assert "oracle" in out


def test_simulate_writes_raw_samples(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"type": "second_chaos", "lambdas": ["1"]}))
    out_path = tmp_path / "x.f64"
    code, _, _ = run(
        capsys, "simulate", "--spec", str(spec), "--n", "4096", "--seed", "2",
        "--orders", "2", "--out", str(out_path),
    )
    assert code == 0
    assert np.fromfile(out_path, dtype="<f8").size == 4096


def test_simulate_bad_spec_exits_2(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"type": "unknown"}))
    code, _, err = run(capsys, "simulate", "--spec", str(spec), "--n", "100")
    assert code == 2


def _wide_combo_spec():
    # 40 terms of total degree 2: far past the exact-expansion budget at order 8
    terms = []
    for i in range(40):
        degrees = [0] * 40
        degrees[i] = 2
        terms.append({"coef": "1/40", "degrees": degrees})
    return {"type": "hermite_combo", "terms": terms}


def test_simulate_degrades_to_empirical_when_oracle_over_budget(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps(_wide_combo_spec()))
    code, out, _ = run(
        capsys, "simulate", "--spec", str(spec), "--n", "2000", "--seed", "1",
        "--orders", "8", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    assert all("oracle" not in row for row in payload["moments"])


def test_simulate_require_oracle_exits_3(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps(_wide_combo_spec()))
    code, _, err = run(
        capsys, "simulate", "--spec", str(spec), "--n", "2000", "--seed", "1",
        "--orders", "8", "--require-oracle",
    )
    assert code == 3
    assert "resource limit" in err


def test_verify_paper_quick_passes_and_is_byte_identical(capsys):
    code1, out1, _ = run(capsys, "verify-paper", "--quick", "--seed", "7", "--json")
    code2, out2, _ = run(capsys, "verify-paper", "--quick", "--seed", "7", "--json")
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["pass"] is True
    assert payload["mode"] == "quick"
    names = [c["name"] for c in payload["checks"]]
    assert "alpha-route-equivalence" in names
    assert all(c["pass"] for c in payload["checks"])
    assert not any("time" in c or "seconds" in c for c in payload["checks"])


def test_verify_paper_table_output(capsys):
    code, out, _ = run(capsys, "verify-paper", "--quick", "--seed", "7")
    assert code == 0
    assert "overall: PASS" in out


def test_seed_env_var_is_honored(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CHAOS_LAB_SEED", "31")
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"type": "second_chaos", "lambdas": ["1"]}))
    code, out, _ = run(
        capsys, "simulate", "--spec", str(spec), "--n", "10000", "--orders", "2", "--json"
    )
    assert code == 0
    assert json.loads(out)["seed"] == 31
