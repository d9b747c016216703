"""Command-line interface.

Subcommands:
  expand        W-expansion of T_k, T_{k,l} or an arbitrary even polynomial
  certify       moment matrix, minors and inequality verdicts for a moment file
  simulate      seeded Monte Carlo with oracle columns and optional dTV
  verify-paper  the bundled verification suite (exact; --full adds sampling)

Exit codes: 0 success, 1 verdict failure, 2 input error, 3 resource limit.
The default seed comes from CHAOS_LAB_SEED when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .chaos_sim import (
    DTV_BIN_COUNT,
    DTV_HALF_RANGE,
    ResourceLimitError,
    load_spec,
    simulate_report,
)
from .exact_poly import Polynomial
from .moment_forms import (
    MomentSequence,
    build_moment_matrix,
    check_even_bound,
    check_fourth_moment_ineq,
    check_sixth_moment_ineq,
    eigenvalue_diagnostic,
    expected_w,
    kappa6,
    leading_minors,
)
from .verify import DEFAULT_SAMPLES, DEFAULT_SEED, run_suite
from .wfamily import expand_in_w, t_kl_poly, t_poly

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _default_seed() -> int:
    env = os.environ.get("CHAOS_LAB_SEED")
    if env:
        return int(env)
    return DEFAULT_SEED


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaos-lab",
        description="Exact W-polynomial expansions, moment certificates and chaos simulation",
    )
    parser.add_argument("--version", action="version", version=f"chaos-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    expand = sub.add_parser("expand", help="expand a polynomial over the W basis")
    group = expand.add_mutually_exclusive_group(required=True)
    group.add_argument("--tk", type=int, metavar="K", help="expand T_K")
    group.add_argument(
        "--tkl", type=int, nargs=2, metavar=("K", "L"), help="expand the pair target T_{K,L}"
    )
    group.add_argument(
        "--poly",
        metavar="JSON",
        help="polynomial as {\"coeffs\": [...]} inline or @file.json",
    )
    _add_format_flags(expand)

    certify = sub.add_parser("certify", help="certify a moment sequence")
    certify.add_argument("--moments", required=True, metavar="FILE", help=".csv or .json moments")
    certify.add_argument("--k", type=int, default=3, help="moment matrix order (default 3)")
    _add_format_flags(certify)

    simulate = sub.add_parser("simulate", help="sample a chaos spec and report moments")
    simulate.add_argument("--spec", required=True, metavar="FILE", help="chaos spec JSON")
    simulate.add_argument("--n", type=int, default=10 ** 6, help="sample count")
    simulate.add_argument("--seed", type=int, default=None, help="RNG seed")
    simulate.add_argument("--orders", type=int, default=8, help="report moments up to this order")
    simulate.add_argument("--shards", type=int, default=1, help="independent RNG streams")
    simulate.add_argument("--dtv", action="store_true", help="estimate dTV and compare to bounds")
    simulate.add_argument("--bins", type=int, default=DTV_BIN_COUNT, help="dTV bin count")
    simulate.add_argument("--range", type=float, default=DTV_HALF_RANGE, dest="half_range",
                          help="dTV half range R (bins cover [-R, R])")
    simulate.add_argument("--out", metavar="FILE", help="stream raw samples as little-endian float64")
    simulate.add_argument(
        "--require-oracle",
        action="store_true",
        help="fail (exit 3) instead of degrading to empirical-only columns "
        "when the exact oracle exceeds its expansion budget",
    )
    _add_format_flags(simulate)

    verify = sub.add_parser("verify-paper", help="run the bundled verification suite")
    mode = verify.add_mutually_exclusive_group()
    mode.add_argument("--quick", action="store_true", help="exact checks only (default)")
    mode.add_argument("--full", action="store_true", help="add Monte Carlo checks")
    verify.add_argument("--seed", type=int, default=None, help="RNG seed")
    verify.add_argument("--n", type=int, default=DEFAULT_SAMPLES, help="samples per statistical check")
    _add_format_flags(verify)

    return parser


def _add_format_flags(parser: argparse.ArgumentParser) -> None:
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="machine-readable output")
    fmt.add_argument("--table", action="store_true", help="human-readable output (default)")


# ---------------------------------------------------------------------------
# expand
# ---------------------------------------------------------------------------


def _load_polynomial(argument: str) -> Polynomial:
    if argument.startswith("@"):
        with open(argument[1:]) as fh:
            data = json.load(fh)
    else:
        data = json.loads(argument)
    return Polynomial.from_json_dict(data)


def cmd_expand(args) -> int:
    if args.tk is not None:
        poly = t_poly(args.tk)
        target = f"T({args.tk})"
        expansion = expand_in_w(poly)
    elif args.tkl is not None:
        k, l = args.tkl
        poly, expansion, _ = t_kl_poly(k, l)
        target = f"T({k},{l})"
    else:
        poly = _load_polynomial(args.poly)
        target = "polynomial"
        expansion = expand_in_w(poly)

    payload = {"target": target, "poly": poly.to_json_dict()}
    payload.update(expansion.to_json_dict())
    if args.json:
        print(_dump_json(payload))
    else:
        print(f"{target} = {poly}")
        for k, c in sorted(expansion.coefficients.items(), reverse=True):
            print(f"  W_{k:<2} coefficient: {c}")
        print(f"  residual: {expansion.residual_a}*x^2 + {expansion.residual_b}")
        verdict = expansion.verdict()
        note = "" if verdict.in_family else f"  (negative at {list(verdict.negative_indices)})"
        print(f"  in nonnegative W family: {verdict.in_family}{note}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------


def cmd_certify(args) -> int:
    ms = MomentSequence.load(args.moments)
    k = args.k
    matrix = build_moment_matrix(k, ms)
    minors = leading_minors(matrix)
    diagnostic = eigenvalue_diagnostic(matrix)

    if ms.exact:
        minors_ok = all(m >= 0 for m in minors)
    else:
        minors_ok = all(m >= -1e-9 * max(1.0, abs(m)) for m in minors)

    verdicts = [check_fourth_moment_ineq(ms)]
    if ms.max_order >= 6:
        verdicts.append(check_sixth_moment_ineq(ms))
    for j in range(2, k + 1):
        verdicts.append(check_even_bound(ms, j))

    kappa6_value = None
    kappa6_note = None
    if ms.max_order >= 6:
        try:
            kappa6_value = kappa6(ms)
        except ValueError as exc:
            kappa6_note = str(exc)
    else:
        kappa6_note = "moments through m_6 required"

    expected_ws = {}
    for j in range(2, k + 1):
        if 2 * j <= ms.max_order:
            expected_ws[j] = expected_w(j, ms)

    overall = minors_ok and all(v.holds for v in verdicts)
    payload = {
        "moments": ms.to_json_dict(),
        "matrix": matrix.to_json_dict(),
        "leading_minors": [str(m) for m in minors] if ms.exact else None,
        "leading_minors_float": [float(m) for m in minors],
        "minors_nonnegative": minors_ok,
        "eigenvalue_diagnostic": diagnostic,
        "checks": [v.to_json_dict() for v in verdicts],
        "expected_w": {str(j): str(v) for j, v in expected_ws.items()} if ms.exact else None,
        "expected_w_float": {str(j): float(v) for j, v in expected_ws.items()},
        "kappa6": str(kappa6_value) if ms.exact and kappa6_value is not None else None,
        "kappa6_float": None if kappa6_value is None else float(kappa6_value),
        "kappa6_note": kappa6_note,
        "pass": overall,
    }
    if args.json:
        print(_dump_json(payload))
    else:
        print(f"moment matrix order {k} ({'exact' if ms.exact else 'float'} mode)")
        for row in matrix.entries:
            print("  [" + ", ".join(str(e) for e in row) + "]")
        print(f"leading minors: {[str(m) for m in minors]}  nonnegative: {minors_ok}")
        print(
            "eigenvalue diagnostic: min {min_eigenvalue:.3e} (tol {tolerance:.3e}) psd={psd}".format(
                **diagnostic
            )
        )
        for v in verdicts:
            print(f"  {v.name:<16} slack {v.slack}  holds={v.holds}")
        for j, value in expected_ws.items():
            print(f"  E[W_{j}(X)] = {value}")
        if kappa6_value is not None:
            print(f"  kappa6 = {kappa6_value}")
        else:
            print(f"  kappa6 skipped: {kappa6_note}")
        print(f"verdict: {'PASS' if overall else 'FAIL'}")
    return EXIT_OK if overall else EXIT_VERDICT


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    spec = load_spec(args.spec)
    seed = args.seed if args.seed is not None else _default_seed()
    report = simulate_report(
        spec,
        args.n,
        seed,
        orders=args.orders,
        shards=args.shards,
        with_dtv=args.dtv,
        bin_count=args.bins,
        half_range=args.half_range,
        out_path=args.out,
        require_oracle=args.require_oracle,
    )
    if args.json:
        print(_dump_json(report.to_json_dict()))
        return EXIT_OK
    print(
        f"n={report.n} seed={report.seed} shards={report.shards} "
        f"backend={report.backend} rng={report.bit_generator}/{report.normal_method}"
    )
    header = f"{'order':>5} {'empirical':>14} {'se':>12} {'oracle':>14} {'exact':>16} {'z':>8}"
    print(header)
    for row in report.moment_rows():
        oracle = row.get("oracle")
        oracle_text = "-" if oracle is None else f"{oracle:.6g}"
        exact = row.get("oracle_exact") or "-"
        z = row.get("zscore")
        z_text = "-" if z is None else f"{z:+.2f}"
        print(
            f"{row['order']:>5} {row['empirical']:>14.6g} {row['se']:>12.3g} "
            f"{oracle_text:>14} {exact:>16} {z_text:>8}"
        )
    if report.dtv is not None:
        print(
            f"dTV estimate {report.dtv['estimate']:.5f} "
            f"({report.dtv['bin_count']} bins on [-{report.dtv['half_range']}, {report.dtv['half_range']}])"
        )
        for entry in report.dtv["bounds"]:
            mark = "<=" if entry["satisfied"] else ">"
            print(f"  k={entry['k']} bound {entry['bound']:.4f}: estimate {mark} bound")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify-paper
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    mode = "full" if args.full else "quick"
    seed = args.seed if args.seed is not None else _default_seed()
    report = run_suite(mode, seed, args.n)
    if args.json:
        print(_dump_json(report.to_json_dict()))
    else:
        print(report.render_table())
    return EXIT_OK if report.passed else EXIT_VERDICT


# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "expand": cmd_expand,
        "certify": cmd_certify,
        "simulate": cmd_simulate,
        "verify-paper": cmd_verify,
    }[args.command]
    try:
        return handler(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
