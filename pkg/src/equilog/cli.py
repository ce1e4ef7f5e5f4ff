"""Command-line front end.

Subcommands: height (heights and Mahler measure of one algebraic number),
average (conjugate log-distance average against a point), construct (the
unit-circle or off-circle sequence with its per-step certified checks), and
verify (corpus suites).  Exit codes: 0 all pass, 1 some certified check
failed, 2 usage error, 3 resource exhaustion (budget or precision cap).

Run artifacts land under --out as run-<timestamp>-<confighash>/ holding a
manifest and deterministic JSON/CSV payloads (bit-identical for a fixed
configuration and seed; the timestamp appears only in the directory name).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional

from .construct import (
    BuildConfig,
    OffCircleStep,
    SequenceStep,
    build_bm_sequence,
    build_kappa_sequence,
)
from .errors import (
    BudgetExhausted,
    CertificationFailed,
    EquilogError,
    PrecisionExhausted,
    SearchRangeExhausted,
)
from .heights import (
    INFINITY,
    AlgebraicNumber,
    ArchEmbedding,
    PadicEmbedding,
    Place,
    equidistribution_error,
    is_root_of_unity,
    log_distance_average,
    modified_height,
    multiplicative_height,
    reference_value,
    weil_height,
)
from .intpoly import IntPoly
from .numeric import DEFAULT_PRECISION, mahler_measure
from .verify import ALL_SUITES, CorpusConfig, check_sequence, run_suite

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def poly_dict(P: IntPoly) -> list:
    return [str(c) for c in P.coeffs]


def fraction_dict(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def step_dict(step: SequenceStep) -> dict:
    out = {
        "n": step.n,
        "small_poly": poly_dict(step.small_poly),
        "assembled": poly_dict(step.assembled),
        "irreducible_factor": poly_dict(step.irreducible_factor),
        "cofactor": poly_dict(step.cofactor),
        "shift_prime": step.shift_prime,
        "shift_delta": step.shift_delta,
        "certificate": {"prime": step.certificate.prime, "e": step.certificate.e},
        "avg": step.avg.as_dict(),
        "height_alpha": step.height_alpha.as_dict(),
        "envelopes": {k: v.as_dict() for k, v in step.envelopes.items()},
        "checks": [{"name": c.name, "verdict": c.verdict,
                    "lhs": c.lhs.as_dict(), "rhs": c.rhs.as_dict()}
                   for c in step.checks],
        "widened": step.widened,
    }
    if step.avg_exact_logp is not None:
        out["avg_exact_logp"] = fraction_dict(step.avg_exact_logp)
    if step.small_value_bound_exponent is not None:
        out["valuation_floor"] = step.small_value_bound_exponent
    return out


def offcircle_dict(step: OffCircleStep) -> dict:
    return {
        "n": step.n,
        "minimal_poly": poly_dict(step.minimal_poly),
        "aux_prime": step.aux_prime,
        "lead_coeff": step.lead_coeff,
        "avg": step.avg.as_dict(),
        "error": step.error.as_dict(),
        "target": step.target.as_dict(),
        "height_alpha": step.height_alpha.as_dict(),
        "reciprocal_branch": step.reciprocal_branch,
        "checks": [{"name": c.name, "verdict": c.verdict} for c in step.checks],
    }


def dump_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def reports_csv(report_dicts) -> str:
    """Aggregate CSV: check_id, verdict counts, max slack midpoint."""
    agg: dict = {}
    for r in report_dicts:
        a = agg.setdefault(r["check_id"],
                           {"pass": 0, "fail": 0, "indeterminate": 0,
                            "max_slack": None})
        a[r["verdict"]] += 1
        slack = r.get("slack", {}).get("mid")
        if slack is not None:
            if a["max_slack"] is None or float(slack) > float(a["max_slack"]):
                a["max_slack"] = slack
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["check_id", "pass", "fail", "indeterminate", "max_slack"])
    for cid in sorted(agg):
        a = agg[cid]
        writer.writerow([cid, a["pass"], a["fail"], a["indeterminate"],
                         a["max_slack"] if a["max_slack"] is not None else ""])
    return buf.getvalue()


def _config_hash(payload: dict) -> str:
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True).encode()
    ).hexdigest()[:12]


def make_run_dir(out_dir: str, config_payload: dict) -> str:
    stamp = time.strftime("%Y%m%dT%H%M%S", time.gmtime())
    name = f"run-{stamp}-{_config_hash(config_payload)}"
    path = os.path.join(out_dir, name)
    os.makedirs(path, exist_ok=True)
    with open(os.path.join(path, "manifest.json"), "w") as fh:
        fh.write(dump_json(config_payload))
    return path


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


def _parse_place(text: Optional[str]) -> Place:
    if text is None or text in ("inf", "infinity", "oo"):
        return INFINITY
    return Place(int(text))


def _number(poly_text: str, index: int, place: Place,
            trusted: bool = False) -> AlgebraicNumber:
    poly = IntPoly.parse(poly_text)
    if place.is_infinite:
        return AlgebraicNumber(poly, ArchEmbedding(index), trusted=trusted)
    return AlgebraicNumber(poly, PadicEmbedding(place.p, index), trusted=trusted)


def _add_global_flags(parser, with_defaults: bool):
    env_prec = os.environ.get("EQUILOG_PRECISION")
    sup = argparse.SUPPRESS

    def dflt(value):
        return value if with_defaults else sup

    parser.add_argument("--prec", type=int,
                        default=dflt(int(env_prec) if env_prec
                                     else DEFAULT_PRECISION),
                        help="working precision in bits "
                             "(env EQUILOG_PRECISION overrides the default)")
    parser.add_argument("--budget", type=int, default=dflt(10_000_000),
                        help="enumeration node budget")
    parser.add_argument("--padic-prec", type=int, default=dflt(64),
                        help="p-adic precision exponent")
    parser.add_argument("--seed", type=int, default=dflt(20240613),
                        help="corpus seed")
    parser.add_argument("--jobs", type=int, default=dflt(1),
                        help="worker processes for corpus suites")
    parser.add_argument("--out", type=str, default=dflt("runs"),
                        help="output directory for run artifacts")
    parser.add_argument("--format", choices=("json", "csv"),
                        default=dflt("json"),
                        help="primary report format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equilog",
        description="certified heights, averages, and counterexample sequences",
    )
    _add_global_flags(parser, with_defaults=True)
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, with_defaults=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p_height = sub.add_parser("height", parents=[common],
                              help="heights of one algebraic number")
    p_height.add_argument("poly", help='polynomial, e.g. "X^2 - X - 1" or "-1,-1,1"')
    p_height.add_argument("--embedding", type=int, default=0)
    p_height.add_argument("--place", default="inf")

    p_avg = sub.add_parser("average", parents=[common],
                           help="conjugate log-distance average")
    p_avg.add_argument("--alpha", required=True)
    p_avg.add_argument("--alpha-embedding", type=int, default=0)
    p_avg.add_argument("--kappa", required=True)
    p_avg.add_argument("--kappa-embedding", type=int, default=0)
    p_avg.add_argument("--place", default="inf")

    p_con = sub.add_parser("construct", parents=[common],
                           help="build a counterexample sequence")
    p_con.add_argument("--kind", choices=("kappa", "bm"), required=True)
    p_con.add_argument("--kappa", required=True)
    p_con.add_argument("--kappa-embedding", type=int, default=0)
    p_con.add_argument("--place", default="inf")
    p_con.add_argument("--steps", type=int, default=3,
                       help="number of steps (kind=kappa)")
    p_con.add_argument("--ns", type=str, default="10,50,100",
                       help="comma list of exponents (kind=bm)")

    p_ver = sub.add_parser("verify", parents=[common],
                           help="run verification suites")
    p_ver.add_argument("suite", choices=ALL_SUITES + ("all",))
    p_ver.add_argument("--cases", type=int, default=500)
    p_ver.add_argument("--max-degree", type=int, default=20)
    p_ver.add_argument("--coeff-bound", type=int, default=100)
    return parser


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_height(args) -> int:
    place = _parse_place(args.place)
    alpha = _number(args.poly, args.embedding, place)
    prec = args.prec
    h = weil_height(alpha, prec)
    hp = modified_height(alpha, prec)
    H = multiplicative_height(alpha, prec)
    M = mahler_measure(alpha.minpoly, prec)
    order = is_root_of_unity(alpha.minpoly)
    print(f"poly: {alpha.minpoly.to_human()}")
    print(f"degree: {alpha.degree}")
    print(f"h      = {h.mid}  (radius {h.rad})")
    print(f"h'     = {hp.mid}  (radius {hp.rad})")
    print(f"H      = {H.mid}  (radius {H.rad})")
    print(f"M      = {M.mid}  (radius {M.rad})")
    print(f"root of unity: {f'yes, order {order}' if order else 'no'}")
    return EXIT_PASS


def cmd_average(args) -> int:
    place = _parse_place(args.place)
    alpha = _number(args.alpha, args.alpha_embedding, INFINITY
                    if place.is_infinite else place)
    kappa = _number(args.kappa, args.kappa_embedding, place)
    prec = args.prec
    avg = log_distance_average(alpha, kappa, place, prec)
    ref = reference_value(kappa, place, prec)
    err = equidistribution_error(alpha, kappa, place, prec)
    print(f"avg = {avg.mid}  (radius {avg.rad})")
    print(f"ref = {ref.mid}  (radius {ref.rad})")
    print(f"E   = {err.mid}  (radius {err.rad})")
    return EXIT_PASS


def cmd_construct(args) -> int:
    place = _parse_place(args.place)
    config = BuildConfig(precision_bits=args.prec,
                         enumeration_budget=args.budget,
                         padic_exponent=args.padic_prec,
                         seed=args.seed)
    kappa = _number(args.kappa, args.kappa_embedding, place)
    config_payload = {
        "command": "construct", "kind": args.kind, "kappa": args.kappa,
        "kappa_embedding": args.kappa_embedding, "place": str(place),
        "prec": args.prec, "budget": args.budget,
        "padic_prec": args.padic_prec, "seed": args.seed,
        "steps": args.steps, "ns": args.ns,
    }
    run_dir = make_run_dir(args.out, config_payload)
    if args.kind == "kappa":
        steps = build_kappa_sequence(kappa, place, args.steps, config)
        replay = check_sequence(steps, kappa, place, args.prec)
        payload = {
            "kind": "kappa",
            "steps": [step_dict(s) for s in steps],
            "replay": [r.as_dict() for r in replay],
        }
        ok = all(s.all_pass for s in steps) and all(r.passed for r in replay)
    else:
        ns = [int(x) for x in args.ns.split(",") if x.strip()]
        steps = build_bm_sequence(kappa, place, ns, config)
        payload = {"kind": "bm", "steps": [offcircle_dict(s) for s in steps]}
        ok = all(s.all_pass for s in steps)
    with open(os.path.join(run_dir, "results.json"), "w") as fh:
        fh.write(dump_json(payload))
    if args.format == "csv" and args.kind == "kappa":
        with open(os.path.join(run_dir, "reports.csv"), "w") as fh:
            fh.write(reports_csv(payload["replay"]))
    print(f"run dir: {run_dir}")
    for s in steps:
        verdicts = ",".join(c.verdict for c in s.checks)
        print(f"  n={s.n}: {verdicts}")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    config = CorpusConfig(seed=args.seed, cases=args.cases,
                          max_degree=args.max_degree,
                          coeff_bound=args.coeff_bound,
                          precision=args.prec, jobs=args.jobs)
    names = ALL_SUITES if args.suite == "all" else (args.suite,)
    config_payload = {
        "command": "verify", "suite": args.suite, "cases": args.cases,
        "max_degree": args.max_degree, "coeff_bound": args.coeff_bound,
        "prec": args.prec, "seed": args.seed,
    }
    run_dir = make_run_dir(args.out, config_payload)
    all_ok = True
    summaries = []
    all_reports = []
    for name in names:
        summary = run_suite(name, config)
        summaries.append({
            "suite": summary.name, "pass": summary.passes,
            "fail": summary.fails, "indeterminate": summary.indeterminates,
            "escalated": summary.escalated,
        })
        all_reports.extend(summary.reports)
        status = "ok" if summary.ok else "FAIL"
        print(f"{summary.name}: pass={summary.passes} fail={summary.fails} "
              f"indeterminate={summary.indeterminates} "
              f"escalated={summary.escalated} [{status}]")
        all_ok = all_ok and summary.ok
    payload = {"summaries": summaries, "reports": all_reports}
    with open(os.path.join(run_dir, "results.json"), "w") as fh:
        fh.write(dump_json(payload))
    with open(os.path.join(run_dir, "reports.csv"), "w") as fh:
        fh.write(reports_csv(all_reports))
    print(f"run dir: {run_dir}")
    return EXIT_PASS if all_ok else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_PASS
    handlers = {
        "height": cmd_height,
        "average": cmd_average,
        "construct": cmd_construct,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (BudgetExhausted, PrecisionExhausted, SearchRangeExhausted,
            CertificationFailed) as exc:
        print(f"resource exhausted: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (EquilogError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
