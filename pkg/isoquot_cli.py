#!/usr/bin/env python3
"""
Command-line front end.

JSON goes to stdout with sorted keys; logs and error objects go to stderr.
Exit codes: 0 ok, 1 computation error (or a failed verification), 2 usage error.
"""
import argparse
import json
import math
import os
import sys
from typing import Any, Dict, List, Optional

from exactnum import format_rational, to_rational
from grw import OG, SG, jacobian_identity_check, jacobian_identity_check_og
from invariants import SYMMETRIC, SYMPLECTIC, InsertionPoly, compatibility_check, duality_check
from isoquot_config import log_ground_types, logger, setup_logging
from isoquot_errors import IsoQuotError
from localize import etop_series, evir_series
from queries import InvariantQuery, evaluate_query
from verification import run_suites


def _emit(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, sort_keys=True))


def _query(kind: str, args: argparse.Namespace, names: List[str]) -> Dict[str, Any]:
    params = {name: getattr(args, name) for name in names if getattr(args, name, None) is not None}
    return evaluate_query(InvariantQuery(kind, params)).to_dict()


# =========================
# Subcommands
# =========================
def cmd_a_sympl(args):
    _emit(_query("a-sympl", args, ["N", "g", "d", "m1", "m2"]))


def cmd_a_sympl_poly(args):
    _emit(_query("a-sympl-poly", args, ["N", "g", "d", "Q"]))


def cmd_a_symm(args):
    _emit(_query("a-symm", args, ["N", "g", "d", "Q"]))


def cmd_a_rank1(args):
    _emit(_query("a-rank1", args, ["N", "g", "d"]))


def cmd_f_class(args):
    _emit(_query("f-class", args, ["N", "g", "d", "m", "Q", "closed_form"]))


def cmd_grw(args):
    _emit(_query("grw", args, ["space", "n", "g", "d", "m1", "m2"]))


def cmd_oracle(args):
    _emit(_query("oracle", args, ["N", "d", "Q", "family", "r", "f2"]))


def _series(args) -> List[Any]:
    if args.topological:
        return etop_series(args.N, args.r, args.g, args.dmax)
    return evir_series(args.N, args.r, args.dmax, args.family)


def cmd_euler(args):
    print("d,value")
    for d, value in enumerate(_series(args)):
        print(f"{d},{format_rational(value)}")


def cmd_plot_data(args):
    """TSV: d, |e_vir|, log10|e_vir| (the log column is the only decimal output)."""
    rows = ["d\tabs_evir\tlog10_abs_evir"]
    for d, value in enumerate(_series(args)):
        magnitude = abs(to_rational(value))
        log_col = f"{math.log10(int(magnitude.numerator)) - math.log10(int(magnitude.denominator)):.12f}" \
            if magnitude else "-inf"
        rows.append(f"{d}\t{format_rational(magnitude)}\t{log_col}")
    with open(args.out, "w") as f:
        f.write("\n".join(rows) + "\n")
    _emit({"out": args.out, "rows": len(rows) - 1})


def cmd_verify(args):
    report = run_suites(args.suite)
    _emit(report)
    return 0 if report["passed"] else 1


def cmd_compat(args):
    left, right = compatibility_check(args.N, args.g, args.d, args.m1, args.m2)
    _emit({"left": format_rational(left), "right": format_rational(right), "passed": left == right})


def cmd_duality(args):
    left, right = duality_check(args.N, args.g, args.d, args.m1, args.m2)
    _emit({"left": format_rational(left), "right": format_rational(right), "passed": left == right})


def cmd_jacobian(args):
    check = jacobian_identity_check if args.space == SG else jacobian_identity_check_og
    ok = check(args.n)
    _emit({"n": args.n, "space": args.space, "passed": ok})
    return 0 if ok else 1


# =========================
# Parser
# =========================
def insertion_arg(text: str) -> str:
    """argparse type for --Q: grammar errors are usage errors."""
    try:
        InsertionPoly.parse(text)
    except IsoQuotError as e:
        raise argparse.ArgumentTypeError(e.message)
    return text


def _add_ngd(p: argparse.ArgumentParser, rank: str = "N") -> None:
    p.add_argument(f"--{rank}", dest=rank, type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=int, required=True)


def _add_monomial(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m1", type=int, required=True)
    p.add_argument("--m2", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isoquot", description="Exact invariants of isotropic Quot schemes.")
    ap.add_argument("--threads", type=int, help="worker processes (overrides ISOQUOT_THREADS)")
    ap.add_argument("--log-level", default="", help="DEBUG, INFO, WARNING, ...")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("a-sympl", help="a1^m1 a2^m2 on the symplectic family")
    _add_ngd(p)
    _add_monomial(p)
    p.set_defaults(func=cmd_a_sympl)

    p = sub.add_parser("a-sympl-poly", help="Q(a1, a2) on the symplectic family")
    _add_ngd(p)
    p.add_argument("--Q", type=insertion_arg, required=True, help='"c:m1:m2;c:m1:m2"')
    p.set_defaults(func=cmd_a_sympl_poly)

    p = sub.add_parser("a-symm", help="Q(a1, a2) on the rank-2 symmetric family")
    _add_ngd(p)
    p.add_argument("--Q", type=insertion_arg, required=True)
    p.set_defaults(func=cmd_a_symm)

    p = sub.add_parser("a-rank1", help="rank-1 symmetric virtual count")
    _add_ngd(p)
    p.set_defaults(func=cmd_a_rank1)

    p = sub.add_parser("f-class", help="f2^m Q(a1, a2) on the symplectic family")
    _add_ngd(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--Q", type=insertion_arg, required=True)
    p.add_argument("--closed-form", dest="closed_form", action="store_true", default=None)
    p.set_defaults(func=cmd_f_class)

    p = sub.add_parser("grw", help="GRW invariants of SG(2, 2n) / OG(2, 2n+2)")
    p.add_argument("--space", choices=[SG, OG], default=SG)
    _add_ngd(p, "n")
    _add_monomial(p)
    p.set_defaults(func=cmd_grw)

    for name, func, help_text in (("euler", cmd_euler, "Euler characteristic series as CSV"),
                                  ("plot-data", cmd_plot_data, "log-scale TSV of |e_vir|")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--N", type=int, required=True)
        p.add_argument("--r", type=int, default=2)
        p.add_argument("--dmax", type=int, required=True)
        p.add_argument("--g", type=int, default=0, help="genus for --topological")
        p.add_argument("--family", choices=[SYMPLECTIC, SYMMETRIC], default=SYMPLECTIC)
        p.add_argument("--topological", action="store_true")
        if name == "plot-data":
            p.add_argument("--out", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="run cross-check suites")
    p.add_argument("--suite", default="all")
    p.set_defaults(func=cmd_verify)

    for name, func in (("compat", cmd_compat), ("duality", cmd_duality)):
        p = sub.add_parser(name)
        _add_ngd(p)
        _add_monomial(p)
        p.set_defaults(func=func)

    p = sub.add_parser("jacobian", help="Jacobian identity at the reduced points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--space", choices=[SG, OG], default=SG)
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("oracle", help="genus-0 localization oracle")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--Q", type=insertion_arg, required=True)
    p.add_argument("--family", choices=[SYMPLECTIC, SYMMETRIC], default=SYMPLECTIC)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--f2", type=int, default=0)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    log_ground_types()
    if args.threads is not None:
        os.environ["ISOQUOT_THREADS"] = str(args.threads)
    try:
        return args.func(args) or 0
    except IsoQuotError as e:
        logger.error(f"{args.command} failed: {e.message}")
        print(json.dumps(e.to_dict(), sort_keys=True), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
