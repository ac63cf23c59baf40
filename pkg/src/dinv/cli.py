"""Command-line front end.

Exit codes: 0 success, 1 internal inconsistency, 2 invalid input,
3 precondition failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import acceptance
from .arith import format_cf, format_rational, omega_check, parse_rational
from .cfk import (
    CFKComplex,
    Region,
    d_one,
    homology,
    reduce,
    tau,
    validate_complex,
    verify_prop_c,
)
from .dtable import DTable
from .errors import DinvError, InvalidInput, PreconditionError
from .knots import AlexanderPoly, surgery_d_table_lspace, torsion_coeffs
from .lens import LensSpace, lens_d_table, lens_recursive_table
from .obstruct import lspace_u_plus_obstruction, whitehead_cable_obstruction
from .plumbing import PlumbedTree, d_table_plumbing

EXIT_OK, EXIT_BUG, EXIT_INVALID, EXIT_PRECONDITION = 0, 1, 2, 3

_NEG_RATIONAL = re.compile(r"^-\d+(/\d+)?$")


def _int(text: str) -> int:
    r = parse_rational(text)
    if r.denominator != 1:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return r.numerator


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _human(r) -> str:
    return format_rational(r, always_slash=False)


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc


def _read_poly(text: str) -> AlexanderPoly:
    if text == "-":
        text = sys.stdin.read()
    return AlexanderPoly.parse(text).normalized()


def _table_text(table: DTable) -> str:
    lines = [f"det {table.det if table.det is not None else table.modulus}"]
    width = max(len(str(table.modulus - 1)), len("label"))
    lines.append(f"{'label':>{width}}  d")
    for k, v in enumerate(table.values):
        lines.append(f"{k:>{width}}  {_human(v)}")
    return "\n".join(lines)


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


# --------------------------------------------------------------------------
# subcommands


def cmd_omega(args):
    w = omega_check(args.slope, args.max_len, args.entry_bound)
    payload = {"slope": format_rational(args.slope), "witness": None if w is None else w.to_json()}
    if w is None:
        text = f"{_human(args.slope)}: no witness within the search bounds"
    else:
        exc = ",".join(str(i) for i in w.exception_indices) or "none"
        text = f"{_human(args.slope)} = {format_cf(w.cf)} (exceptions at: {exc})"
    _emit(args, payload, text)


def cmd_lens(args):
    L = LensSpace(args.p, args.q)
    if args.recursive:
        table = lens_recursive_table(L.p, L.q)
    else:
        table = lens_d_table(L, args.slack, args.method)
    _emit(args, table.to_json(), f"L({L.p},{L.q})\n" + _table_text(table))


def cmd_plumb(args):
    tree = PlumbedTree.from_json(_read_json(args.tree))
    table = d_table_plumbing(tree, args.slack, args.method)
    _emit(args, table.to_json(), _table_text(table))


def cmd_torsion(args):
    delta = _read_poly(args.delta)
    t = torsion_coeffs(delta)
    payload = {"alexander": delta.to_json(), "torsion": list(t.values)}
    text = "\n".join(f"t_{i} = {v}" for i, v in enumerate(t.values))
    _emit(args, payload, text)


def cmd_surgery(args):
    table = surgery_d_table_lspace(_read_poly(args.delta), args.p)
    _emit(args, table.to_json(), f"S^3_{args.p}(K)\n" + _table_text(table))


def _load_complex(path: str) -> CFKComplex:
    return CFKComplex.from_json(_read_json(path))


def cmd_cfk(args):
    c = _load_complex(args.complex)
    rep = validate_complex(c)
    if args.reduce:
        red = reduce(c)
        _emit(args, red.to_json(), json.dumps(red.to_json(), indent=2))
        return
    if not rep.ok:
        raise InvalidInput("invalid complex: " + "; ".join(rep.details["violations"]))
    payload, lines = {"valid": True}, ["valid"]
    if args.tau:
        t = tau(c)
        payload["tau"] = t
        lines.append(f"tau = {t}")
    if args.d1:
        d = d_one(c)
        payload["d1"] = format_rational(d)
        lines.append(f"d(S^3_1) = {_human(d)}")
    if args.homology:
        kind, _, value = args.homology.partition(":")
        region = Region(kind, int(value) if value else 0)
        dims = homology(c, region)
        payload["homology"] = {str(k): v for k, v in dims.items()}
        lines.append(f"H({args.homology}) = " + (", ".join(f"gr {k}: {v}" for k, v in dims.items()) or "0"))
    _emit(args, payload, "\n".join(lines))


def cmd_obstruct_lspace(args):
    v = lspace_u_plus_obstruction(_read_poly(args.delta), args.h)
    _emit(args, v.to_json(), f"{v.status} at slope {_human(v.slope)}")


def cmd_obstruct_cable(args):
    d1 = args.d1
    if args.complex:
        d1 = d_one(_load_complex(args.complex))
    v = whitehead_cable_obstruction(args.p, d1)
    _emit(args, v.to_json(), f"{v.status} at slope {_human(v.slope)}")


def cmd_verify(args):
    rep = verify_prop_c(_load_complex(args.complex))
    _emit(args, rep.to_json(), f"pass: d(S^3_1) = {rep.details['d1']}, tower class {rep.details['rho']}")


def cmd_check(args):
    keys = None if args.criterion == "all" else [args.criterion]
    results = acceptance.run_checks(keys)
    payload = [r.to_json() for r in results]
    _emit(args, {"results": payload}, "\n".join(r.line() for r in results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_BUG


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--slack", type=int, default=1, help="box enlargement for lattice enumeration")
    common.add_argument("--jobs", type=int, default=1, help="parallelism hint (accepted, unused)")

    parser = argparse.ArgumentParser(prog="dinv", description="d-invariant calculator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("omega", parents=[common], help="find a continued fraction witness")
    p.add_argument("slope", type=_rational)
    p.add_argument("--max-len", type=int, default=4)
    p.add_argument("--entry-bound", type=int, default=6)
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("lens", parents=[common], help="d-table of L(p, q)")
    p.add_argument("p", type=_int)
    p.add_argument("q", type=_int)
    p.add_argument("--method", choices=["auto", "box", "lattice"], default="auto")
    p.add_argument("--recursive", action="store_true", help="use the recursion instead of the lattice")
    p.set_defaults(func=cmd_lens)

    p = sub.add_parser("plumb", parents=[common], help="d-table of a plumbed tree")
    p.add_argument("tree")
    p.add_argument("--method", choices=["auto", "box", "lattice"], default="auto")
    p.set_defaults(func=cmd_plumb)

    p = sub.add_parser("torsion", parents=[common], help="torsion coefficients of an Alexander polynomial")
    p.add_argument("delta")
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("surgery", parents=[common], help="d-table of p-surgery on an L-space knot")
    p.add_argument("delta")
    p.add_argument("p", type=_int)
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("cfk", parents=[common], help="inspect a CFK^infinity complex")
    p.add_argument("complex")
    p.add_argument("--d1", action="store_true")
    p.add_argument("--tau", action="store_true")
    p.add_argument("--reduce", action="store_true")
    p.add_argument("--homology", metavar="KIND[:VALUE]",
                   help="region: i:c, sublevel:m, max_ge0, max_lt0 or full")
    p.set_defaults(func=cmd_cfk)

    p = sub.add_parser("obstruct", help="unknotting number obstructions")
    osub = p.add_subparsers(dest="which", required=True)
    q = osub.add_parser("lspace", parents=[common])
    q.add_argument("delta")
    q.add_argument("--h", type=_int, default=None, help="surgery slope (default max(2g-1, 1))")
    q.set_defaults(func=cmd_obstruct_lspace)
    q = osub.add_parser("cable", parents=[common])
    q.add_argument("p", type=_int)
    q.add_argument("--d1", type=_rational, default=Fraction(-2))
    q.add_argument("--complex", help="take d(S^3_1) from this complex instead")
    q.set_defaults(func=cmd_obstruct_cable)

    p = sub.add_parser("verify", help="check structural properties of a complex")
    vsub = p.add_subparsers(dest="which", required=True)
    q = vsub.add_parser("prop-a1", parents=[common])
    q.add_argument("complex")
    q.set_defaults(func=cmd_verify)

    p = sub.add_parser("check", parents=[common], help="run a reproduction check")
    p.add_argument("criterion", choices=sorted(acceptance.CHECKS) + ["all"])
    p.set_defaults(func=cmd_check)
    return parser


def _protect_negatives(argv):
    # argparse reads "-7/3" as an option; a unicode minus keeps it positional
    return ["−" + a[1:] if _NEG_RATIONAL.match(a) else a for a in argv]


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_protect_negatives(argv))
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        code = args.func(args)
    except InvalidInput as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PreconditionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except DinvError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BUG
    return EXIT_OK if code is None else code


def main():
    sys.exit(run())
