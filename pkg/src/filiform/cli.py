"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 the input is outside the domain of
the operation, 3 a check that is expected to pass failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from .errors import FiliformError, IndexGuard, PreconditionError, VerificationError
from .exactmath import rational
from .family import (
    GeneralLawParams,
    bratzlavsky_adapted,
    enumerate_empty_region,
    enumerate_triples,
    generate_bratzlavsky,
    generate_general,
    load_param_file,
    mu_count,
    specialize_Fag,
)
from .lemmas import (
    alpha1_coefficient,
    context,
    guarded_pairs,
    identity_guard,
    jacobi_coefficient_identity,
    max_step,
)
from .liealg import BasisChange, change_basis, dumps_algebra, loads_algebra
from .prover import constraints, emptiness_certificate, grid_search, paper15, paper31_family
from .series import Triple, classify, construct_adapted, coroderivada_holds, verify_adapted

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_VERIFICATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(out, data, text: str, as_json: bool):
    out.write((json.dumps(data, indent=2) if as_json else text) + "\n")


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _write_or_print(out, text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        out.write(text + "\n")


def _triple(args) -> Triple:
    return Triple(args.z1, args.z2, args.n).check()


def _rationals(text: str):
    try:
        return [rational(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational list {text!r}") from exc


# -- commands ---------------------------------------------------------------


def cmd_analyze(args, out):
    g = loads_algebra(_read(args.file))
    report = classify(g)
    _emit(out, report.as_dict(), report.to_text(), args.json)
    return EXIT_OK


def cmd_generate_general(args, out):
    t = _triple(args)
    if args.params:
        params = GeneralLawParams.from_mapping(t, load_param_file(_read(args.params)), default=0)
    else:
        params = GeneralLawParams.symbolic(t)
    if args.fag:
        params = specialize_Fag(params)
    _write_or_print(out, dumps_algebra(generate_general(params)), args.output)
    return EXIT_OK


def cmd_generate_bratzlavsky(args, out):
    lam = _rationals(args.lam) if args.lam is not None else None
    g = bratzlavsky_adapted(args.n, lam) if args.adapted else generate_bratzlavsky(args.n, lam)
    _write_or_print(out, dumps_algebra(g), args.output)
    return EXIT_OK


def cmd_constraints(args, out):
    g = loads_algebra(_read(args.file))
    cs = constraints(g)
    text = "\n".join(f"{c} = 0" for c in cs) if cs else "no constraints"
    _emit(out, {"parameters": list(g.parameters), "constraints": [str(c) for c in cs]}, text, args.json)
    return EXIT_OK


def cmd_adapted(args, out):
    g = loads_algebra(_read(args.file))
    g.require_numeric()
    check = verify_adapted(g)
    if check:
        m = BasisChange.identity(g.n)
        already = True
    else:
        m = construct_adapted(g)
        already = False
    h = change_basis(g, m)
    ok = bool(verify_adapted(h)) and coroderivada_holds(h)
    data = {"already_adapted": already, "verified": ok, "matrix": m.as_lists()}
    lines = ["basis is adapted" if already else "constructed adapted basis (columns are new vectors):"]
    if not already:
        width = max(len(x) for row in data["matrix"] for x in row)
        lines += ["  " + " ".join(x.rjust(width) for x in row) for row in data["matrix"]]
    lines.append("verified" if ok else "verification FAILED")
    _emit(out, data, "\n".join(lines), args.json)
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_region(args, out):
    triples = enumerate_empty_region(args.n) if args.empty else enumerate_triples(args.n)
    data = {"n": args.n, "empty_region": args.empty, "count": len(triples), "triples": [str(t) for t in triples]}
    text = "\n".join([str(t) for t in triples] + [f"count {len(triples)}"])
    _emit(out, data, text, args.json)
    return EXIT_OK


def cmd_certify(args, out):
    cert = emptiness_certificate(_triple(args))
    _emit(out, cert.as_dict(), cert.to_text(), args.json)
    return EXIT_OK if cert.conclusion else EXIT_VERIFICATION


def cmd_search(args, out):
    report = grid_search(
        _triple(args), _rationals(args.grid), budget=args.budget, seed=args.seed, fag=args.fag,
        max_instances=args.max_instances,
    )
    _emit(out, report.as_dict(), report.to_text(), args.json)
    return EXIT_OK


def cmd_paper15(args, out):
    g = paper15(rational(args.beta33))
    _write_or_print(out, dumps_algebra(g), args.output)
    return EXIT_OK


def cmd_paper31(args, out):
    g, cs = paper31_family()
    if args.output:
        _write_or_print(out, dumps_algebra(g), args.output)
    data = {"triple": "(4,17,31)", "parameters": list(g.parameters), "constraints": [str(c) for c in cs]}
    text = "\n".join(
        [f"parameters ({len(g.parameters)}): " + ", ".join(g.parameters), f"constraints ({len(cs)}):"]
        + [f"{c} = 0" for c in cs]
    )
    _emit(out, data, text, args.json)
    return EXIT_OK


def cmd_lemma_check(args, out):
    t = _triple(args)
    verdicts = []
    try:
        a1 = alpha1_coefficient(t, corrected=args.corrected)
        verdicts.append(("alpha1", a1))
    except IndexGuard as exc:
        verdicts.append(("alpha1", str(exc)))
    if args.m is not None or args.k is not None:
        ks = [args.k] if args.k is not None else list(range(1, max_step(t) + 1))
        ms = [args.m] if args.m is not None else list(range(context(t).r))
        pairs = [(m, k) for k in ks for m in ms]
    else:
        pairs = guarded_pairs(t)
    for m, k in pairs:
        reason = identity_guard(t, m, k)
        if reason:
            verdicts.append((f"m={m} k={k}", f"skipped: {reason}"))
        else:
            verdicts.append((f"m={m} k={k}", jacobi_coefficient_identity(t, m, k)))
    data, lines, failed = [], [], False
    for label, v in verdicts:
        if isinstance(v, str):
            data.append({"label": label, "skipped": v})
            lines.append(f"{label:12} {v}")
            continue
        failed |= not v.ok
        data.append(dict(v.as_dict(), label=label))
        lines.append(f"{label:12} {'pass' if v.ok else 'FAIL'}")
        if not v.ok:
            lines.append(f"{'':12}   closed form: {v.expected}")
            lines.append(f"{'':12}   extracted:   {v.actual}")
    _emit(out, {"triple": str(t), "verdicts": data}, "\n".join(lines), args.json)
    return EXIT_VERIFICATION if failed else EXIT_OK


# -- parser -----------------------------------------------------------------


def _add_triple(p):
    p.add_argument("--z1", type=int, required=True)
    p.add_argument("--z2", type=int, required=True)
    p.add_argument("--n", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="filiform", description="Exact computations on filiform Lie algebras.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="series, invariants and derived length of an algebra file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", help="emit an algebra file")
    gen = p.add_subparsers(dest="family", required=True, parser_class=_Parser)
    q = gen.add_parser("general", help="general law for a triple")
    _add_triple(q)
    q.add_argument("--params", help="JSON file of parameter values; omitted parameters are 0")
    q.add_argument("--fag", action="store_true", help="identify b_k_l with g_(k+l-1)")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_generate_general)
    q = gen.add_parser("bratzlavsky", help="metabelian law")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--lambda", dest="lam", help="comma-separated rationals l_0,...,l_(n-5); use --lambda=... if the first is negative")
    q.add_argument("--adapted", action="store_true", help="write in the adapted basis")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_generate_bratzlavsky)

    p = sub.add_parser("constraints", help="quadratic relations imposed by the Jacobi identity")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_constraints)

    p = sub.add_parser("adapted", help="verify or construct an adapted basis")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_adapted)

    p = sub.add_parser("region", help="list valid triples of dimension n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--empty", action="store_true", help="only triples where the F_ag family is empty")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("certify", help="emptiness certificate for a triple")
    _add_triple(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("search", help="grid search for Jacobi-consistent instances")
    _add_triple(p)
    p.add_argument("--grid", default="-1,0,1", help="comma-separated rationals; write --grid=-1,0,1 when the list starts with a minus")
    p.add_argument("--budget", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fag", action="store_true")
    p.add_argument("--max-instances", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("paper15", help="the derived-length-4 family at (4,9,15)")
    p.add_argument("--beta33", default="1")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_paper15)

    p = sub.add_parser("paper31", help="14-parameter family at (4,17,31) and its constraints")
    p.add_argument("-o", "--output", help="also write the symbolic algebra file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_paper31)

    p = sub.add_parser("lemma-check", help="compare closed-form coefficients with symbolic extraction")
    _add_triple(p)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--corrected", action="store_true", help="use the boundary-corrected alpha_1 form")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_lemma_check)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"filiform: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as exc:
        print(f"filiform: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except PreconditionError as exc:
        print(f"filiform: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except FiliformError as exc:
        print(f"filiform: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point that exits with the status code; argparse errors exit 1."""
    try:
        return main(argv)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
