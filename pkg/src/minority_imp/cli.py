"""Command-line driver.

Exit codes: 0 success (or member), 1 non-member, 2 usage error, 3 parse error,
4 resource limit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time

from .errors import (
    DegreeTooHigh,
    EmptyRelation,
    NotMinorityClosed,
    ParseError,
    ResourceLimit,
    ScopeOutOfRange,
)
from .gf2 import Infeasible, assemble, parse_instance, rref
from .grlexconv import format_trace, run
from .imp import decide_with_basis, truncated_basis
from .lexgb import EXPANSION_CAP, build_g1, g1_polynomials
from .oracle import cross_check, random_instance
from .polycore import GRLEX, LEX, parse_polynomial

EXIT_OK, EXIT_NON_MEMBER, EXIT_USAGE, EXIT_PARSE, EXIT_RESOURCE = 0, 1, 2, 3, 4

NEEDS_DEGREE = {"gb-grlex", "reduce", "member", "trace"}
NEEDS_INSTANCE = {"feasible", "gb-lex", "gb-grlex", "reduce", "member", "trace"}


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minority-imp",
        description="Degree-bounded ideal membership for minority-closed Boolean CSPs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", help="instance file (vars/xor/rel lines)")
    common.add_argument("--degree", type=int, help="degree bound d (verify defaults to 2)")
    common.add_argument("--poly", help="query polynomial, inline or a file path")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for verify's random batch")
    common.add_argument("--cap", type=int, default=EXPANSION_CAP,
                        help="largest XOR support expanded into a polynomial")

    sub.add_parser("feasible", parents=[common], help="print SAT or UNSAT")
    p = sub.add_parser("gb-lex", parents=[common], help="structured lex basis G1")
    p.add_argument("--expand", action="store_true", help="print G1 as explicit polynomials")
    sub.add_parser("gb-grlex", parents=[common], help="d-truncated grlex basis and B(G2)")
    sub.add_parser("reduce", parents=[common], help="remainder of --poly modulo G2")
    sub.add_parser("member", parents=[common], help="decide membership of --poly")
    p = sub.add_parser("verify", parents=[common], help="cross-check against Buchberger")
    p.add_argument("--count", type=int, default=20, help="random instances when no --instance")
    p.add_argument("--max-vars", type=int, default=8)
    sub.add_parser("trace", parents=[common], help="per-iteration log of the conversion")
    return parser


def _read_poly(value: str):
    if os.path.isfile(value):
        with open(value) as fh:
            value = fh.read()
    return parse_polynomial(value)


def _load(args):
    with open(args.instance) as fh:
        text = fh.read()
    return text, parse_instance(text)


def _digest(args, text: str) -> str:
    h = hashlib.sha256(text.encode())
    h.update(f"|{args.command}|{args.degree}|{args.poly}".encode())
    return h.hexdigest()


def _cmd_feasible(args, instance):
    R = rref(assemble(instance))
    ok = not isinstance(R, Infeasible)
    lines = ["SAT"] if ok else ["UNSAT", "basis: {1}"]
    return {"feasible": ok, "rank": R.rank if ok else None}, lines, EXIT_OK


def _cmd_gb_lex(args, instance):
    R = rref(assemble(instance))
    if isinstance(R, Infeasible):
        return {"feasible": False, "basis": ["1"]}, ["UNSAT", "basis: {1}"], EXIT_OK
    B1 = build_g1(R)
    result = {
        "feasible": True,
        "pivots": {f"x{p}": {"support": sorted(t.vars), "parity": t.parity}
                   for p, t in sorted(B1.pivot_rows.items())},
        "free": [f"x{j}" for j in B1.free_vars],
    }
    lines = [f"x{p} = {t}" for p, t in sorted(B1.pivot_rows.items())]
    lines.append("free: " + " ".join(f"x{j}" for j in B1.free_vars))
    if args.expand:
        polys = [g.to_str(LEX) for g in g1_polynomials(B1, args.cap)]
        result["polynomials"] = polys
        lines += polys
    return result, lines, EXIT_OK


def _cmd_gb_grlex(args, instance):
    basis = truncated_basis(instance, args.degree)
    elements = [g.to_str(GRLEX) for g in basis.elements]
    standard = [str(b) for b in basis.standard_monomials]
    lines = ["G2:"] + [f"  {g}" for g in elements]
    lines.append("B(G2): " + ", ".join(standard))
    return {"basis": elements, "standard_monomials": standard}, lines, EXIT_OK


def _cmd_reduce(args, instance):
    verdict = decide_with_basis(truncated_basis(instance, args.degree), _read_poly(args.poly))
    r = verdict.remainder.to_str(GRLEX)
    return {"remainder": r}, [r], EXIT_OK


def _cmd_member(args, instance):
    verdict = decide_with_basis(truncated_basis(instance, args.degree), _read_poly(args.poly))
    r = verdict.remainder.to_str(GRLEX)
    lines = ["member" if verdict.member else "non-member", f"remainder: {r}"]
    result = {
        "member": verdict.member,
        "remainder": r,
        "basis_size": verdict.basis_size,
        "infeasible_instance": verdict.infeasible_instance,
    }
    return result, lines, EXIT_OK if verdict.member else EXIT_NON_MEMBER


def _cmd_trace(args, instance):
    R = rref(assemble(instance))
    if isinstance(R, Infeasible):
        return {"feasible": False, "iterations": []}, ["UNSAT", "basis: {1}"], EXIT_OK
    state, steps = run(build_g1(R), args.degree)
    text = format_trace(steps, state)
    rows = [line.split("\t") for line in text.splitlines()]
    result = {"iterations": [dict(zip(("iteration", "q", "branch", "entry"), r)) for r in rows]}
    return result, text.splitlines(), EXIT_OK


def _cmd_verify(args, instance):
    d = args.degree or 2
    if instance is not None:
        report = cross_check(instance, d, seed=None)
        lines = [json.dumps(report, indent=2)]
        return report, lines, EXIT_OK if report["match"] else EXIT_NON_MEMBER
    rng = random.Random(args.seed)
    reports = []
    for _ in range(args.count):
        n = rng.randint(1, args.max_vars)
        inst = random_instance(rng, n, rng.randint(0, n), rng.randint(1, n))
        reports.append(cross_check(inst, d, seed=args.seed))
    mismatches = [i for i, rep in enumerate(reports) if not rep["match"]]
    report = {
        "match": not mismatches,
        "missing": [m for rep in reports for m in rep["missing"]],
        "extra": [m for rep in reports for m in rep["extra"]],
        "seed": args.seed,
        "timings": {
            "convert_ms": sum(rep["timings"]["convert_ms"] for rep in reports),
            "buchberger_ms": sum(rep["timings"]["buchberger_ms"] for rep in reports),
        },
        "instances": len(reports),
    }
    lines = [f"{len(reports)} instances, {len(mismatches)} mismatches (seed {args.seed})",
             "match" if not mismatches else "MISMATCH"]
    return report, lines, EXIT_OK if not mismatches else EXIT_NON_MEMBER


COMMANDS = {
    "feasible": _cmd_feasible,
    "gb-lex": _cmd_gb_lex,
    "gb-grlex": _cmd_gb_grlex,
    "reduce": _cmd_reduce,
    "member": _cmd_member,
    "verify": _cmd_verify,
    "trace": _cmd_trace,
}


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        if args.command in NEEDS_DEGREE and args.degree is None:
            raise UsageError(f"{args.command} needs --degree")
        if args.degree is not None and args.degree < 1:
            raise UsageError("--degree must be at least 1")
        if args.command in {"reduce", "member"} and not args.poly:
            raise UsageError(f"{args.command} needs --poly")
        if args.command in NEEDS_INSTANCE and not args.instance:
            raise UsageError(f"{args.command} needs --instance")
        text, instance = _load(args) if args.instance else ("", None)
        result, lines, code = COMMANDS[args.command](args, instance)
    except (UsageError, DegreeTooHigh, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ParseError, EmptyRelation, NotMinorityClosed, ScopeOutOfRange) as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_PARSE
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=stderr)
        return EXIT_RESOURCE
    elapsed = 1000 * (time.perf_counter() - t0)
    if args.format == "json":
        payload = {
            "command": args.command,
            "input_digest": _digest(args, text),
            "result": result,
            "timings_ms": round(elapsed, 3),
        }
        print(json.dumps(payload, indent=2), file=stdout)
    else:
        for line in lines:
            print(line, file=stdout)
    return code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
