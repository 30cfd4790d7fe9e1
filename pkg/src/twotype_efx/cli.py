"""Command-line front end.

JSON goes to stdout, diagnostics to stderr.  Exit codes:

    0  success (certified EFX / verified / generated)
    1  allocation is valid but not EFX (verify)
    2  parse error
    3  validation error
    4  step cap reached
    5  internal assertion failure
    6  instance too large for the oracle
"""

from __future__ import annotations

import argparse
import collections
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import checker, engine, generator, model

EXIT_OK, EXIT_NOT_EFX, EXIT_PARSE, EXIT_INVALID, EXIT_CAP, EXIT_INTERNAL, EXIT_ORACLE = range(7)


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Exit(EXIT_PARSE, f"cannot read {path}: {exc}") from None


def _load_instance(path: str) -> model.Instance:
    try:
        inst = model.parse_instance(_read(path))
    except model.ParseError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc}") from None
    errors = model.validate(inst)
    if errors:
        raise _Exit(EXIT_INVALID, f"{path}: " + "; ".join(errors))
    return inst


def _load_allocation(path: str, inst: model.Instance) -> model.Allocation:
    text = _read(path)
    try:
        doc = json.loads(text)
        alloc = model.allocation_from_dict(doc, inst.m)
    except json.JSONDecodeError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: invalid JSON: {exc}") from None
    except model.ParseError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc}") from None
    except model.InvalidAllocation as exc:
        raise _Exit(EXIT_INVALID, f"{path}: {exc}") from None
    errors = model.allocation_valid(inst, alloc)
    if not errors:
        errors = model.pool_mismatch(doc, alloc)
    if errors:
        raise _Exit(EXIT_INVALID, f"{path}: " + "; ".join(errors))
    return alloc


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc) + "\n")


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    try:
        result = engine.solve(inst, assert_lemmas=args.assert_lemmas, max_steps=args.max_steps)
    except engine.IterationCapExceeded as exc:
        raise _Exit(EXIT_CAP, str(exc)) from None
    except (engine.LemmaViolation, engine.CertificationError) as exc:
        raise _Exit(EXIT_INTERNAL, f"internal assertion failed: {exc}") from None
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for rec in result.records(inst):
                fh.write(json.dumps(rec) + "\n")
    _emit(model.allocation_to_dict(result.allocation))
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load_instance(args.instance)
    alloc = _load_allocation(args.allocation, inst)
    mode = checker.Mode(args.mode)
    report = checker.is_efx(inst, alloc, mode)
    doc = {"efx": report.ok, "complete": alloc.is_complete, "mode": mode.value}
    if not report:
        i, j, h = report.witness
        doc["witness"] = {"envier": i, "envied": j, "removed_item": h}
        print(f"agent {i} EFX-envies agent {j} after removing item {h}", file=sys.stderr)
    _emit(doc)
    return EXIT_OK if report else EXIT_NOT_EFX


def cmd_oracle(args) -> int:
    inst = _load_instance(args.instance)
    try:
        found = checker.brute_force_complete_efx(
            inst, checker.Mode(args.mode), first_only=args.first, cap=args.cap)
    except checker.OracleTooLarge as exc:
        raise _Exit(EXIT_ORACLE, str(exc)) from None
    _emit({"count": len(found), "allocations": [model.allocation_to_dict(a) for a in found]})
    return EXIT_OK


def cmd_gen(args) -> int:
    fields = {}
    if args.spec:
        try:
            fields.update(json.loads(_read(args.spec)))
        except json.JSONDecodeError as exc:
            raise _Exit(EXIT_PARSE, f"{args.spec}: invalid JSON: {exc}") from None
    for name in ("n_alpha", "n_beta", "m", "dist", "lo", "hi", "den_max", "rho", "seed"):
        value = getattr(args, name)
        if value is not None:
            fields[name] = value
    if args.shuffle_agents:
        fields["shuffle_agents"] = True
    try:
        spec = generator.GenSpec.from_dict(fields)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise _Exit(EXIT_INVALID, f"bad generator spec: {exc}") from None
    errors = spec.errors()
    if errors:
        raise _Exit(EXIT_INVALID, "; ".join(errors))
    text = model.render_instance(generator.generate(spec)) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_trace(args) -> int:
    records = []
    for lineno, line in enumerate(_read(args.trace).splitlines(), 1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise _Exit(EXIT_PARSE, f"{args.trace}:{lineno}: {exc}") from None
    cases = collections.Counter(r.get("case") for r in records)
    last = records[-1] if records else None
    _emit({"steps": len(records), "cases": dict(sorted(cases.items())),
           "final_pool": last["pool"] if last else None,
           "final_potential": last["potential"] if last else None})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twotype-efx",
                                     description="Complete EFX allocations for two valuation types.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a complete EFX allocation")
    p.add_argument("instance")
    p.add_argument("--trace", help="write a JSON-lines run trace to this path")
    p.add_argument("--assert-lemmas", action="store_true",
                   help="check the construction's guaranteed properties at every step")
    p.add_argument("--max-steps", type=int, default=engine.DEFAULT_MAX_STEPS)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check an allocation for EFX")
    p.add_argument("instance")
    p.add_argument("allocation")
    p.add_argument("--mode", choices=["raw", "symbolic"], default="raw")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="enumerate complete EFX allocations by brute force")
    p.add_argument("instance")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--all", dest="first", action="store_false")
    group.add_argument("--first", dest="first", action="store_true")
    p.add_argument("--cap", type=int, default=checker.DEFAULT_CAP)
    p.add_argument("--mode", choices=["raw", "symbolic"], default="raw")
    p.set_defaults(func=cmd_oracle, first=False)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--spec", help="GenSpec as a JSON file; flags override its fields")
    p.add_argument("--n-alpha", type=int)
    p.add_argument("--n-beta", type=int)
    p.add_argument("-m", type=int)
    p.add_argument("--dist", choices=generator.DISTRIBUTIONS)
    p.add_argument("--lo", type=int)
    p.add_argument("--hi", type=int)
    p.add_argument("--den-max", type=int)
    p.add_argument("--rho", type=Fraction)
    p.add_argument("--seed", type=int)
    p.add_argument("--shuffle-agents", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("trace", help="summarize a run trace")
    p.add_argument("trace")
    p.set_defaults(func=cmd_trace)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
