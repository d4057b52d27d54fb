"""Command line front end: ``mdstacks SUBCOMMAND FILE [options]``.

Exit codes: 0 success/pass, 1 fail, 2 unknown, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .document import (
    DocumentError,
    build,
    build_fan,
    build_roots,
    degree_in_document,
    load,
    serialize_factorization,
    serialize_stack,
)
from .fingerprint import graded_fingerprint
from .gradedring import Smoothness, Verdict
from .polynomial import PolynomialSyntaxError, parse_polynomial
from .report import dumps, group_json, make_report, stack_json
from .stack import (
    GerbeFactorization,
    ambient_toric,
    divisor_root,
    effective_degree_subgroup,
    is_toric,
    line_bundle_root,
    overall,
    reconstruct,
    rigidify,
    smoothness,
    validate,
)
from .toric import FanError, canonical_from_fan, fan_to_stack

EXIT = {Verdict.PASS: 0, Verdict.FAIL: 1, Verdict.UNKNOWN: 2}
USAGE_ERROR = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


class Outcome:
    def __init__(self, code: int, text: str, report: dict, stderr: str = ""):
        self.code, self.text, self.report, self.stderr = code, text, report, stderr


def _stack_doc(path: str):
    doc = load(path)
    if doc.stack is None:
        raise UsageError(f"{path}: no [stack] section")
    return doc, build(doc.stack)


def _parse_int_tuple(text: str) -> tuple[int, ...]:
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    try:
        return tuple(int(x) for x in body.split(",")) if body.strip() else ()
    except ValueError:
        raise UsageError(f"cannot read degree {text!r}") from None


def _validation_text(X, diags) -> str:
    lines = [f"stack: {X.name}", f"grading: {X.grading}"]
    for d in diags:
        lines.append(f"{d.check}: {d.verdict.value}" + (f" ({d.detail})" if d.detail else ""))
    lines.append(f"overall: {overall(diags).value}")
    return "\n".join(lines) + "\n"


def cmd_validate(args) -> Outcome:
    _, X = _stack_doc(args.file)
    diags = validate(X)
    verdict = overall(diags)
    result = {"stack": stack_json(X), "is_toric": is_toric(X)}
    report = make_report("validate", [args.file], verdict.value, result, diags, X.provenance)
    return Outcome(EXIT[verdict], _validation_text(X, diags), report)


def _with_simplify(X, args):
    return X.simplified() if args.simplify else X


def cmd_root_divisor(args) -> Outcome:
    _, X = _stack_doc(args.file)
    try:
        s = parse_polynomial(args.section, X.cox.names)
    except PolynomialSyntaxError as e:
        raise UsageError(f"--section: {e}") from None
    Y = _with_simplify(divisor_root(X, s, args.order, args.name), args)
    report = make_report("root-divisor", [args.file], "pass", {"stack": stack_json(Y)}, provenance=Y.provenance)
    return Outcome(0, serialize_stack(Y), report)


def cmd_root_bundle(args) -> Outcome:
    doc, X = _stack_doc(args.file)
    d = degree_in_document(doc.stack, X, _parse_int_tuple(args.degree))
    Y = _with_simplify(line_bundle_root(X, d, args.order), args)
    report = make_report("root-bundle", [args.file], "pass", {"stack": stack_json(Y)}, provenance=Y.provenance)
    return Outcome(0, serialize_stack(Y), report)


def _factorization_json(f: GerbeFactorization) -> dict:
    return {
        "rigidified": stack_json(f.rigidified),
        "roots": [{"degree": list(d), "order": r} for d, r in f.roots],
    }


def cmd_rigidify(args) -> Outcome:
    _, X = _stack_doc(args.file)
    try:
        f = rigidify(X)
    except ValueError as e:
        report = make_report("rigidify", [args.file], "fail", diagnostics=())
        report["error"] = str(e)
        return Outcome(1, "", report, stderr=str(e))
    report = make_report("rigidify", [args.file], "pass", _factorization_json(f))
    return Outcome(0, serialize_factorization(f), report)


def cmd_reconstruct(args) -> Outcome:
    doc, X = _stack_doc(args.file)
    roots = build_roots(doc.stack, doc.roots or [])
    Y = reconstruct(GerbeFactorization(X, tuple(roots)), name=f"reconstruct({X.name})")
    report = make_report("reconstruct", [args.file], "pass", {"stack": stack_json(Y)}, provenance=Y.provenance)
    return Outcome(0, serialize_stack(Y), report)


def cmd_is_toric(args) -> Outcome:
    _, X = _stack_doc(args.file)
    toric = is_toric(X)
    report = make_report("is-toric", [args.file], "pass" if toric else "fail", {"is_toric": toric})
    return Outcome(0 if toric else 1, f"{str(toric).lower()}\n", report)


def cmd_ambient(args) -> Outcome:
    _, X = _stack_doc(args.file)
    Y, warning = ambient_toric(X)
    warnings = [warning] if warning else []
    result = {"stack": stack_json(Y), "is_toric": is_toric(Y)}
    report = make_report("ambient", [args.file], "pass", result, warnings=warnings)
    return Outcome(0, serialize_stack(Y), report, stderr=f"warning: {warning}" if warning else "")


def cmd_from_fan(args) -> Outcome:
    doc = load(args.file)
    if doc.fan is None:
        raise UsageError(f"{args.file}: no [fan] section")
    F = build_fan(doc.fan)
    name = Path(args.file).stem
    X = canonical_from_fan(F, name) if args.canonical else fan_to_stack(F, name)
    report = make_report("from-fan", [args.file], "pass", {"stack": stack_json(X), "is_toric": is_toric(X)})
    return Outcome(0, serialize_stack(X), report)


def cmd_smooth(args) -> Outcome:
    _, X = _stack_doc(args.file)
    rep = smoothness(X)
    code = {
        Smoothness.SMOOTH: 0,
        Smoothness.SMOOTH_ON_COMPLEMENT: 0,
        Smoothness.SINGULAR: 1,
        Smoothness.UNKNOWN: 2,
    }[rep.verdict]
    result = {
        "smoothness": rep.verdict.value,
        "strata": [sorted(s) for s in rep.strata],
        "outside_irrelevant": [sorted(s) for s in rep.outside_irrelevant],
        "detail": rep.describe(),
    }
    verdict = {0: "pass", 1: "fail", 2: "unknown"}[code]
    return Outcome(code, f"{rep.verdict.value}: {rep.describe()}\n", make_report("smooth", [args.file], verdict, result))


def cmd_fingerprint(args) -> Outcome:
    _, X = _stack_doc(args.file)
    fx = graded_fingerprint(X)
    result = {"fingerprint": fx.lines()}
    if args.other is None:
        return Outcome(0, str(fx) + "\n", make_report("fingerprint", [args.file], "pass", result))
    _, Y = _stack_doc(args.other)
    fy = graded_fingerprint(Y)
    same = fx.compare(fy)
    verdict = {True: Verdict.PASS, False: Verdict.FAIL, None: Verdict.UNKNOWN}[same]
    result["other"] = fy.lines()
    result["equal"] = same
    text = {True: "equal", False: "different", None: "unknown (search bound exceeded)"}[same]
    return Outcome(EXIT[verdict], text + "\n", make_report("fingerprint", [args.file, args.other], verdict.value, result))


def cmd_report(args) -> Outcome:
    _, X = _stack_doc(args.file)
    diags = validate(X)
    eff = effective_degree_subgroup(X)
    result = {
        "stack": stack_json(X),
        "is_toric": is_toric(X),
        "effective_degrees": group_json(eff.subgroup),
        "generic_stabilizer": {
            "torus_rank": eff.stabilizer.torus_rank,
            "roots_of_unity": list(eff.stabilizer.roots_of_unity),
        },
        "fingerprint": graded_fingerprint(X).lines(),
    }
    try:
        result["rigidification"] = _factorization_json(rigidify(X))
    except ValueError as e:
        result["rigidification"] = {"error": str(e)}
    _, warning = ambient_toric(X)
    verdict = overall(diags)
    report = make_report("report", [args.file], verdict.value, result, diags, X.provenance, [warning] if warning else [])
    return Outcome(EXIT[verdict], dumps(report), report)


COMMANDS = {
    "validate": cmd_validate,
    "root-divisor": cmd_root_divisor,
    "root-bundle": cmd_root_bundle,
    "rigidify": cmd_rigidify,
    "reconstruct": cmd_reconstruct,
    "is-toric": cmd_is_toric,
    "ambient": cmd_ambient,
    "from-fan": cmd_from_fan,
    "smooth": cmd_smooth,
    "fingerprint": cmd_fingerprint,
    "report": cmd_report,
}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report instead of a document")
    parser = _Parser(prog="mdstacks", description="Cox-data computations for Mori dream quotient stacks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text, batch=False):
        p = sub.add_parser(name, help=help_text, parents=[common])
        if batch:
            p.add_argument("file", nargs="?")
            p.add_argument("--batch", metavar="DIR", help="process every .mds file in DIR")
        else:
            p.add_argument("file")
        return p

    add("validate", "check homogeneity, units and smoothness", batch=True)
    p = add("root-divisor", "root along the divisor of a section")
    p.add_argument("--section", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--name", help="name of the new variable (default z)")
    p.add_argument("--simplify", action="store_true", help="eliminate z^r - x relations")
    p = add("root-bundle", "root of a line bundle")
    p.add_argument("--degree", required=True, help="class in the file's grading coordinates, e.g. (1)")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--simplify", action="store_true")
    add("rigidify", "split off the generic stabilizer")
    add("reconstruct", "rebuild a stack from [stack] + [gerbe] sections")
    add("is-toric", "is the Cox ring a polynomial ring")
    add("ambient", "ambient toric stack with the same Picard group")
    p = add("from-fan", "Cox data of a stacky fan")
    p.add_argument("--canonical", action="store_true", help="ignore multiplicities")
    add("smooth", "singular locus of the total space")
    p = add("fingerprint", "canonical graded fingerprint; compare with a second file")
    p.add_argument("other", nargs="?")
    add("report", "full JSON report", batch=True)
    return parser


def _run_one(args) -> Outcome:
    try:
        if getattr(args, "order", None) is not None and args.order < 1:
            raise UsageError("--order must be positive")
        return COMMANDS[args.command](args)
    except (DocumentError, UsageError, FanError, ValueError, KeyError, OSError) as e:
        msg = str(e) if not isinstance(e, KeyError) else str(e.args[0])
        report = make_report(args.command, [args.file], "error")
        report["error"] = msg
        return Outcome(USAGE_ERROR, "", report, stderr=f"error: {msg}")


def _emit(out: Outcome, as_json: bool):
    if as_json:
        sys.stdout.write(dumps(out.report))
    elif out.text:
        sys.stdout.write(out.text)
    if out.stderr:
        print(out.stderr, file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    batch = getattr(args, "batch", None)
    if batch:
        files = sorted(str(p) for p in Path(batch).glob("*.mds"))
        def run(path):
            return _run_one(argparse.Namespace(**{**vars(args), "file": path}))
        with ThreadPoolExecutor() as pool:
            outcomes = list(pool.map(run, files))
        for path, out in zip(files, outcomes):
            if not args.json:
                sys.stdout.write(f"== {path} (exit {out.code})\n")
            _emit(out, args.json)
        return max((o.code for o in outcomes), default=0)
    if getattr(args, "file", None) is None:
        parser.error("a FILE or --batch DIR is required")
    out = _run_one(args)
    _emit(out, args.json and args.command != "report")
    return out.code


if __name__ == "__main__":
    sys.exit(main())
