"""``covertorelli`` command line.

Exit codes: 0 success, 1 parse error, 2 validation failure, 3 precondition
or smoothness failure, 4 mathematical-consistency failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Callable, Optional

from . import __version__
from .cover import (
    bott_dim,
    check_property_AB_projective,
    effective_bound_check,
    validate,
)
from .errors import (
    EmptyCharacterSet,
    NonIntegralEigensheaf,
    SingularInput,
    SpecError,
    TopPieceNotOneDimensional,
    TotallyRamifiedViolation,
)
from .ivhs import (
    CoverInvariants,
    certify_cover,
    duality_suite,
    full_kernel_intersection,
    hodge_eigentable,
    invariant_tangent_dim,
    kernel_analysis,
    lemma_hypotheses,
    torelli_certificate,
)
from .poly import cover_equations
from .specfile import CoverSpec, load_spec

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_PRECONDITION, EXIT_CONSISTENCY = range(5)

COMMANDS = ("validate", "hodge", "duality", "torelli", "kernels", "equations", "bott")


class CommandFailed(Exception):
    def __init__(self, code: int, error: dict, result: Optional[dict] = None):
        super().__init__(error.get("message", ""))
        self.code = code
        self.error = error
        self.result = result


def _error(exc: Exception, **extra) -> dict:
    out = {"type": type(exc).__name__, "message": str(exc)}
    out.update(extra)
    return out


def _cover(spec: CoverSpec):
    try:
        cover = spec.build_cover()
    except (NonIntegralEigensheaf, TotallyRamifiedViolation) as exc:
        raise CommandFailed(EXIT_VALIDATION, _error(exc)) from None
    report = validate(cover, strict=spec.options["strictness"] == "strict")
    if not report.passed:
        raise CommandFailed(EXIT_VALIDATION, {"type": "ValidationFailed", "message": "hard checks failed"},
                            {"validation": report.to_dict()})
    return cover, report


def _certified(spec: CoverSpec, threads: int):
    cover, report = _cover(spec)
    try:
        cert = certify_cover(cover, primes=tuple(spec.options["primes"]), trials=spec.options["trials"],
                             seed=spec.options["sampling_seed"])
    except SingularInput as exc:
        w = list(exc.witness) if exc.witness is not None else None
        raise CommandFailed(EXIT_PRECONDITION, _error(exc, witness=w)) from None
    return CoverInvariants(cover, certified=True, threads=threads), cert


def cmd_validate(spec: CoverSpec, args, threads: int) -> dict:
    strict = spec.options["strictness"] == "strict"
    try:
        cover = spec.build_cover(require_generation=False)
    except NonIntegralEigensheaf as exc:
        raise CommandFailed(EXIT_VALIDATION, _error(exc)) from None
    report = validate(cover, strict=strict)
    result = {
        "validation": report.to_dict(),
        "eigensheaf_degrees": [{"character": list(c.exponents), "degree": cover.ell(c)} for c in cover.characters],
        "strictness": spec.options["strictness"],
        "warnings": [w for c in report.checks for w in c.warnings],
    }
    if report.passed:
        result["property_AB_projective"] = check_property_AB_projective(cover)
        result["effective_bound"] = effective_bound_check(cover.ambient_dim, 1, cover)
        return result
    raise CommandFailed(EXIT_VALIDATION, {"type": "ValidationFailed", "message": "hard checks failed"}, result)


def cmd_hodge(spec: CoverSpec, args, threads: int) -> dict:
    inv, cert = _certified(spec, threads)
    table = hodge_eigentable(inv)
    result = {
        "certification": cert,
        "hypotheses": lemma_hypotheses(inv.cover),
        "table": table.to_dict(),
        "serre_symmetric": table.serre_symmetric(inv.cover.group),
        "invariant_tangent_dim": invariant_tangent_dim(inv),
    }
    if not result["serre_symmetric"]:
        raise CommandFailed(EXIT_CONSISTENCY, {"type": "SerreSymmetryFailure", "message": "table not symmetric"},
                            result)
    return result


def cmd_duality(spec: CoverSpec, args, threads: int) -> dict:
    inv, cert = _certified(spec, threads)
    try:
        suite = duality_suite(inv)
    except TopPieceNotOneDimensional as exc:
        raise CommandFailed(EXIT_CONSISTENCY, _error(exc)) from None
    if not suite["all_nondegenerate"]:
        raise CommandFailed(EXIT_CONSISTENCY, {"type": "DualityFailure", "message": "pairing rank deficit"},
                            suite)
    return suite


def cmd_torelli(spec: CoverSpec, args, threads: int) -> dict:
    inv, cert = _certified(spec, threads)
    result = torelli_certificate(inv).to_dict()
    if not result["r_part_verified"] and result["hypotheses"]["A"]:
        raise CommandFailed(EXIT_CONSISTENCY, {"type": "SurjectivityFailure",
                                               "message": "multiplication map not surjective"}, result)
    return result


def cmd_kernels(spec: CoverSpec, args, threads: int) -> dict:
    inv, cert = _certified(spec, threads)
    indices = [args.index] if args.index is not None else list(range(inv.cover.r))
    result: dict = {"analyses": []}
    for i in indices:
        if not 0 <= i < inv.cover.r:
            raise CommandFailed(EXIT_PRECONDITION, {"type": "IndexError", "message": f"no branch index {i}"})
        try:
            result["analyses"].append(kernel_analysis(inv, i))
        except EmptyCharacterSet as exc:
            raise CommandFailed(EXIT_PRECONDITION, _error(exc)) from None
    result["full_intersection"] = full_kernel_intersection(inv)
    return result


def cmd_equations(spec: CoverSpec, args, threads: int) -> dict:
    cover, _ = _cover(spec)
    return cover_equations(cover).to_dict()


def cmd_bott(args) -> dict:
    n, p, q, k = args.bott
    return {"n": n, "p": p, "q": q, "k": k, "dim": bott_dim(n, p, q, k)}


HANDLERS: dict[str, Callable] = {
    "validate": cmd_validate,
    "hodge": cmd_hodge,
    "duality": cmd_duality,
    "torelli": cmd_torelli,
    "kernels": cmd_kernels,
    "equations": cmd_equations,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="covertorelli", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"covertorelli {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("bott", nargs="*", type=int, metavar="N P Q K",
                        help="for the bott command: n p q k")
    parser.add_argument("--spec", help="cover-spec JSON file")
    parser.add_argument("--index", type=int, help="branch index for the kernels command")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--threads", type=int, default=None)
    return parser


def resolve_threads(flag: Optional[int]) -> int:
    if flag is not None:
        return max(1, flag)
    env = os.environ.get("COVERTORELLI_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def run(argv: Optional[list[str]] = None) -> tuple[int, dict]:
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = resolve_threads(args.threads)
    report: dict = {
        "toolkit": {"name": "covertorelli", "version": __version__},
        "command": args.command,
        "spec_sha256": None,
    }
    start = time.perf_counter()
    code = EXIT_OK
    try:
        if args.command == "bott":
            if len(args.bott) != 4:
                raise CommandFailed(EXIT_PARSE, {"type": "UsageError", "message": "bott needs n p q k"})
            report["result"] = cmd_bott(args)
        else:
            if args.bott:
                raise CommandFailed(EXIT_PARSE, {"type": "UsageError",
                                                 "message": "positional integers are only for bott"})
            if not args.spec:
                raise CommandFailed(EXIT_PARSE, {"type": "UsageError", "message": "--spec is required"})
            try:
                spec = load_spec(args.spec)
                report["spec_sha256"] = spec.sha256
                spec.sections()
            except SpecError as exc:
                raise CommandFailed(EXIT_PARSE, _error(exc)) from None
            report["result"] = HANDLERS[args.command](spec, args, threads)
    except CommandFailed as exc:
        code = exc.code
        report["error"] = exc.error
        if exc.result is not None:
            report["result"] = exc.result
    except ValueError as exc:
        code = EXIT_PARSE
        report["error"] = _error(exc)
    report["exit_code"] = code
    report["timing"] = {"seconds": round(time.perf_counter() - start, 6), "threads": threads}
    return code, report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    code, report = run(argv)
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
