"""Command line entry point: construct, verify, classify and sweep."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .construct import SPECIAL_CASES, OrderResult, construct_order
from .errors import NotConstructible, QuatOrdersError
from .lattice import hnf
from .quat import QuatAlgebra, classify_all
from .verify import sweep, verify_order

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_NOT_CONSTRUCTIBLE = 2
EXIT_INVALID = 3

# options whose values may start with "-" (negative a, b or basis entries)
_VALUE_FLAGS = ("--algebra", "--basis")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass(frozen=True)
class CliConfig:
    subcommand: str
    disc: Optional[int] = None
    level: Optional[int] = None
    q_override: Optional[int] = None
    case_override: Optional[str] = None
    algebra: Optional[tuple[int, int]] = None
    basis: Optional[tuple[Fraction, ...]] = None
    json: bool = False
    jobs: int = 1
    report_path: Optional[str] = None
    from_json: Optional[str] = None
    max_disc: int = 30
    max_level: int = 500


def rational_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_algebra(text: str) -> tuple[int, int]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"--algebra expects 'a,b', got {text!r}")
    return int(parts[0]), int(parts[1])


def parse_basis(text: str) -> tuple[Fraction, ...]:
    parts = [p for p in text.replace(";", ",").replace(" ", ",").split(",") if p]
    if len(parts) != 16:
        raise ValueError(f"--basis expects 16 rationals, got {len(parts)}")
    return tuple(Fraction(p) for p in parts)


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    out, idx = [], 0
    argv = list(argv)
    while idx < len(argv):
        tok = argv[idx]
        if tok in _VALUE_FLAGS and idx + 1 < len(argv):
            out.append(f"{tok}={argv[idx + 1]}")
            idx += 2
            continue
        out.append(tok)
        idx += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quatorders", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build an order of level N")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--q", type=int, dest="q_override")
    p.add_argument("--case", choices=SPECIAL_CASES, dest="case_override")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="check a basis against an expected level")
    p.add_argument("--algebra")
    p.add_argument("--basis")
    p.add_argument("--from-json", help="construct --json output file, or - for stdin")
    p.add_argument("--disc", type=int)
    p.add_argument("--expect-level", "--level", type=int, dest="level")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("classify", help="local behaviour of each relevant prime")
    p.add_argument("--algebra")
    p.add_argument("--disc", type=int)
    p.add_argument("--level", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("sweep", help="construct and verify every admissible pair in a range")
    p.add_argument("--max-disc", type=int, default=30)
    p.add_argument("--max-level", type=int, default=500)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report")
    p.add_argument("--json", action="store_true")
    return parser


def parse_config(argv: Sequence[str]) -> CliConfig:
    ns = build_parser().parse_args(_join_negative_values(argv))
    get = lambda name, default=None: getattr(ns, name, default)  # noqa: E731
    try:
        algebra = parse_algebra(ns.algebra) if get("algebra") else None
        basis = parse_basis(ns.basis) if get("basis") else None
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(str(exc)) from exc
    config = CliConfig(
        subcommand=ns.subcommand,
        disc=get("disc"),
        level=get("level"),
        q_override=get("q_override"),
        case_override=get("case_override"),
        algebra=algebra,
        basis=basis,
        json=bool(get("json", False)),
        jobs=get("jobs", 1),
        report_path=get("report"),
        from_json=get("from_json"),
        max_disc=get("max_disc", 30),
        max_level=get("max_level", 500),
    )
    _validate(config)
    return config


def _validate(c: CliConfig) -> None:
    if c.subcommand == "verify":
        if c.from_json is None and (c.algebra is None or c.basis is None):
            raise _UsageError("verify needs --algebra and --basis, or --from-json")
        if c.from_json is None and c.level is None:
            raise _UsageError("verify needs --expect-level")
    if c.subcommand == "classify" and c.algebra is None and (c.disc is None or c.level is None):
        raise _UsageError("classify needs --algebra, or --disc and --level")
    if c.jobs < 1:
        raise _UsageError("--jobs must be positive")


def result_to_dict(result: OrderResult, verified: bool) -> dict:
    r = result.recipe
    L = result.order
    return {
        "algebra": {"a": r.a, "b": r.b},
        "recipe": {
            "q": r.q, "f": r.f, "g": r.g, "h": r.h, "epsilon": r.epsilon,
            "x": r.x, "t": r.t, "u": r.u, "z": r.z, "zprime": r.zprime, "case": r.case_tag,
        },
        "basis": [[rational_str(c) for c in e.coords] for e in L.basis],
        "denominator": L.denominator,
        "level": result.level,
        "predicted_local": {str(p): e for p, e in sorted(result.predicted_local.items())},
        "verified": verified,
    }


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _run_construct(c: CliConfig) -> int:
    result = construct_order(c.disc, c.level, c.q_override, c.case_override)
    report = verify_order(result.order, c.disc, c.level)
    if c.json:
        print(_dump(result_to_dict(result, report.passed)))
    else:
        r = result.recipe
        print(f"algebra   ({r.a}, {r.b} / Q)   case {r.case_tag}, q = {r.q} divides {r.q_divides}")
        print(f"scalars   f={r.f} g={r.g} h={r.h} epsilon={r.epsilon}")
        print(f"bezout    x={r.x} t={r.t} u={r.u} z={r.z} z'={r.zprime}")
        print("basis")
        for e in result.order.basis:
            print(f"  {e}")
        print(f"level     {result.level}   verified: {report.passed}")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _load_json_basis(path: str) -> tuple[QuatAlgebra, list, int]:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    data = json.loads(text)
    A = QuatAlgebra(int(data["algebra"]["a"]), int(data["algebra"]["b"]))
    rows = [[Fraction(x) for x in row] for row in data["basis"]]
    return A, rows, int(data["level"])


def _run_verify(c: CliConfig) -> int:
    if c.from_json is not None:
        A, rows, level = _load_json_basis(c.from_json)
        level = c.level if c.level is not None else level
    else:
        A = QuatAlgebra(*c.algebra)
        rows = [list(c.basis[4 * n: 4 * n + 4]) for n in range(4)]
        level = c.level
    L = hnf(A, rows)
    report = verify_order(L, c.disc, level)
    if c.json:
        print(_dump({
            "passed": report.passed,
            "is_order": report.is_order,
            "reduced_discriminant": report.reduced_discriminant,
            "per_prime_level": {str(p): e for p, e in sorted(report.per_prime_level.items())},
            "failures": report.failures,
        }))
    else:
        print(f"algebra               {A}")
        print(f"is order              {report.is_order}")
        print(f"reduced discriminant  {report.reduced_discriminant}")
        print(f"expected level        {level}")
        for failure in report.failures:
            print(f"FAIL  {failure}")
        print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _run_classify(c: CliConfig) -> int:
    if c.algebra is not None:
        A = QuatAlgebra(*c.algebra)
    else:
        r = construct_order(c.disc, c.level).recipe
        A = r.algebra
    extra = [n for n in (c.disc, c.level) if n]
    rows = classify_all(A, extra)
    if c.json:
        print(_dump({
            "algebra": {"a": A.a, "b": A.b},
            "primes": [
                {"p": b.p, "field": b.field_class, "algebra": b.algebra_class} for b in rows
            ],
        }))
    else:
        print(f"algebra {A}")
        print(f"{'p':>8}  {'Q(sqrt a)':<10} algebra")
        for b in rows:
            print(f"{b.p:>8}  {b.field_class:<10} {b.algebra_class}")
    return EXIT_OK


def _run_sweep(c: CliConfig) -> int:
    report = sweep(c.max_disc, c.max_level, c.jobs)
    text = _dump(report.as_dict())
    if c.report_path:
        with open(c.report_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if c.json:
        print(text)
    else:
        print(
            f"disc <= {c.max_disc}, N <= {c.max_level}: attempted {report.attempted}, "
            f"passed {report.passed}, skipped {report.skipped_not_constructible}, "
            f"failed {len(report.failures)}"
        )
        for f in report.failures:
            print(f"FAIL  disc={f.disc} N={f.N}: {f.detail}")
    return EXIT_OK if not report.failures else EXIT_VERIFY_FAILED


_COMMANDS = {
    "construct": _run_construct,
    "verify": _run_verify,
    "classify": _run_classify,
    "sweep": _run_sweep,
}


def run(config: CliConfig) -> int:
    try:
        return _COMMANDS[config.subcommand](config)
    except NotConstructible as exc:
        print(f"not constructible: {exc}", file=sys.stderr)
        print(_dump(exc.certificate), file=sys.stderr)
        return EXIT_NOT_CONSTRUCTIBLE
    except (QuatOrdersError, ValueError, OSError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
