"""Command-line front end.

Exit codes: 0 success, 1 violation or false result, 2 usage error,
3 input error (unreadable file, syntax, invalid weights, evaluation error).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import lang
from .conditional import MutualIndependence
from .errors import InvalidWeight, ProbError
from .events import SigmaCheck
from .graph import emit_dependency_graph
from .measure import AxiomReport, validate_measure
from .rational import format_decimal, format_rational
from .suite import SpaceGenerator, fuzz, verify_all

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def describe_error(exc: ProbError) -> str:
    """``line:col: ErrorName: message``, without the position when unknown."""
    where = f"{exc.pos[0]}:{exc.pos[1]}: " if exc.pos else ""
    return f"{where}{type(exc).__name__}: {exc.message}"


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument(
        "--format", choices=("text", "json"), default="text", help="output format"
    )
    timing = argparse.ArgumentParser(add_help=False)
    timing.add_argument(
        "--elapsed", action="store_true", help="append the elapsed time to the report"
    )

    parser = argparse.ArgumentParser(
        prog="finprob", description="Exact probability on finite sample spaces."
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("check", parents=[fmt], help="validate a .prob file's measure")
    p.add_argument("file", type=Path)

    p = sub.add_parser("query", parents=[fmt], help="evaluate a query against a .prob file")
    p.add_argument("file", type=Path)
    p.add_argument("query")
    p.add_argument(
        "--decimal", action="store_true", help="also print a 20-digit decimal rendering"
    )

    p = sub.add_parser(
        "verify", parents=[fmt, timing], help="run the identity catalogue on a .prob file"
    )
    p.add_argument("file", type=Path)

    p = sub.add_parser(
        "fuzz", parents=[fmt, timing], help="run the identity catalogue on random spaces"
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--max-outcomes", type=_positive_int, default=8)

    p = sub.add_parser("graph", parents=[fmt], help="emit the result dependency diagram")
    p.add_argument("--out", type=Path, help="write DOT here instead of standard output")
    return parser


def _load(path: Path) -> lang.SpaceFile:
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as err:
        raise InputError(f"{path}: cannot read: {err}") from None
    return lang.parse_space_file(text)


def _report_lines(report: AxiomReport) -> list[str]:
    def mark(ok: bool) -> str:
        return "ok" if ok else "VIOLATED"

    lines = [
        f"non-negativity  {mark(report.nonneg_ok)}",
        f"normalization   {mark(report.normalized_ok)}",
        f"additivity      {mark(report.additivity_ok)}",
    ]
    lines += [f"  {w}" for w in report.witnesses]
    return lines


def _report_dict(report: AxiomReport) -> dict:
    return {
        "valid": report.ok,
        "nonneg_ok": report.nonneg_ok,
        "normalized_ok": report.normalized_ok,
        "additivity_ok": report.additivity_ok,
        "witnesses": list(report.witnesses),
    }


def _cmd_check(args, out, err) -> int:
    try:
        sf = _load(args.file)
    except InvalidWeight as exc:
        if exc.report is None:
            raise
        if args.format == "json":
            err.write(json.dumps({"file": str(args.file), **_report_dict(exc.report)}) + "\n")
        else:
            err.write(f"{args.file}: invalid measure\n")
            err.write("\n".join(_report_lines(exc.report)) + "\n")
        return EXIT_INPUT
    report = validate_measure(sf.measure)
    if args.format == "json":
        out.write(json.dumps({"file": str(args.file), **_report_dict(report)}) + "\n")
    else:
        out.write(f"space {sf.name}: {len(sf.space)} outcomes, {len(sf.events)} events\n")
        out.write("\n".join(_report_lines(report)) + "\n")
    return EXIT_OK if report.ok else EXIT_INPUT


def _cmd_query(args, out, err) -> int:
    sf = _load(args.file)
    try:
        q = lang.parse_query(args.query)
        result = lang.eval_query(sf, q)
    except ProbError as exc:
        raise InputError("query:" + describe_error(exc)) from None
    record: dict = {"query": lang.format_query(q)}
    code = EXIT_OK
    if isinstance(result, Fraction):
        text = format_rational(result)
        record.update(kind="rational", value=text)
        if args.decimal:
            record["decimal"] = format_decimal(result)
            text += f" ~ {record['decimal']}"
    else:
        ok = bool(result)
        record.update(kind="boolean", value=ok)
        text = "true" if ok else "false"
        code = EXIT_OK if ok else EXIT_FALSE
        if isinstance(result, MutualIndependence) and not ok:
            labels = lang.family_labels(sf, q.args)
            names = [labels[i] for i in result.violating]
            record["violating"] = names
            text += f" (violating subset: {', '.join(names)})"
        elif isinstance(result, SigmaCheck) and not ok:
            record["violated"] = result.violated
            record["witness"] = [str(e) for e in result.witness]
            text += f" ({result.violated}: {result.detail})"
    if args.format == "json":
        out.write(json.dumps(record) + "\n")
    else:
        out.write(text + "\n")
    return code


def _file_events(sf: lang.SpaceFile):
    seen, events = set(), []
    for e in list(sf.events.values()) + [b for p in sf.partitions.values() for b in p]:
        if e.mask not in seen:
            seen.add(e.mask)
            events.append(e)
    return events


def _emit_report(args, report, out) -> None:
    if args.format == "json":
        out.write(report.to_json(include_elapsed=args.elapsed) + "\n")
    else:
        out.write(report.to_text(include_elapsed=args.elapsed))


def _cmd_verify(args, out, err) -> int:
    sf = _load(args.file)
    report = verify_all(sf.measure, _file_events(sf))
    _emit_report(args, report, out)
    return EXIT_OK if report.ok else EXIT_FALSE


def _cmd_fuzz(args, out, err) -> int:
    gen = SpaceGenerator(args.seed, max_outcomes=args.max_outcomes)
    report = fuzz(gen, args.trials)
    _emit_report(args, report, out)
    return EXIT_OK if report.ok else EXIT_FALSE


def _cmd_graph(args, out, err) -> int:
    dot = emit_dependency_graph()
    if args.out is not None:
        try:
            args.out.write_text(dot, encoding="utf-8")
        except OSError as exc:
            raise InputError(f"{args.out}: cannot write: {exc}") from None
        if args.format == "json":
            out.write(json.dumps({"out": str(args.out)}) + "\n")
        return EXIT_OK
    if args.format == "json":
        out.write(json.dumps({"dot": dot}) + "\n")
    else:
        out.write(dot)
    return EXIT_OK


COMMANDS = {
    "check": _cmd_check,
    "query": _cmd_query,
    "verify": _cmd_verify,
    "fuzz": _cmd_fuzz,
    "graph": _cmd_graph,
}


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out, err)
    except InputError as exc:
        err.write(f"finprob: {exc}\n")
    except ProbError as exc:
        where = f"{args.file}:" if getattr(args, "file", None) else ""
        err.write(f"finprob: {where}{describe_error(exc)}\n")
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
