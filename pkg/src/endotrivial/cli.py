"""Command line: ``endotrivial analyze | battery | metacyclic``.

Exit status: 0 success, 1 analysis error, 2 a MISMATCH flag was raised."""

from __future__ import annotations

import argparse
import sys

from .battery import matrix, run_battery
from .characters import FieldSpec
from .errors import GroupError
from .groupfile import dump_group, load_group
from .metacyclic import MetacyclicPresentation, construct
from .report import analyze

EXIT_OK, EXIT_ERROR, EXIT_MISMATCH = 0, 1, 2


def _analyze(args) -> int:
    G = load_group(args.group)
    field_spec = FieldSpec.parse(args.field, args.prime)
    report = analyze(G, args.prime, field_spec, weak_homs=not args.no_weak_homs)
    text = report.to_json()
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(report.summary())
    return EXIT_MISMATCH if report.mismatch else EXIT_OK


def _battery(args) -> int:
    items = run_battery(args.suite)
    print(matrix(items))
    if any(it.error for it in items):
        return EXIT_ERROR
    if any(it.report is not None and it.report.mismatch for it in items):
        return EXIT_MISMATCH
    return EXIT_OK if all(it.passed for it in items) else EXIT_MISMATCH


def _metacyclic(args) -> int:
    pres = MetacyclicPresentation(args.p, args.m, args.n, args.l, args.q, strict=not args.loose)
    M = construct(pres)
    name = f"metacyclic{pres.as_tuple()}"
    text = dump_group(M.order, [M.regular_permutation(M.x), M.regular_permutation(M.y)], name)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="endotrivial", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyse one group file at one prime")
    a.add_argument("--group", required=True, help="path to a group file")
    a.add_argument("--prime", type=int, required=True)
    a.add_argument("--field", default="closed", help="'closed' or the field size q")
    a.add_argument("--output", default="-", help="report path ('-' for stdout)")
    a.add_argument("--no-weak-homs", action="store_true", help="skip weak S-homomorphism certification")
    a.set_defaults(func=_analyze)

    b = sub.add_parser("battery", help="run a built-in suite")
    b.add_argument("--suite", default="default", help="default, extended or metacyclic-grid")
    b.set_defaults(func=_battery)

    m = sub.add_parser("metacyclic", help="emit the group file of a metacyclic presentation")
    m.add_argument("--p", type=int, required=True)
    m.add_argument("--m", type=int, required=True)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--l", type=int, required=True)
    m.add_argument("--q", type=int, default=None, help="omit for the split case q = m")
    m.add_argument("--loose", action="store_true", help="accept nonsplit tuples outside l < q < n")
    m.add_argument("--output", default="-")
    m.set_defaults(func=_metacyclic)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GroupError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
