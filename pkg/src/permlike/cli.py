"""Command-line front end.

``permlike check SPEC [--tier fast|dense|both] [--out CERT]``
    exit 0 certified, 1 error, 2 not permutation-like, 3 outside scope.
``permlike enumerate --n N [--twists canonical|seeded:SEED:COUNT] [--out TSV]``
    one TSV row per presentation; worker count from ``--workers`` or
    ``PERMLIKE_WORKERS``.
``permlike selftest``
    runs the reduced property suites and prints a scoreboard.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from .engine import word_str
from .errors import PresentationError
from .fileformat import SpecFormatError, dump_certificate, load_spec
from .pipeline import (
    EXIT_CERTIFIED,
    EXIT_ERROR,
    EXIT_OUTSIDE_SCOPE,
    TSV_HEADER,
    TwistPolicy,
    check,
    run_enumeration,
)
from .suites import SELFTEST

log = logging.getLogger("permlike")


def _cmd_check(args) -> int:
    try:
        spec = load_spec(args.spec)
    except (OSError, SpecFormatError) as exc:
        print(f"error: {args.spec}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except PresentationError as exc:
        # a generator whose permutation part is not j -> r j does not normalize <C>
        print(f"outside scope: {exc}")
        return EXIT_OUTSIDE_SCOPE
    out = check(spec, args.tier)
    print(out.message)
    a = out.analysis
    if a is not None:
        print(f"H = {a.subgroup}, |G| = {a.order}, elements scanned = {a.scanned}")
        if a.witness is not None:
            print(f"witness: {word_str(a.witness.word)}")
            print(f"char factors: {a.witness.factors.describe()}")
            print(f"reason: {a.witness.verdict.reason}")
    if out.certificate is not None and out.status == EXIT_CERTIFIED:
        target = args.out or str(Path(args.spec).with_suffix(".cert.json"))
        dump_certificate(out.certificate, target)
        print(f"certificate written to {target}")
        if out.report is not None:
            print(f"verified: {len(out.report.results)} element checks ({', '.join(out.report.tiers)})")
    return out.status


def _cmd_enumerate(args) -> int:
    try:
        policy = TwistPolicy.parse(args.twists)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    workers = args.workers or int(os.environ.get("PERMLIKE_WORKERS", "1"))
    rows = run_enumeration(args.n, policy, args.tier, workers)
    lines = [TSV_HEADER] + [r.tsv() for r in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    errors = [r for r in rows if r.status == EXIT_ERROR]
    for r in errors:
        log.error("%s %s %s: %s", r.subgroup, r.torsion, r.twist, r.message)
    pl = sum(1 for r in rows if r.permutation_like)
    ok = sum(1 for r in rows if r.certified and r.verified)
    print(f"# n={args.n} twists={policy}: {len(rows)} presentations, "
          f"{pl} permutation-like, {ok} certified and verified, {len(errors)} errors", file=sys.stderr)
    return EXIT_ERROR if errors else EXIT_CERTIFIED


def _cmd_selftest(args) -> int:
    failed = 0
    for suite in SELFTEST():
        res = suite()
        print(res.line())
        failed += not res.passed
    print(f"{'all suites passed' if not failed else f'{failed} suite(s) failed'}")
    return EXIT_ERROR if failed else EXIT_CERTIFIED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="permlike", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="certify one group spec")
    p.add_argument("spec")
    p.add_argument("--tier", choices=("fast", "dense", "both"), default="fast")
    p.add_argument("--out", help="certificate path (default: SPEC with .cert.json)")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("enumerate", help="run every presentation for one n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--twists", default="canonical", help="canonical or seeded:SEED:COUNT")
    p.add_argument("--tier", choices=("fast", "dense", "both"), default="fast")
    p.add_argument("--workers", type=int, default=0)
    p.add_argument("--out", help="TSV output path (default: stdout)")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("selftest", help="run the reduced property suites")
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
