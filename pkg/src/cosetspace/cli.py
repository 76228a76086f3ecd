"""Command-line interface.

Exit codes: 0 success, 1 negative verdict (not a partition), 2 usage, parse
or resource errors.
"""
from __future__ import annotations

import argparse
import sys

from .analyzer import DEFAULT_R, DEFAULT_READING, READINGS, _fmt_dyadic, analyze
from .errors import CosetSpaceError
from .generate import GenConfig, random_partition
from .partition import act, distance, orbit_size_full, orbit_size_word, verify
from .permgroup import DEFAULT_CAP
from .textformat import format_partition, load_partition
from .words import parse


def _cmd_verify(args) -> int:
    P = load_partition(args.file)
    result = verify(P)
    if result.is_partition:
        print("is_partition = true")
        return 0
    print("is_partition = false")
    print(f"witness={result.witness} covered={result.witness_cover_count} ({result.reason})",
          file=sys.stderr)
    return 1


def _cmd_analyze(args) -> int:
    P = load_partition(args.file)
    report = analyze(P, cap=args.cap, r=args.r, reading=args.reading)
    sys.stdout.write(report.to_text() if args.format == "text" else report.to_kv())
    return 0 if report.is_partition else 1


def _cmd_metric(args) -> int:
    P, Q = load_partition(args.file_a), load_partition(args.file_b)
    print(_fmt_dyadic(distance(P, Q)))
    return 0


def _cmd_orbit(args) -> int:
    P = load_partition(args.file)
    w = parse(args.word, P.rank)
    print(f"orbit_word={orbit_size_word(P, w)} orbit_full={orbit_size_full(P)}")
    return 0


def _cmd_act(args) -> int:
    P = load_partition(args.file)
    sys.stdout.write(format_partition(act(P, parse(args.word, P.rank))))
    return 0


def _cmd_gen(args) -> int:
    cfg = GenConfig(rank=args.rank, max_parts=args.max_parts, max_index=args.max_index,
                    refinement_depth=args.depth, seed=args.seed)
    sys.stdout.write(format_partition(random_partition(cfg)))
    return 0


def _cmd_export_dot(args) -> int:
    P = load_partition(args.file)
    if not 1 <= args.part_index <= P.s:
        raise CosetSpaceError(f"part index must be in 1..{P.s}")
    sys.stdout.write(P.pairs[args.part_index - 1].subgroup.to_dot())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cosetspace",
                                     description="Coset partitions of free groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check that a file describes a coset partition")
    p.add_argument("file")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("analyze", help="evaluate the multiplicity conditions")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap per group")
    p.add_argument("--r", type=int, default=DEFAULT_R)
    p.add_argument("--reading", choices=READINGS, default=DEFAULT_READING,
                   help="scoping of condition (iv)")
    p.add_argument("--format", choices=("kv", "text"), default="kv")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("metric", help="distance between two partitions")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=_cmd_metric)

    p = sub.add_parser("orbit", help="orbit sizes under <word> and under F_n")
    p.add_argument("file")
    p.add_argument("word")
    p.set_defaults(func=_cmd_orbit)

    p = sub.add_parser("act", help="right-multiply every representative by a word")
    p.add_argument("file")
    p.add_argument("word")
    p.set_defaults(func=_cmd_act)

    p = sub.add_parser("gen", help="generate a random partition")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--max-index", type=int, default=12)
    p.add_argument("--max-parts", type=int, default=8)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("export-dot", help="Graphviz DOT of one part's Schreier graph")
    p.add_argument("file")
    p.add_argument("part_index", type=int, help="1-based place in canonical order")
    p.set_defaults(func=_cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (CosetSpaceError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
