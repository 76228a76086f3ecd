"""Reading and writing the partition text format.

    rank <n>
    coset
      rep <word>
      gens <word> [<word> ...]
    end

Blank lines and lines starting with '#' are ignored.
"""
from __future__ import annotations

from pathlib import Path

from .automaton import build_subgroup
from .errors import PartitionFormatError, WordParseError
from .partition import CosetPair, CosetPartition
from .words import parse


def parse_partition(text: str) -> CosetPartition:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append((lineno, line.split()))
    if not lines or lines[0][1][0] != "rank" or len(lines[0][1]) != 2:
        raise PartitionFormatError("first line must be 'rank <n>'")
    try:
        rank = int(lines[0][1][1])
    except ValueError:
        raise PartitionFormatError(f"bad rank {lines[0][1][1]!r}") from None

    pairs = []
    block = None
    for lineno, toks in lines[1:]:
        head = toks[0]
        try:
            if head == "coset" and len(toks) == 1 and block is None:
                block = {}
            elif head == "rep" and block is not None and len(toks) == 2 and "rep" not in block:
                block["rep"] = parse(toks[1], rank)
            elif head == "gens" and block is not None and len(toks) >= 2 and "gens" not in block:
                block["gens"] = [parse(t, rank) for t in toks[1:]]
            elif head == "end" and len(toks) == 1 and block is not None:
                if "rep" not in block or "gens" not in block:
                    raise PartitionFormatError(f"line {lineno}: coset block needs rep and gens")
                pairs.append(CosetPair(build_subgroup(block["gens"], rank), block["rep"]))
                block = None
            else:
                raise PartitionFormatError(f"line {lineno}: unexpected {' '.join(toks)!r}")
        except WordParseError as exc:
            raise PartitionFormatError(f"line {lineno}: {exc}") from None
    if block is not None:
        raise PartitionFormatError("unterminated coset block")
    if not pairs:
        raise PartitionFormatError("no coset blocks")
    return CosetPartition(rank, tuple(pairs))


def format_partition(P: CosetPartition) -> str:
    out = [f"rank {P.rank}"]
    for pair in P.pairs:
        gens = pair.subgroup.generator_words or tuple(pair.subgroup.schreier_generators())
        out += [
            "coset",
            f"  rep {pair.representative}",
            "  gens " + " ".join(str(g) for g in gens),
            "end",
        ]
    return "\n".join(out) + "\n"


def load_partition(path) -> CosetPartition:
    return parse_partition(Path(path).read_text())
