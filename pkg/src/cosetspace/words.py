"""Elements of the free group F_n as freely reduced words.

A letter is a nonzero int: ``+i`` is the i-th generator (1-based) and ``-i``
its inverse. On the surface, generators are ``a, b, c, ...``, inverses are
``A, B, C, ...`` and the identity is ``1``.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import RankMismatch, WordParseError

MAX_RANK = 26


def _check_rank(rank: int) -> None:
    if rank < 1:
        raise ValueError(f"rank must be positive, got {rank}")


def letter_char(x: int) -> str:
    if abs(x) > MAX_RANK:
        raise ValueError(f"letter {x} has no surface character (max rank {MAX_RANK})")
    c = string.ascii_lowercase[abs(x) - 1]
    return c if x > 0 else c.upper()


def letter_order(rank: int) -> tuple[int, ...]:
    """The fixed letter order g1, g1^-1, g2, g2^-1, ... used by every BFS."""
    return tuple(x for g in range(1, rank + 1) for x in (g, -g))


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; reduction happens at construction."""

    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        _check_rank(self.rank)
        for x in self.letters:
            if not isinstance(x, int) or x == 0 or abs(x) > self.rank:
                raise ValueError(f"letter {x!r} out of range for rank {self.rank}")
        object.__setattr__(self, "letters", reduce_letters(self.letters))

    @classmethod
    def identity(cls, rank: int) -> Word:
        return cls(rank, ())

    @classmethod
    def generator(cls, rank: int, i: int) -> Word:
        return cls(rank, (i,))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other: Word) -> Word:
        if not isinstance(other, Word):
            return NotImplemented
        if other.rank != self.rank:
            raise RankMismatch(f"cannot multiply rank {self.rank} by rank {other.rank}")
        return Word(self.rank, self.letters + other.letters)

    def inverse(self) -> Word:
        return Word(self.rank, tuple(-x for x in reversed(self.letters)))

    def __pow__(self, m: int) -> Word:
        base = self if m >= 0 else self.inverse()
        return Word(self.rank, base.letters * abs(m))

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r}, rank={self.rank})"


def reduce(letters: Sequence[int], rank: int) -> Word:
    return Word(rank, tuple(letters))


def multiply(u: Word, v: Word) -> Word:
    return u * v


def inverse(u: Word) -> Word:
    return u.inverse()


def parse(text: str, rank: int) -> Word:
    """Parse surface syntax; ``"1"`` (or the empty string) is the identity."""
    if not 1 <= rank <= MAX_RANK:
        raise ValueError(f"surface syntax supports ranks 1..{MAX_RANK}, got {rank}")
    text = text.strip()
    if text in ("", "1"):
        return Word.identity(rank)
    letters = []
    for ch in text:
        if ch in string.ascii_lowercase:
            x = string.ascii_lowercase.index(ch) + 1
        elif ch in string.ascii_uppercase:
            x = -(string.ascii_uppercase.index(ch) + 1)
        else:
            raise WordParseError(f"unknown character {ch!r} in word {text!r}")
        if abs(x) > rank:
            raise WordParseError(f"character {ch!r} is beyond rank {rank}")
        letters.append(x)
    return Word(rank, tuple(letters))


def format_word(w: Word) -> str:
    if not w.letters:
        return "1"
    return "".join(letter_char(x) for x in w.letters)
