"""Permutations of {0, ..., d-1}, composed left to right (right action)."""
from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Permutation:
    """``p * q`` applies ``p`` first, then ``q``: ``(p * q)(x) == q(p(x))``."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection on 0..{len(images) - 1}: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, d: int) -> Permutation:
        return cls(tuple(range(d)))

    @classmethod
    def from_cycles(cls, d: int, *cycles: Sequence[int]) -> Permutation:
        images = list(range(d))
        for cyc in cycles:
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                images[a] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Permutation) -> Permutation:
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return Permutation(tuple(other.images[x] for x in self.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(tuple(inv))

    def __pow__(self, m: int) -> Permutation:
        base = self if m >= 0 else self.inverse()
        out = Permutation.identity(self.degree)
        for _ in range(abs(m)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """All cycles including fixed points, each starting at its least point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def cycle_length_at(self, v: int) -> int:
        return cycle_length_at(self, v)

    def max_cycle_length(self) -> int:
        return max((len(c) for c in self.cycles()), default=0)

    def is_full_cycle(self) -> bool:
        return self.degree > 0 and self.cycle_length_at(0) == self.degree

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles())) if self.degree else 1

    def __repr__(self) -> str:
        moved = [c for c in self.cycles() if len(c) > 1]
        if not moved:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in moved)


def cycle_length_at(pi: Permutation, v: int) -> int:
    """Minimal m >= 1 with pi^m(v) == v."""
    if not 0 <= v < pi.degree:
        raise ValueError(f"point {v} outside 0..{pi.degree - 1}")
    m = 1
    x = pi.images[v]
    while x != v:
        x = pi.images[x]
        m += 1
    return m


def compose_all(perms: Iterable[Permutation], degree: int) -> Permutation:
    out = Permutation.identity(degree)
    for p in perms:
        out = out * p
    return out
