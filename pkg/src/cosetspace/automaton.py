"""Schreier graphs of finite-index subgroups of F_n.

A subgroup H is represented by its Schreier automaton: states are the right
cosets of H, the basepoint 0 is H itself, and the g-transition sends Hw to
Hwg. States are always numbered in BFS discovery order from the basepoint
under the letter order g1, g1^-1, g2, g2^-1, ..., which makes the transition
tables a canonical form for the subgroup.
"""
from __future__ import annotations

import struct
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InfiniteIndex, RankMismatch, ResourceExceeded
from .perm import Permutation
from .words import Word, letter_char, letter_order

MAX_INDEX = 4096


def _inverse_tables(transitions: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    out = []
    for table in transitions:
        inv = [0] * len(table)
        for q, r in enumerate(table):
            inv[r] = q
        out.append(tuple(inv))
    return tuple(out)


def _bfs_relabel(transitions, inverses, rank: int, base: int = 0):
    """BFS from ``base``; returns (order, tree) with tree[new] = (parent_new, letter)."""
    order = [base]
    label = {base: 0}
    tree: list[tuple[int, int] | None] = [None]
    i = 0
    while i < len(order):
        q = order[i]
        for x in letter_order(rank):
            r = transitions[x - 1][q] if x > 0 else inverses[-x - 1][q]
            if r not in label:
                label[r] = len(order)
                order.append(r)
                tree.append((i, x))
        i += 1
    return order, label, tree


def _canonical_tables(transitions, rank: int, base: int = 0):
    inverses = _inverse_tables(transitions)
    order, label, _ = _bfs_relabel(transitions, inverses, rank, base)
    if len(order) != len(transitions[0]):
        raise ValueError("automaton is not connected from its basepoint")
    return tuple(
        tuple(label[table[q]] for q in order) for table in transitions
    )


@dataclass(frozen=True)
class SubgroupAutomaton:
    """Folded, complete, bi-deterministic rooted graph of a finite-index subgroup.

    ``transitions[g - 1][q]`` is the target of the g-edge leaving state q.
    Construction renumbers states canonically, so two automata compare equal
    exactly when they represent the same subgroup of F_n.
    """

    rank: int
    transitions: tuple[tuple[int, ...], ...]
    generator_words: tuple[Word, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.transitions) != self.rank:
            raise ValueError(f"need {self.rank} transition maps, got {len(self.transitions)}")
        d = len(self.transitions[0])
        for table in self.transitions:
            if sorted(table) != list(range(d)):
                raise ValueError("every transition map must be a bijection of the states")
        object.__setattr__(
            self, "transitions", _canonical_tables(self.transitions, self.rank)
        )

    @property
    def state_count(self) -> int:
        return len(self.transitions[0])

    index = state_count

    @cached_property
    def _inverses(self) -> tuple[tuple[int, ...], ...]:
        return _inverse_tables(self.transitions)

    def step(self, q: int, x: int) -> int:
        return self.transitions[x - 1][q] if x > 0 else self._inverses[-x - 1][q]

    def read(self, q: int, letters: Iterable[int]) -> int:
        fwd, inv = self.transitions, self._inverses
        for x in letters:
            q = fwd[x - 1][q] if x > 0 else inv[-x - 1][q]
        return q

    def _check(self, w: Word) -> None:
        if w.rank != self.rank:
            raise RankMismatch(f"word of rank {w.rank} read in rank-{self.rank} automaton")

    def state_of(self, w: Word) -> int:
        """State reached reading ``w`` from the basepoint, i.e. the coset Hw."""
        self._check(w)
        return self.read(0, w.letters)

    def contains(self, w: Word) -> bool:
        return self.state_of(w) == 0

    def generator_permutations(self) -> list[Permutation]:
        return [Permutation(t) for t in self.transitions]

    def canonical_form(self) -> bytes:
        """Big-endian (rank, d, then per state the tuple of generator images)."""
        d = self.state_count
        flat = [self.transitions[g][q] for q in range(d) for g in range(self.rank)]
        return struct.pack(f">II{len(flat)}I", self.rank, d, *flat)

    @cached_property
    def _tree(self):
        return _bfs_relabel(self.transitions, self._inverses, self.rank)[2]

    def transversal(self) -> list[Word]:
        """Shortest (BFS-tree) representatives; element q lies in coset q."""
        paths: list[tuple[int, ...]] = [()]
        for q in range(1, self.state_count):
            parent, x = self._tree[q]
            paths.append(paths[parent] + (x,))
        return [Word(self.rank, p) for p in paths]

    def schreier_generators(self) -> list[Word]:
        """Free basis from the BFS spanning tree, one word per non-tree edge.

        The basis has (rank - 1) * d + 1 elements, listed by state, then generator.
        """
        reps = self.transversal()
        tree_edges = set()
        for q in range(1, self.state_count):
            parent, x = self._tree[q]
            tree_edges.add((parent, x) if x > 0 else (q, -x))
        out = []
        for q in range(self.state_count):
            for g in range(1, self.rank + 1):
                if (q, g) in tree_edges:
                    continue
                r = self.transitions[g - 1][q]
                out.append(reps[q] * Word(self.rank, (g,)) * reps[r].inverse())
        return out

    def conjugate_basepoint(self, alpha: Word) -> SubgroupAutomaton:
        """Automaton of alpha^-1 H alpha: the same graph re-rooted at Halpha."""
        q = self.state_of(alpha)
        if q == 0:
            return self
        tables = _canonical_tables(self.transitions, self.rank, base=q)
        gens = tuple(alpha.inverse() * g * alpha for g in self.generator_words)
        return SubgroupAutomaton(self.rank, tables, gens)

    def to_dot(self, name: str = "schreier") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for q in range(self.state_count):
            shape = "doublecircle" if q == 0 else "circle"
            lines.append(f'  {q} [shape={shape}];')
        for q in range(self.state_count):
            for g in range(1, self.rank + 1):
                r = self.transitions[g - 1][q]
                lines.append(f'  {q} -> {r} [label="{letter_char(g)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"SubgroupAutomaton(rank={self.rank}, index={self.state_count})"


def whole_group(rank: int) -> SubgroupAutomaton:
    gens = tuple(Word(rank, (g,)) for g in range(1, rank + 1))
    return SubgroupAutomaton(rank, tuple((0,) for _ in range(rank)), gens)


def from_permutations(perms: Sequence[Permutation], base: int = 0,
                      max_index: int = MAX_INDEX) -> SubgroupAutomaton:
    """Stabilizer of ``base`` under a transitive action given by generator images."""
    rank = len(perms)
    d = perms[0].degree
    if d > max_index:
        raise ResourceExceeded(f"index {d} exceeds bound {max_index}")
    tables = _canonical_tables(tuple(p.images for p in perms), rank, base=base)
    H = SubgroupAutomaton(rank, tables)
    object.__setattr__(H, "generator_words", tuple(H.schreier_generators()))
    return H


class _Folder:
    """Union-find over a graph whose states carry letter -> target dicts."""

    def __init__(self):
        self.parent: list[int] = []
        self.adj: list[dict[int, int] | None] = []

    def new_state(self) -> int:
        self.parent.append(len(self.parent))
        self.adj.append({})
        return len(self.parent) - 1

    def find(self, q: int) -> int:
        root = q
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[q] != root:
            self.parent[q], q = root, self.parent[q]
        return root

    def union(self, a: int, b: int) -> None:
        pending = [(a, b)]
        while pending:
            a, b = pending.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if len(self.adj[a]) < len(self.adj[b]):
                a, b = b, a
            self.parent[b] = a
            keep = self.adj[a]
            for x, t in self.adj[b].items():
                if x in keep:
                    pending.append((keep[x], t))
                else:
                    keep[x] = t
            self.adj[b] = None

    def add_edge(self, u: int, x: int, v: int) -> None:
        u, v = self.find(u), self.find(v)
        if x in self.adj[u]:
            self.union(self.adj[u][x], v)
        elif -x in self.adj[v]:
            self.union(self.adj[v][-x], u)
        else:
            self.adj[u][x] = v
            self.adj[v][-x] = u


def build_subgroup(gens: Iterable[Word], rank: int,
                   max_index: int = MAX_INDEX) -> SubgroupAutomaton:
    """Stallings folding of the wedge of generator loops.

    Raises InfiniteIndex when the folded graph is not complete.
    """
    gens = tuple(gens)
    for w in gens:
        if w.rank != rank:
            raise RankMismatch(f"generator {w} has rank {w.rank}, expected {rank}")
    f = _Folder()
    base = f.new_state()
    for w in gens:
        if w.is_identity():
            continue
        q = base
        for x in w.letters[:-1]:
            r = f.new_state()
            f.add_edge(q, x, r)
            q = r
        f.add_edge(q, w.letters[-1], base)

    base = f.find(base)
    order = [base]
    label = {base: 0}
    i = 0
    while i < len(order):
        q = order[i]
        for x in letter_order(rank):
            t = f.adj[q].get(x)
            if t is None:
                raise InfiniteIndex(
                    f"subgroup generated by {[str(g) for g in gens]} has infinite index"
                )
            t = f.find(t)
            if t not in label:
                label[t] = len(order)
                order.append(t)
        i += 1
    if len(order) > max_index:
        raise ResourceExceeded(f"index {len(order)} exceeds bound {max_index}")
    tables = tuple(
        tuple(label[f.find(f.adj[q][g])] for q in order) for g in range(1, rank + 1)
    )
    return SubgroupAutomaton(rank, tables, gens)


def product_automaton(automata: Sequence[SubgroupAutomaton], roots: Sequence[int],
                      max_index: int = MAX_INDEX) -> SubgroupAutomaton:
    """Reachable part of the product rooted at ``roots``.

    This is the automaton of the intersection of the subgroups re-rooted at
    ``roots[i]``. With no factors, the result is the whole group.
    """
    if not automata:
        raise ValueError("need at least one automaton (pass the rank via whole_group)")
    rank = automata[0].rank
    start = tuple(roots)
    label = {start: 0}
    order = [start]
    tables: list[list[int]] = [[] for _ in range(rank)]
    i = 0
    while i < len(order):
        t = order[i]
        for g in range(rank):
            nxt = tuple(A.transitions[g][q] for A, q in zip(automata, t))
            if nxt not in label:
                if len(order) >= max_index:
                    raise ResourceExceeded(f"intersection index exceeds bound {max_index}")
                label[nxt] = len(order)
                order.append(nxt)
            tables[g].append(label[nxt])
        i += 1
    return SubgroupAutomaton(rank, tuple(tuple(t) for t in tables))
