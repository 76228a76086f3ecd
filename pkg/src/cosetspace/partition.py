"""Coset partitions of F_n as points of the space of partitions.

A partition is a list of right cosets H_i alpha_i. Parts are kept in the
canonical order (index descending, then subgroup canonical form, then the
representative's surface string), so place 1 holds a largest-index
subgroup. The distance between two partitions is 2^-m where m is the first
place whose subgroups differ; representatives never enter the distance.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm, prod
from typing import Iterable, Sequence

from .automaton import MAX_INDEX, SubgroupAutomaton, product_automaton, whole_group
from .errors import RankMismatch, ResourceExceeded
from .permgroup import DEFAULT_CAP, cycle_length_at, mover, permutation_of_word
from .words import Word, letter_order


@dataclass(frozen=True)
class CosetPair:
    subgroup: SubgroupAutomaton
    representative: Word

    def __post_init__(self):
        if self.representative.rank != self.subgroup.rank:
            raise RankMismatch("representative and subgroup have different ranks")

    @cached_property
    def marked_vertex(self) -> int:
        return self.subgroup.state_of(self.representative)

    @property
    def index(self) -> int:
        return self.subgroup.state_count

    def sort_key(self):
        return (-self.index, self.subgroup.canonical_form(), str(self.representative))

    def __contains__(self, w: Word) -> bool:
        return self.subgroup.state_of(w) == self.marked_vertex


@dataclass(frozen=True)
class CosetPartition:
    rank: int
    pairs: tuple[CosetPair, ...]

    def __post_init__(self):
        pairs = tuple(self.pairs)
        if not pairs:
            raise ValueError("a partition needs at least one part")
        for pair in pairs:
            if pair.subgroup.rank != self.rank:
                raise RankMismatch(f"part of rank {pair.subgroup.rank} in rank-{self.rank} partition")
        if len(pairs) > 1 and any(pair.index == 1 for pair in pairs):
            raise ValueError("an index-1 part is only allowed in the one-part partition")
        object.__setattr__(self, "pairs", tuple(sorted(pairs, key=CosetPair.sort_key)))

    @classmethod
    def from_subgroup(cls, H: SubgroupAutomaton) -> CosetPartition:
        """The partition of F_n into all cosets of H."""
        return cls(H.rank, tuple(CosetPair(H, t) for t in H.transversal()))

    @property
    def s(self) -> int:
        return len(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def indices(self) -> tuple[int, ...]:
        """Indices in ascending order d_1 <= ... <= d_s."""
        return tuple(sorted(pair.index for pair in self.pairs))

    @property
    def subgroups(self) -> tuple[SubgroupAutomaton, ...]:
        """The canonical tuple (H_s, ..., H_1)."""
        return tuple(pair.subgroup for pair in self.pairs)

    @property
    def marked_vertices(self) -> tuple[int, ...]:
        return tuple(pair.marked_vertex for pair in self.pairs)

    def density(self) -> Fraction:
        return sum((Fraction(1, pair.index) for pair in self.pairs), Fraction(0))

    def cover_count(self, w: Word) -> int:
        return sum(1 for pair in self.pairs if w in pair)


def _coordinates(P: CosetPartition):
    """Distinct subgroups of P and, per part, the coordinate of its subgroup."""
    distinct: list[SubgroupAutomaton] = []
    where: dict[SubgroupAutomaton, int] = {}
    for H in P.subgroups:
        if H not in where:
            where[H] = len(distinct)
            distinct.append(H)
    return distinct, [where[H] for H in P.subgroups]


class _TupleSpace:
    """Tuples of states, one per automaton, numbered globally over the disjoint union.

    A tuple is stored raw (bytes when the union has at most 256 states), so one
    ``translate`` moves every coordinate at once.
    """

    def __init__(self, automata: Sequence[SubgroupAutomaton]):
        self.rank = automata[0].rank
        self.offsets = []
        off = 0
        for A in automata:
            self.offsets.append(off)
            off += A.state_count
        self.movers = []
        for x in letter_order(self.rank):
            table = []
            for A, o in zip(automata, self.offsets):
                table.extend(o + A.step(q, x) for q in range(A.state_count))
            self.movers.append((x, mover(table)))
        self._size = off

    def encode(self, local: Sequence[int]):
        glob = [o + q for o, q in zip(self.offsets, local)]
        return bytes(glob) if self._size <= 256 else tuple(glob)

    def decode(self, raw) -> tuple[int, ...]:
        return tuple(g - o for g, o in zip(raw, self.offsets))

    def bfs(self, start, limit: int, stop=None):
        """BFS from raw ``start``; parents give shortest words. Returns (parents, hit)."""
        parents = {start: None}
        if stop is not None and stop(start):
            return parents, start
        queue = deque([start])
        while queue:
            t = queue.popleft()
            for x, move in self.movers:
                nxt = move(t)
                if nxt in parents:
                    continue
                if len(parents) >= limit:
                    raise ResourceExceeded(f"product BFS exceeded {limit} states")
                parents[nxt] = (t, x)
                queue.append(nxt)
                if stop is not None and stop(nxt):
                    return parents, nxt
        return parents, None


def _path(parents, t, rank: int) -> Word:
    out = []
    while parents[t] is not None:
        t, x = parents[t]
        out.append(x)
    return Word(rank, tuple(reversed(out)))


@dataclass(frozen=True)
class VerificationResult:
    is_partition: bool
    witness: Word | None = None
    witness_cover_count: int | None = None
    reachable_product_states: int = 0
    reason: str = ""


def verify(P: CosetPartition) -> VerificationResult:
    """Decide exact cover by BFS over the product of the parts' automata.

    Coset i contains w iff the i-th coordinate of the tuple reached by w is
    the marked vertex. The density check decides first; the BFS then still
    runs until it finds a concrete violating word.
    """
    distinct, coord = _coordinates(P)
    space = _TupleSpace(distinct)
    marks = [space.offsets[c] + v for c, v in zip(coord, P.marked_vertices)]

    def coverage(t):
        return sum(1 for c, v in zip(coord, marks) if t[c] == v)

    density = P.density()
    limit = prod(A.state_count for A in distinct)
    parents, bad = space.bfs(space.encode([0] * len(distinct)), limit,
                             stop=lambda t: coverage(t) != 1)
    if bad is None:
        if density != 1:
            raise AssertionError(f"density {density} but every reachable tuple is covered once")
        return VerificationResult(True, reachable_product_states=len(parents))
    reason = f"density {density} != 1" if density != 1 else "not an exact cover"
    return VerificationResult(False, _path(parents, bad, P.rank), coverage(bad),
                              len(parents), reason)


def multiplicity(P: CosetPartition) -> bool:
    ind = P.indices
    return any(a == b for a, b in zip(ind, ind[1:]))


def distance(P: CosetPartition, Q: CosetPartition) -> Fraction:
    """0 if the canonical subgroup tuples agree, else 2^-m for the first differing place m."""
    if P.rank != Q.rank:
        raise RankMismatch("partitions of different ranks")
    for m, (H, K) in enumerate(zip(P.subgroups, Q.subgroups), start=1):
        if H != K:
            return Fraction(1, 2**m)
    if P.s == Q.s:
        return Fraction(0)
    return Fraction(1, 2 ** (min(P.s, Q.s) + 1))


def equivalent(P: CosetPartition, Q: CosetPartition) -> bool:
    return distance(P, Q) == 0


def act(P: CosetPartition, w: Word) -> CosetPartition:
    """Right action: every representative alpha_i becomes alpha_i w."""
    if w.rank != P.rank:
        raise RankMismatch("word and partition have different ranks")
    return CosetPartition(
        P.rank, tuple(CosetPair(pair.subgroup, pair.representative * w) for pair in P.pairs)
    )


def orbit_size_word(P: CosetPartition, w: Word) -> int:
    """Size of the <w>-orbit of P: lcm of the cycle lengths of w at the marked vertices."""
    return lcm(*(
        cycle_length_at(permutation_of_word(pair.subgroup, w), pair.marked_vertex)
        for pair in P.pairs
    ))


def orbit(P: CosetPartition, limit: int | None = None):
    """BFS over marked-vertex tuples reachable from (v_1, ..., v_s) under F_n.

    Returns (space, parents); the keys of ``parents`` are the orbit, stored raw.
    """
    # Parts sharing a subgroup keep separate coordinates here: their marks differ.
    automata = list(P.subgroups)
    space = _TupleSpace(automata)
    if limit is None:
        limit = prod(A.state_count for A in automata)
    parents, _ = space.bfs(space.encode(P.marked_vertices), limit)
    return space, parents


def orbit_size_full(P: CosetPartition, limit: int | None = None) -> int:
    return len(orbit(P, limit)[1])


def same_orbit(P: CosetPartition, Q: CosetPartition, limit: int | None = None) -> Word | None:
    """A word w with P.w = Q as sets of cosets, or None if there is none."""
    if not equivalent(P, Q):
        return None
    target = sorted(zip((H.canonical_form() for H in Q.subgroups), Q.marked_vertices))
    keys = [H.canonical_form() for H in P.subgroups]
    space, parents = orbit(P, limit)
    for t in parents:
        if sorted(zip(keys, space.decode(t))) == target:
            return _path(parents, t, P.rank)
    return None


def intersect_conjugates(P: CosetPartition, omit: Iterable[int] = (),
                         max_index: int = MAX_INDEX) -> SubgroupAutomaton:
    """Automaton of the intersection of alpha_i^-1 H_i alpha_i over places i not in omit.

    Places are 1-based in canonical order. Omitting every place gives F_n.
    """
    omit = set(omit)
    if not omit <= set(range(1, P.s + 1)):
        raise ValueError(f"omit must be a subset of places 1..{P.s}")
    keep = [pair for i, pair in enumerate(P.pairs, start=1) if i not in omit]
    if not keep:
        return whole_group(P.rank)
    return product_automaton([pair.subgroup for pair in keep],
                             [pair.marked_vertex for pair in keep], max_index)


@dataclass(frozen=True)
class Theorem3Verdict:
    j: int
    k: int
    condition: bool
    full_index: int
    partial_index: int
    subgroups_equal: bool | None = None
    separating_word: Word | None = None
    orders: tuple[int, int] | None = None
    square_in_intersection: bool | None = None

    @property
    def contradiction(self) -> bool:
        return self.condition and not (
            self.subgroups_equal and self.orders == (2, 2) and self.square_in_intersection
        )

    @property
    def label(self) -> str:
        if not self.condition:
            return "ConditionFails"
        return "ConditionHolds+CONTRADICTION" if self.contradiction else "ConditionHolds+SubgroupsEqual"


class Theorem3Checker:
    """Theorem-3 checks for every pair of places of one partition, sharing one orbit BFS.

    The index of an intersection of conjugates over a set S of places is the
    size of the orbit of (v_i)_{i in S}, which is the projection of the full
    orbit. The inclusion for (j, k) is strict exactly when some orbit tuple
    other than the start agrees with it outside {j, k}; the BFS-first such
    tuple gives a shortest separating word.
    """

    def __init__(self, P: CosetPartition, cap: int = DEFAULT_CAP):
        self.P = P
        self.space, self.parents = orbit(P, cap)
        start = self.space.encode(P.marked_vertices)
        self._start = start
        self._first_diff: dict[frozenset, object] = {}
        self._diff_counts: dict[frozenset, int] = {}
        for t in self.parents:
            if t == start:
                continue
            diff = [i for i, (a, b) in enumerate(zip(t, start), start=1) if a != b]
            if len(diff) <= 2:
                key = frozenset(diff)
                self._first_diff.setdefault(key, t)
                self._diff_counts[key] = self._diff_counts.get(key, 0) + 1

    @property
    def full_index(self) -> int:
        return len(self.parents)

    def _separator(self, j: int, k: int):
        for key in (frozenset((j, k)), frozenset((j,)), frozenset((k,))):
            if key in self._first_diff:
                return self._first_diff[key]
        return None

    def strict_pairs(self) -> list[tuple[int, int]]:
        return [(j, k) for j in range(1, self.P.s + 1) for k in range(j + 1, self.P.s + 1)
                if self._separator(j, k) is not None]

    def _partial_index(self, j: int, k: int) -> int:
        # All fibres of the projection have the size of the start's fibre.
        fibre = 1 + sum(self._diff_counts.get(frozenset(key), 0)
                        for key in ((j,), (k,), (j, k)))
        full = self.full_index
        if full % fibre:
            raise AssertionError(f"fibre size {fibre} does not divide orbit size {full}")
        return full // fibre

    def check(self, j: int, k: int) -> Theorem3Verdict:
        P = self.P
        if j == k or not (1 <= j <= P.s and 1 <= k <= P.s):
            raise ValueError("need two distinct places within the partition")
        j, k = min(j, k), max(j, k)
        hit = self._separator(j, k)
        if hit is None:
            return Theorem3Verdict(j, k, False, self.full_index, self.full_index)
        w = _path(self.parents, hit, P.rank)
        pj, pk = P.pairs[j - 1], P.pairs[k - 1]
        orders = (
            cycle_length_at(permutation_of_word(pj.subgroup, w), pj.marked_vertex),
            cycle_length_at(permutation_of_word(pk.subgroup, w), pk.marked_vertex),
        )
        w2 = w * w
        return Theorem3Verdict(
            j, k, True, self.full_index, self._partial_index(j, k),
            subgroups_equal=pj.subgroup.canonical_form() == pk.subgroup.canonical_form(),
            separating_word=w,
            orders=orders,
            square_in_intersection=all(pair.subgroup.state_of(pair.representative * w2)
                                       == pair.marked_vertex for pair in P.pairs),
        )


def check_theorem3(P: CosetPartition, j: int, k: int, cap: int = DEFAULT_CAP) -> Theorem3Verdict:
    """If dropping places j, k strictly enlarges the intersection of conjugates, H_j = H_k.

    A separating word w lies in every other conjugate but not in the full
    intersection; then o_j(w) = o_k(w) = 2 and w^2 is in the full intersection.
    """
    return Theorem3Checker(P, cap).check(j, k)
