"""Transition groups: bounded enumeration, cycle analysis and witness search.

Enumeration is a BFS on the Cayley graph over the letters g1, g1^-1, g2, ...
so every element carries a shortest realizing word. Internally elements are
``bytes`` (degree <= 256) composed with ``bytes.translate``, or tuples above
that. Incomplete enumerations are reported as such, never silently cut.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .automaton import SubgroupAutomaton
from .perm import Permutation
from .words import Word, letter_order

DEFAULT_CAP = 1_000_000


class _Unknown:
    """Third truth value for questions an incomplete enumeration cannot settle."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        raise TypeError("Unknown has no truth value")

    def __repr__(self):
        return "Unknown"


Unknown = _Unknown()


def encode(images: Sequence[int]):
    return bytes(images) if len(images) <= 256 else tuple(images)


def mover(gen_images: Sequence[int]) -> Callable:
    """Return f mapping every entry v of a raw sequence to gen_images[v].

    On a raw permutation this is right multiplication by the generator.
    """
    if len(gen_images) <= 256:
        table = bytes(gen_images) + bytes(256 - len(gen_images))
        return lambda raw: raw.translate(table)
    getter = tuple(gen_images).__getitem__
    return lambda raw: tuple(map(getter, raw))


def _cycle_at(raw, v: int) -> int:
    m = 1
    x = raw[v]
    while x != v:
        x = raw[x]
        m += 1
    return m


def _max_cycle(raw) -> int:
    d = len(raw)
    seen = bytearray(d)
    best = 0
    for s in range(d):
        if seen[s]:
            continue
        m = 0
        x = s
        while not seen[x]:
            seen[x] = 1
            x = raw[x]
            m += 1
        if m > best:
            best = m
    return best


def _bfs(letter_images: dict[int, Sequence[int]], degree: int, cap: int,
         visit: Callable | None = None):
    """Closure BFS from the identity. ``visit(raw)`` returning True stops early.

    Returns (parents, complete, stopped) where parents[raw] = (parent_raw, letter).
    """
    movers = {x: mover(img) for x, img in letter_images.items()}
    ident = encode(range(degree))
    parents = {ident: None}
    if visit is not None and visit(ident):
        return parents, False, True
    queue = deque([ident])
    while queue:
        raw = queue.popleft()
        for x, move in movers.items():
            nxt = move(raw)
            if nxt in parents:
                continue
            if len(parents) >= cap:
                return parents, False, False
            parents[nxt] = (raw, x)
            queue.append(nxt)
            if visit is not None and visit(nxt):
                return parents, False, True
    return parents, True, False


def _word_of(parents, raw) -> tuple[int, ...]:
    out = []
    link = parents[raw]
    while link is not None:
        raw, x = link
        out.append(x)
        link = parents[raw]
    return tuple(reversed(out))


@dataclass
class GroupEnumeration:
    """Elements found by BFS closure, each with a shortest word in the generators.

    Words use signed generator indices: ``+i`` is ``gens[i - 1]``, ``-i`` its inverse.
    """

    degree: int
    gens: tuple[Permutation, ...]
    complete: bool
    cap: int
    _parents: dict = field(repr=False)

    def __len__(self) -> int:
        return len(self._parents)

    def __iter__(self) -> Iterator[Permutation]:
        return (Permutation(tuple(raw)) for raw in self._parents)

    def __contains__(self, pi: Permutation) -> bool:
        return encode(pi.images) in self._parents

    @property
    def elements(self) -> frozenset[Permutation]:
        return frozenset(self)

    def raw_elements(self):
        return self._parents.keys()

    def word_for(self, pi: Permutation) -> tuple[int, ...]:
        return _word_of(self._parents, encode(pi.images))

    @property
    def order(self) -> int | None:
        return len(self) if self.complete else None


def enumerate_group(gens: Sequence[Permutation], cap: int = DEFAULT_CAP,
                    stop_at_cycle: int | None = None) -> GroupEnumeration:
    """BFS closure of ``<gens>`` up to ``cap`` elements.

    With ``stop_at_cycle``, the search stops at the first element having a
    cycle of at least that length; the result is then marked incomplete.
    """
    gens = tuple(gens)
    if not gens:
        raise ValueError("need at least one generator")
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators act on different degrees")
    images = {}
    for i, g in enumerate(gens, start=1):
        images[i] = g.images
        images[-i] = g.inverse().images
    visit = None
    if stop_at_cycle is not None:
        visit = lambda raw: _max_cycle(raw) >= stop_at_cycle  # noqa: E731
    parents, complete, _ = _bfs(images, degree, cap, visit)
    return GroupEnumeration(degree, gens, complete, cap, parents)


def transition_group(H: SubgroupAutomaton, cap: int = DEFAULT_CAP,
                     stop_at_cycle: int | None = None) -> GroupEnumeration:
    return enumerate_group(H.generator_permutations(), cap, stop_at_cycle)


def permutation_of_word(H: SubgroupAutomaton, w: Word) -> Permutation:
    """The image of ``w`` in the transition group: q -> state reached reading w from q."""
    H._check(w)
    return Permutation(tuple(H.read(q, w.letters) for q in range(H.state_count)))


def cycle_length_at(pi: Permutation, v: int) -> int:
    return pi.cycle_length_at(v)


def has_full_cycle(e: GroupEnumeration, d: int):
    """True if some enumerated element is a d-cycle; Unknown if incomplete and none found."""
    if e.degree != d:
        return False
    for raw in e.raw_elements():
        if _cycle_at(raw, 0) == d:
            return True
    return False if e.complete else Unknown


def find_full_cycle(e: GroupEnumeration) -> Permutation | None:
    for raw in e.raw_elements():
        if _cycle_at(raw, 0) == e.degree:
            return Permutation(tuple(raw))
    return None


def group_max_cycle(e: GroupEnumeration) -> tuple[int, Permutation]:
    best, arg = 0, None
    for raw in e.raw_elements():
        m = _max_cycle(raw)
        if m > best:
            best, arg = m, raw
    return best, Permutation(tuple(arg))


def max_cycle_length(groups: Sequence[GroupEnumeration]) -> tuple[int, bool]:
    """(largest cycle length over all enumerated elements, all enumerations complete)."""
    k = max(group_max_cycle(e)[0] for e in groups)
    return k, all(e.complete for e in groups)


def cycle_bound(gens: Sequence[Permutation]) -> int:
    """Upper bound on the cycle lengths in <gens> for a transitive group.

    A d-cycle is odd when d is even, so an even-generated group on an even
    number of points has none.
    """
    d = gens[0].degree
    if d % 2 == 0 and d > 1 and all(g.is_even() for g in gens):
        return d - 1
    return d


@dataclass
class _ProductContext:
    rank: int
    layout: list[tuple[int, int, int]]  # (block offset, degree, global marked vertex) per part
    parents: dict


class WitnessTuple:
    """A word u with its images pi_i and the cycle lengths o_i at the marked vertices.

    The word and the permutations are decoded on first access.
    """

    __slots__ = ("orders", "_raw", "_ctx", "_word")

    def __init__(self, orders: tuple[int, ...], raw, ctx: _ProductContext):
        self.orders = orders
        self._raw = raw
        self._ctx = ctx
        self._word = None

    @property
    def word(self) -> Word:
        if self._word is None:
            self._word = Word(self._ctx.rank, _word_of(self._ctx.parents, self._raw))
        return self._word

    @property
    def permutations(self) -> tuple[Permutation, ...]:
        raw = self._raw
        return tuple(
            Permutation(tuple(raw[off + q] - off for q in range(d)))
            for off, d, _ in self._ctx.layout
        )

    @property
    def o_max(self) -> int:
        return max(self.orders)

    @property
    def sharp(self) -> int:
        return sum(1 for o in self.orders if o == self.o_max)

    def __repr__(self) -> str:
        return f"WitnessTuple(word={self.word}, orders={self.orders})"


@dataclass
class WitnessSearch:
    k: int
    witnesses: list[WitnessTuple]
    exhaustive: bool
    max_o: int
    max_o_word: Word
    elements: int

    @property
    def sharp_values(self) -> frozenset[int]:
        return frozenset(w.sharp for w in self.witnesses)


def search_witnesses(context: Sequence[tuple[SubgroupAutomaton, int]], k: int,
                     cap: int = DEFAULT_CAP) -> WitnessSearch:
    """BFS over the image of F_n in the product of the transition groups.

    ``context`` lists (automaton, marked vertex) per part. Parts sharing a
    subgroup share a coordinate, since their permutations always coincide.
    Records every element u with o_max(u) == k, in BFS order.
    """
    if not context:
        raise ValueError("empty context")
    rank = context[0][0].rank
    blocks: dict[SubgroupAutomaton, int] = {}
    offset = 0
    for H, _ in context:
        if H not in blocks:
            blocks[H] = offset
            offset += H.state_count
    layout = [(blocks[H], H.state_count, blocks[H] + v) for H, v in context]
    marks = [v for _, _, v in layout]
    images = {}
    for x in letter_order(rank):
        img = []
        for H, off in blocks.items():
            img.extend(off + H.step(q, x) for q in range(H.state_count))
        images[x] = img

    hits = []
    best = [0, None]

    def visit(raw):
        orders = tuple([_cycle_at(raw, v) for v in marks])
        m = max(orders)
        if m > best[0]:
            best[0], best[1] = m, raw
        if m == k:
            hits.append((orders, raw))
        return False

    parents, complete, _ = _bfs(images, offset, cap, visit)
    ctx = _ProductContext(rank, layout, parents)
    witnesses = [WitnessTuple(orders, raw, ctx) for orders, raw in hits]
    return WitnessSearch(k, witnesses, complete, best[0],
                         Word(rank, _word_of(parents, best[1])), len(parents))
