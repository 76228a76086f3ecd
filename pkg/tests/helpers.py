"""Independent oracles and fixtures shared by the test modules.

Nothing here calls the folding, enumeration or product-BFS code under test;
the oracles act with permutations directly and reduce words by rescanning.
"""
from __future__ import annotations

import itertools
import random
from pathlib import Path

from hypothesis import strategies as st

from cosetspace import (CosetPair, CosetPartition, Permutation, Word, build_subgroup,
                         from_permutations, parse)

DATA = Path(__file__).resolve().parent.parent / "data"


def naive_reduce(letters):
    """Cancel adjacent inverse pairs by repeated rescanning until none is left."""
    out = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            if out[i] == -out[i + 1]:
                del out[i:i + 2]
                changed = True
                break
    return tuple(out)


def reduced_words(rank: int, maxlen: int):
    """Every reduced word of length at most maxlen, shortest first."""
    letters = [x for i in range(1, rank + 1) for x in (i, -i)]
    yield Word(rank, ())
    level = [()]
    for _ in range(maxlen):
        level = [w + (x,) for w in level for x in letters if not w or w[-1] != -x]
        for w in level:
            yield Word(rank, w)


def random_word(rng: random.Random, rank: int, maxlen: int) -> Word:
    n = rng.randint(0, maxlen)
    return Word(rank, tuple(rng.choice([1, -1]) * rng.randint(1, rank) for _ in range(n)))


def act_point(perms, q: int, letters) -> int:
    """Image of the point q under the word, read left to right, via the permutations."""
    inv = [p.inverse() for p in perms]
    for x in letters:
        q = perms[x - 1](q) if x > 0 else inv[-x - 1](q)
    return q


def transitive(perms) -> bool:
    d = perms[0].degree
    seen, stack = {0}, [0]
    while stack:
        q = stack.pop()
        for p in list(perms) + [p.inverse() for p in perms]:
            if p(q) not in seen:
                seen.add(p(q))
                stack.append(p(q))
    return len(seen) == d


def random_transitive(rng: random.Random, rank: int, d: int):
    while True:
        perms = [Permutation(tuple(rng.sample(range(d), d))) for _ in range(rank)]
        if transitive(perms):
            return perms


def oracle_stabilizer_gens(perms) -> list[Word]:
    """Generators of the stabilizer of 0: t_q x (t_{q.x})^-1 over a DFS transversal."""
    rank, d = len(perms), perms[0].degree
    letters = [x for i in range(1, rank + 1) for x in (i, -i)]
    tree = {0: ()}
    stack = [0]
    while stack:
        q = stack.pop()
        for x in letters:
            r = act_point(perms, q, (x,))
            if r not in tree:
                tree[r] = tree[q] + (x,)
                stack.append(r)
    assert len(tree) == d
    gens = []
    for q in range(d):
        for i in range(1, rank + 1):
            r = act_point(perms, q, (i,))
            inv_r = tuple(-x for x in reversed(tree[r]))
            g = naive_reduce(tree[q] + (i,) + inv_r)
            if g:
                gens.append(Word(rank, g))
    return gens


def subgroup(gens: str, rank: int = 2):
    return build_subgroup([parse(g, rank) for g in gens.split()], rank)


def partition(parts: list[tuple[str, str]], rank: int = 2) -> CosetPartition:
    """A partition from (generators, representative) strings."""
    return CosetPartition(rank, tuple(CosetPair(subgroup(g, rank), parse(a, rank)) for g, a in parts))


def ker_b(m: int) -> str:
    """Generators of the kernel of the b-exponent mod m in F_2."""
    return " ".join(["a", "b" * m] + ["b" * i + "a" + "B" * i for i in range(1, m)])


KER_B2 = ker_b(2)
KER_B3 = ker_b(3)
P2_PARTS = [(KER_B2, "1"), (KER_B2, "b")]
P3_PARTS = [(KER_B3, "1"), (KER_B3, "b"), (KER_B3, "bb")]


def p2() -> CosetPartition:
    return partition(P2_PARTS)


def p3() -> CosetPartition:
    return partition(P3_PARTS)


def words_st(rank: int = 2, max_size: int = 12):
    letters = st.sampled_from([x for i in range(1, rank + 1) for x in (i, -i)])
    return st.lists(letters, max_size=max_size).map(lambda xs: Word(rank, tuple(xs)))


def brute_cover_counts(P: CosetPartition, maxlen: int):
    """Map each reduced word up to maxlen to the number of parts containing it (direct action)."""
    perms = [pair.subgroup.generator_permutations() for pair in P.pairs]
    marks = P.marked_vertices
    out = {}
    for w in reduced_words(P.rank, maxlen):
        out[w] = sum(1 for ps, v in zip(perms, marks) if act_point(ps, 0, w.letters) == v)
    return out


def all_index2(rank: int = 2):
    """Every index-2 subgroup of F_rank, as kernels of nonzero maps to Z/2."""
    swap = Permutation((1, 0))
    ident = Permutation((0, 1))
    out = []
    for bits in itertools.product((0, 1), repeat=rank):
        if any(bits):
            out.append(from_permutations([swap if b else ident for b in bits]))
    return out


def coset_set(P: CosetPartition):
    """The partition as a set of cosets, independent of representatives."""
    return sorted(zip((H.canonical_form() for H in P.subgroups), P.marked_vertices))
