"""Seeded random coset partitions built by refinement.

Start from all cosets of a random subgroup H. A refinement step picks a part
H alpha, picks a random subgroup K of H (as a point stabilizer in H's own
free basis, rewritten through H's Schreier generators), and replaces H alpha
by the cosets K beta alpha for beta in a transversal of K in H.

This cannot reach every coset partition; it is a test-corpus generator.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .automaton import MAX_INDEX, SubgroupAutomaton, build_subgroup, from_permutations, whole_group
from .errors import ResourceExceeded
from .partition import CosetPair, CosetPartition, verify
from .perm import Permutation
from .words import Word

_MAX_RESAMPLES = 1000


@dataclass(frozen=True)
class GenConfig:
    rank: int = 2
    max_parts: int = 8
    max_index: int = 12
    refinement_depth: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.max_index > MAX_INDEX:
            raise ResourceExceeded(f"max_index {self.max_index} exceeds automaton bound {MAX_INDEX}")
        if self.max_parts < 2 or self.max_index < 2:
            raise ValueError("max_parts and max_index must be at least 2")


def _transitive(perms: list[list[int]], d: int) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        q = stack.pop()
        for p in perms:
            r = p[q]
            if r not in seen:
                seen.add(r)
                stack.append(r)
    return len(seen) == d


def random_subgroup(rank: int, d: int, seed: int) -> SubgroupAutomaton:
    """Stabilizer of 0 under random generator permutations, resampled until transitive."""
    if d < 1:
        raise ValueError("index must be positive")
    if d == 1:
        return whole_group(rank)
    rng = random.Random(seed)
    for _ in range(_MAX_RESAMPLES):
        perms = [rng.sample(range(d), d) for _ in range(rank)]
        if _transitive(perms, d):
            break
    else:
        # Force transitivity with a d-cycle in the first generator.
        order = rng.sample(range(d), d)
        perms[0] = [0] * d
        for a, b in zip(order, order[1:] + order[:1]):
            perms[0][a] = b
    return from_permutations([Permutation(tuple(p)) for p in perms])


def _substitute(word: Word, basis: list[Word], rank: int) -> Word:
    out = Word.identity(rank)
    for x in word.letters:
        y = basis[abs(x) - 1]
        out = out * (y if x > 0 else y.inverse())
    return out


def refine(H: SubgroupAutomaton, e: int, seed: int) -> tuple[SubgroupAutomaton, list[Word]]:
    """A random subgroup K of H with [H:K] = e, and a transversal of K in H."""
    basis = H.schreier_generators()
    inner = random_subgroup(len(basis), e, seed)
    gens = [_substitute(g, basis, H.rank) for g in inner.generator_words]
    K = build_subgroup(gens, H.rank)
    assert K.state_count == H.state_count * e, (K.state_count, H.state_count, e)
    betas = [_substitute(t, basis, H.rank) for t in inner.transversal()]
    return K, betas


def random_partition(cfg: GenConfig) -> CosetPartition:
    rng = random.Random(cfg.seed)
    d0 = rng.randint(2, min(cfg.max_parts, cfg.max_index))
    H = random_subgroup(cfg.rank, d0, rng.getrandbits(64))
    parts = [(H, t) for t in H.transversal()]
    for _ in range(cfg.refinement_depth):
        room = cfg.max_parts - len(parts) + 1
        choices = [i for i, (K, _) in enumerate(parts)
                   if K.state_count * 2 <= cfg.max_index and room >= 2]
        if not choices:
            break
        i = rng.choice(choices)
        K0, alpha = parts[i]
        e = rng.randint(2, min(cfg.max_index // K0.state_count, room))
        K, betas = refine(K0, e, rng.getrandbits(64))
        parts[i:i + 1] = [(K, beta * alpha) for beta in betas]
    P = CosetPartition(cfg.rank, tuple(CosetPair(K, a) for K, a in parts))
    result = verify(P)
    if not result.is_partition:
        raise AssertionError(f"generated a non-partition (seed {cfg.seed}): {result}")
    return P


def corpus_config(i: int) -> GenConfig:
    """Configuration for member i of the standard test corpus.

    Members come in runs of four sharing a seed with depths 0..3; a deeper
    member refines the shallower ones, so the corpus has close neighbours.
    """
    seed = i // 4
    return GenConfig(rank=2 + seed % 2, max_parts=8, max_index=12,
                     refinement_depth=i % 4, seed=seed)


def standard_corpus(count: int = 500) -> list[CosetPartition]:
    return [random_partition(corpus_config(i)) for i in range(count)]
