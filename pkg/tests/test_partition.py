import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cosetspace.automaton import from_permutations, product_automaton, whole_group
from cosetspace.errors import RankMismatch
from cosetspace.generate import GenConfig, random_partition
from cosetspace.partition import (CosetPair, CosetPartition, Theorem3Checker, act, check_theorem3,
                                  distance, equivalent, intersect_conjugates, multiplicity,
                                  orbit_size_full, orbit_size_word, same_orbit, verify)
from cosetspace.permgroup import permutation_of_word
from cosetspace.textformat import load_partition
from cosetspace.words import Word, parse

from helpers import (DATA, KER_B2, KER_B3, brute_cover_counts, p2, p3, partition, random_transitive,
                     random_word, reduced_words, words_st, ker_b, coset_set)

gen_partitions = st.builds(
    lambda seed, depth, rank: random_partition(GenConfig(rank=rank, max_parts=6, max_index=8,
                                                         refinement_depth=depth, seed=seed)),
    st.integers(0, 10**6), st.integers(0, 2), st.integers(2, 3))


def w(text, rank=2):
    return parse(text, rank)


# ---- verify -------------------------------------------------------------

def test_verify_examples():
    assert verify(p2()).is_partition
    assert verify(p3()).is_partition
    dup = partition([(KER_B2, "1"), (KER_B2, "1")])
    res = verify(dup)
    assert not res.is_partition
    assert res.witness.is_identity() and res.witness_cover_count == 2
    mixed = partition([(KER_B2, "1"), (KER_B3, "b")])
    res = verify(mixed)
    assert not res.is_partition and "density" in res.reason
    assert res.witness_cover_count == mixed.cover_count(res.witness) != 1


def test_verify_equal_density_but_overlapping():
    # 1/2 + 1/4 + 1/4 with the index-4 cosets inside the wrong half
    q = partition([(KER_B2, "1"), (ker_b(4), "1"), (ker_b(4), "bb")])
    assert q.density() == 1
    res = verify(q)
    assert not res.is_partition and res.witness_cover_count != 1


def test_cover_count_on_partition():
    P = p3()
    for u in reduced_words(2, 5):
        assert P.cover_count(u) == 1


@settings(max_examples=25, deadline=None)
@given(gen_partitions, st.integers(0, 10**6))
def test_verify_against_brute_force(P, seed):
    rng = random.Random(seed)
    pairs = list(P.pairs)
    if len(pairs) > 2 and rng.random() < 0.5:
        pairs.pop(rng.randrange(len(pairs)))          # a hole
    elif rng.random() < 0.5:
        i = rng.randrange(len(pairs))                  # a shifted coset
        pairs[i] = CosetPair(pairs[i].subgroup, random_word(rng, P.rank, 4))
    Q = CosetPartition(P.rank, tuple(pairs))
    res = verify(Q)
    counts = brute_cover_counts(Q, 5 if Q.rank == 2 else 4)
    if res.is_partition:
        assert set(counts.values()) == {1}
    else:
        assert Q.cover_count(res.witness) == res.witness_cover_count != 1
        if len(res.witness) <= (5 if Q.rank == 2 else 4):
            assert counts[res.witness] == res.witness_cover_count


def test_single_part_rules():
    assert verify(CosetPartition.from_subgroup(whole_group(2))).is_partition
    with pytest.raises(ValueError):
        partition([("a b", "1"), (KER_B2, "1")])
    with pytest.raises(RankMismatch):
        CosetPartition(3, p2().pairs)


# ---- multiplicity ---------------------------------------------------------

def test_multiplicity_examples():
    assert multiplicity(partition([(KER_B2, "1"), (ker_b(4), "b"), (ker_b(4), "bbb")]))
    h6 = ker_b(6)
    assert not multiplicity(partition([(KER_B2, "1"), (KER_B3, "b"), (h6, "bb")]))
    assert not multiplicity(CosetPartition.from_subgroup(whole_group(2)))


# ---- metric ---------------------------------------------------------------

def test_distance_examples():
    assert distance(p2(), p2()) == 0
    assert distance(p2(), p3()) == Fraction(1, 2)
    assert distance(p3(), act(p3(), w("ab"))) == 0


def test_distance_prefix_case():
    h4 = ker_b(4)
    full = partition([(h4, "1"), (h4, "b"), (h4, "bb"), (h4, "bbb")])
    mixed = partition([(h4, "1"), (h4, "bb"), (KER_B2, "b")])
    assert distance(full, mixed) == Fraction(1, 8)
    # not partitions, but the metric is defined on subgroup tuples alone
    short = partition([(h4, "1"), (h4, "b")])
    assert distance(full, short) == Fraction(1, 8)


def test_equivalent_examples():
    assert equivalent(partition(list(reversed([(KER_B2, "1"), (KER_B2, "b")]))), p2())
    assert equivalent(p2(), act(p2(), w("b")))
    assert not equivalent(p2(), p3())


@settings(max_examples=40, deadline=None)
@given(gen_partitions, gen_partitions, gen_partitions)
def test_ultrametric(P, Q, R):
    if not P.rank == Q.rank == R.rank:
        return
    assert distance(P, Q) == distance(Q, P)
    assert distance(P, R) <= max(distance(P, Q), distance(Q, R))
    assert (distance(P, Q) == 0) == (P.subgroups == Q.subgroups)


@settings(max_examples=40, deadline=None)
@given(gen_partitions, gen_partitions)
def test_discrete_values(P, Q):
    if P.rank != Q.rank:
        return
    rho = distance(P, Q)
    assert rho == 0 or (rho.numerator == 1 and rho.denominator & (rho.denominator - 1) == 0)
    assert rho <= Fraction(1, 2)


# ---- action and orbits -----------------------------------------------------

def test_act_examples():
    P = p2()
    assert act(P, Word.identity(2)) == P
    Q = act(P, w("b"))
    assert sorted(Q.marked_vertices) == sorted(P.marked_vertices)
    assert str(Q.pairs[0].representative) in ("b", "bb")


@settings(max_examples=30, deadline=None)
@given(gen_partitions, st.data())
def test_action_axioms(P, data):
    u = data.draw(words_st(P.rank, 6))
    v = data.draw(words_st(P.rank, 6))
    assert act(act(P, u), v) == act(P, u * v)
    assert verify(act(P, u)).is_partition
    assert equivalent(P, act(P, u))


def test_orbit_examples():
    assert orbit_size_word(p2(), w("b")) == 2
    assert orbit_size_word(p3(), w("b")) == 3
    assert orbit_size_word(p3(), Word.identity(2)) == 1
    assert orbit_size_word(p3(), w("a")) == 1
    assert orbit_size_full(p2()) == 2
    assert orbit_size_full(p3()) == 3
    assert orbit_size_full(CosetPartition.from_subgroup(whole_group(2))) == 1


def _fixes_every_coset(P, u):
    return all(pair.subgroup.state_of(pair.representative * u) == pair.marked_vertex
               for pair in P.pairs)


@settings(max_examples=30, deadline=None)
@given(gen_partitions, st.data())
def test_orbit_lemma_by_iteration(P, data):
    u = data.draw(words_st(P.rank, 5))
    m = next(m for m in range(1, 10**4) if _fixes_every_coset(P, u ** m))
    assert orbit_size_word(P, u) == m


@settings(max_examples=30, deadline=None)
@given(gen_partitions)
def test_orbit_bound(P):
    size = orbit_size_full(P)
    assert size <= math.prod(P.indices)
    assert size == intersect_conjugates(P).index
    assert size % P.indices[0] == 0


def test_same_orbit():
    P = p3()
    u = same_orbit(P, act(P, w("bab")))
    assert u is not None and coset_set(act(P, u)) == coset_set(act(P, w("bab")))
    assert same_orbit(p2(), p3()) is None


# ---- intersections of conjugates --------------------------------------------

def test_intersect_examples():
    assert intersect_conjugates(p2()) == p2().subgroups[0]
    assert intersect_conjugates(p3()) == p3().subgroups[0]
    H = from_permutations([random_transitive(random.Random(5), 2, 4)][0])
    P = CosetPartition(2, (CosetPair(H, w("ab")),))
    assert intersect_conjugates(P) == H.conjugate_basepoint(w("ab"))
    assert intersect_conjugates(p3(), omit={1, 2, 3}) == whole_group(2)


@settings(max_examples=25, deadline=None)
@given(gen_partitions, st.data())
def test_intersect_matches_membership(P, data):
    omit = data.draw(st.sets(st.integers(1, P.s)))
    K = intersect_conjugates(P, omit)
    keep = [pair for i, pair in enumerate(P.pairs, start=1) if i not in omit]
    if keep:
        ref = product_automaton([p.subgroup.conjugate_basepoint(p.representative) for p in keep],
                                [0] * len(keep))
        assert K == ref
    for u in reduced_words(P.rank, 3):
        inside = all(p.subgroup.state_of(p.representative * u) == p.marked_vertex for p in keep)
        assert K.contains(u) == inside


# ---- strict inclusions -------------------------------------------------------

def test_theorem3_examples():
    v = check_theorem3(p2(), 1, 2)
    assert v.condition and v.subgroups_equal and not v.contradiction
    assert str(v.separating_word) == "b"
    assert v.orders == (2, 2) and v.square_in_intersection
    assert v.full_index == 2 and v.partial_index == 1
    for j, k in ((1, 2), (1, 3), (2, 3)):
        assert check_theorem3(p3(), j, k).label == "ConditionFails"


@settings(max_examples=25, deadline=None)
@given(gen_partitions)
def test_theorem3_against_intersections(P):
    checker = Theorem3Checker(P)
    assert checker.full_index == intersect_conjugates(P).index
    for j in range(1, P.s + 1):
        for k in range(j + 1, P.s + 1):
            v = checker.check(j, k)
            assert v.partial_index == intersect_conjugates(P, {j, k}).index
            assert v.condition == (v.partial_index < v.full_index)
            assert not v.contradiction
            if v.condition:
                u = v.separating_word
                others = [p for i, p in enumerate(P.pairs, start=1) if i not in (j, k)]
                assert all(p.subgroup.state_of(p.representative * u) == p.marked_vertex
                           for p in others)
                assert not _fixes_every_coset(P, u)
                pj = P.pairs[j - 1]
                assert permutation_of_word(pj.subgroup, u).cycle_length_at(pj.marked_vertex) == 2


def test_equivalence_class_larger_than_orbit():
    # Same subgroups in the same places, yet no word carries one onto the other.
    P = load_partition(DATA / "orbit_gap_p.part")
    Q = load_partition(DATA / "orbit_gap_q.part")
    assert verify(P).is_partition and verify(Q).is_partition
    assert set(brute_cover_counts(Q, 6).values()) == {1}
    assert equivalent(P, Q) and coset_set(P) != coset_set(Q)
    assert same_orbit(P, Q) is None
    assert orbit_size_full(P) == 24  # as labelled tuples; 3 distinct coset sets
    assert all(coset_set(act(P, u)) != coset_set(Q) for u in reduced_words(2, 6))
