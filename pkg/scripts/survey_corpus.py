"""Survey the seeded corpus: verdict frequencies and an orbit-versus-class probe.

The probe asks, for small partitions P, whether every partition using the same
subgroups in the same places is a translate P.w. It counts the coset sets that
form partitions with P's subgroups and compares that with the F_n-orbit of P.

    python scripts/survey_corpus.py --count 500 --cap 20000
"""
from __future__ import annotations

import argparse
import itertools
import math
from collections import Counter

from cosetspace.analyzer import READINGS, admissible_r, check_theorem1, check_theorem2, compute_kp_sharp
from cosetspace.generate import standard_corpus
from cosetspace.partition import CosetPartition, orbit, _TupleSpace


def equivalence_class(P: CosetPartition):
    """All coset sets with P's subgroup tuple that are partitions, as canonical keys."""
    space = _TupleSpace(list(P.subgroups))
    root = space.encode([0] * P.s)
    reach = [space.decode(t) for t in space.bfs(root, math.prod(P.indices))[0]]
    keys = [H.canonical_form() for H in P.subgroups]
    found = set()
    for marks in itertools.product(*(range(pair.index) for pair in P.pairs)):
        if all(sum(q == v for q, v in zip(t, marks)) == 1 for t in reach):
            found.add(tuple(sorted(zip(keys, marks))))
    return found


def orbit_keys(P: CosetPartition):
    keys = [H.canonical_form() for H in P.subgroups]
    space, parents = orbit(P)
    return {tuple(sorted(zip(keys, space.decode(t)))) for t in parents}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--cap", type=int, default=20_000)
    ap.add_argument("--max-product", type=int, default=50_000,
                    help="skip the probe when the product of indices exceeds this")
    args = ap.parse_args(argv)

    corpus = standard_corpus(args.count)
    cache = {}
    t1 = Counter()
    t2 = {reading: Counter() for reading in READINGS}
    exact = 0
    for P in corpus:
        t1[check_theorem1(P, args.cap, cache).status.value] += 1
        kps = compute_kp_sharp(P, args.cap, cache)
        exact += kps.k_exact
        if P.s < 3:
            continue
        for reading in READINGS:
            for r in admissible_r(P):
                for name, v in check_theorem2(P, kps, r, reading).items():
                    t2[reading][(name, v.status.value)] += 1

    print(f"corpus: {len(corpus)} partitions, parts {min(P.s for P in corpus)}..{max(P.s for P in corpus)}")
    print("theorem 1 (d_s-cycle at the top place):",
          ", ".join(f"{k} {v} ({v / len(corpus):.1%})" for k, v in sorted(t1.items())))
    print(f"k exact: {exact}/{len(corpus)}")
    for reading, tally in t2.items():
        print(f"theorem 2, reading {reading}, over all admissible r:")
        for name in ("i", "ii", "iii", "iv"):
            row = {st: tally[(name, st)] for st in ("holds", "fails", "unknown", "n/a")}
            print(f"  ({name}) " + " ".join(f"{k}={v}" for k, v in row.items()))

    probed = larger = 0
    for idx, P in enumerate(corpus):
        if math.prod(P.indices) > args.max_product:
            continue
        probed += 1
        cls, orb = equivalence_class(P), orbit_keys(P)
        assert orb <= cls, idx
        if cls != orb:
            larger += 1
            print(f"  member {idx}: indices {P.indices}, class {len(cls)} > orbit {len(orb)}")
    print(f"class-versus-orbit probe: {probed} members checked, "
          f"{larger} with coset sets outside the orbit")


if __name__ == "__main__":
    main()
