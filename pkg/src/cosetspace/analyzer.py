"""Herzog-Schoenheim sufficient conditions on a verified coset partition.

Every verdict is one of holds / fails / unknown / n/a. A "holds" verdict
carries a word that re-certifies it without enumeration; "fails" is only
reported when the evidence is conclusive (complete enumeration, or a cycle
bound that rules the witness out). Caps turn everything else into unknown.

Conventions: indices are ascending, d_1 <= ... <= d_s; k is the largest
cycle length in any transition group of the partition; p is the least
prime dividing k; #(u) counts the parts whose marked vertex lies on a
k-cycle of u.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .automaton import SubgroupAutomaton
from .errors import InvalidR, TheoremViolation
from .partition import CosetPartition, distance, multiplicity, verify
from .permgroup import (
    DEFAULT_CAP,
    GroupEnumeration,
    cycle_bound,
    group_max_cycle,
    has_full_cycle,
    permutation_of_word,
    search_witnesses,
    transition_group,
)
from .words import Word

READINGS = ("iv-a", "iv-b")
DEFAULT_READING = "iv-a"
DEFAULT_R = 2


class Status(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"
    NA = "n/a"


@dataclass(frozen=True)
class Verdict:
    status: Status
    place: int | None = None
    certificate: Word | None = None
    sharp_certificate: Word | None = None
    detail: str = ""
    consequence: bool | None = None

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS


def least_prime_factor(n: int) -> int | None:
    if n < 2:
        return None
    f = 2
    while f * f <= n:
        if n % f == 0:
            return f
        f += 1
    return n


@dataclass
class GroupScan:
    """Enumeration of one transition group, stopped early once its cycle bound is met."""

    subgroup: SubgroupAutomaton
    enumeration: GroupEnumeration
    bound: int
    max_cycle: int
    max_cycle_word: Word

    @property
    def settled(self) -> bool:
        return self.enumeration.complete or self.max_cycle >= self.bound


def scan_group(H: SubgroupAutomaton, cap: int = DEFAULT_CAP, cache: dict | None = None) -> GroupScan:
    if cache is not None and (H, cap) in cache:
        return cache[H, cap]
    gens = H.generator_permutations()
    bound = cycle_bound(gens)
    e = transition_group(H, cap, stop_at_cycle=bound)
    m, arg = group_max_cycle(e)
    word = Word(H.rank, e.word_for(arg))
    scan = GroupScan(H, e, bound, m, word)
    if cache is not None:
        cache[H, cap] = scan
    return scan


def _count(P: CosetPartition, d: int) -> int:
    return sum(1 for x in P.indices if x == d)


def check_theorem1(P: CosetPartition, cap: int = DEFAULT_CAP, cache: dict | None = None) -> Verdict:
    """Is there a d_s-cycle in the transition group of the top subgroup (place 1)?

    When there is, the index d_s must occur at least p(d_s) times.
    """
    top = P.pairs[0].subgroup
    d = top.state_count
    if d < 2:
        return Verdict(Status.NA, detail="no part of index > 1")
    scan = scan_group(top, cap, cache)
    if scan.max_cycle == d:
        assert has_full_cycle(scan.enumeration, d) is True
        p = least_prime_factor(d)
        count = _count(P, d)
        return Verdict(Status.HOLDS, 1, scan.max_cycle_word,
                       detail=f"d_s={d} count={count} p={p}", consequence=count >= p)
    if scan.bound < d:
        return Verdict(Status.FAILS, detail="even generators on an even number of points")
    if scan.enumeration.complete:
        return Verdict(Status.FAILS, detail=f"complete enumeration of order {len(scan.enumeration)}")
    return Verdict(Status.UNKNOWN, detail=f"no {d}-cycle among {len(scan.enumeration)} elements")


@dataclass
class KPSharp:
    k: int
    k_exact: bool
    p: int | None
    sharp_values: frozenset[int]
    exhaustive: bool
    k_route1: int
    k_route1_exact: bool
    k_route2: int
    k_route2_exact: bool
    k_place: int
    k_word: Word
    sharp_words: dict[int, Word] = field(default_factory=dict)

    @property
    def routes_agree(self) -> bool | None:
        if self.k_route1_exact and self.k_route2_exact:
            return self.k_route1 == self.k_route2
        return None


def compute_kp_sharp(P: CosetPartition, cap: int = DEFAULT_CAP, cache: dict | None = None,
                     witness_cap: int | None = None) -> KPSharp:
    """k by two routes: the union of transition groups, and the product group at the marks.

    Route 1 is exact when each group is complete, reached its cycle bound, or
    has a bound no larger than the k found. Route 2 is exact when the product
    group was exhausted.
    """
    witness_cap = cap if witness_cap is None else witness_cap
    key = ("kps", P, cap, witness_cap)
    if cache is not None and key in cache:
        return cache[key]
    scans = {}
    for H in P.subgroups:
        if H not in scans:
            scans[H] = scan_group(H, cap, cache)
    top = max(scans.values(), key=lambda sc: sc.max_cycle)
    k1 = top.max_cycle
    context = [(pair.subgroup, pair.marked_vertex) for pair in P.pairs]
    search = search_witnesses(context, k1, witness_cap)
    k = max(k1, search.max_o)
    if k > k1:
        search = search_witnesses(context, k, witness_cap)
    exact1 = all(sc.settled or sc.bound <= k1 for sc in scans.values())
    if exact1 and search.exhaustive and k1 != search.max_o:
        raise TheoremViolation(f"k routes disagree: union {k1}, product {search.max_o}")
    k_exact = exact1 or search.exhaustive or all(sc.settled or sc.bound <= k for sc in scans.values())

    if k > k1:
        place = next(i for i, (H, v) in enumerate(context, start=1)
                     if permutation_of_word(H, search.max_o_word).cycle_length_at(v) == k)
        k_word = search.max_o_word
    else:
        place = P.subgroups.index(top.subgroup) + 1
        k_word = top.max_cycle_word

    sharp_words: dict[int, Word] = {}
    for wt in search.witnesses:
        if wt.sharp not in sharp_words:
            sharp_words[wt.sharp] = wt.word
    kps = KPSharp(
        k=k, k_exact=k_exact, p=least_prime_factor(k),
        sharp_values=frozenset(sharp_words), exhaustive=k_exact and search.exhaustive,
        k_route1=k1, k_route1_exact=exact1, k_route2=search.max_o,
        k_route2_exact=search.exhaustive, k_place=place, k_word=k_word,
        sharp_words=dict(sorted(sharp_words.items())),
    )
    if cache is not None:
        cache[key] = kps
    return kps


def _and(*xs):
    if any(x is False for x in xs):
        return False
    if any(x is None for x in xs):
        return None
    return True


def _or(*xs):
    if any(x is True for x in xs):
        return True
    if any(x is None for x in xs):
        return None
    return False


class _Clauses:
    """Three-valued atoms of the Theorem-2 conditions (None = undecided)."""

    def __init__(self, kps: KPSharp):
        self.kps = kps
        self.used_sharp: Word | None = None

    def k_gt(self, d: int):
        if self.kps.k > d:
            return True
        return False if self.kps.k_exact else None

    def p_is(self, pred):
        if not self.kps.k_exact:
            return None
        return self.kps.p is not None and pred(self.kps.p)

    def sharp(self, pred):
        kps = self.kps
        if kps.k_exact:
            for v, w in kps.sharp_words.items():
                if pred(v):
                    self.used_sharp = w
                    return True
        return False if kps.exhaustive else None


CONDITIONS = ("i", "ii", "iii", "iv")


def check_theorem2(P: CosetPartition, kps: KPSharp, r: int = DEFAULT_R,
                   reading: str = DEFAULT_READING) -> dict[str, Verdict]:
    """Evaluate conditions (i)-(iv); any that holds must come with multiplicity.

    Reading iv-a: k > d_{s-r} and (p >= r or #=p or # >= r+1).
    Reading iv-b: (k > d_{s-r} and p >= r) or #=p or # >= r+1.
    #-clauses are existential over the witnesses found.
    """
    s = P.s
    if not 2 <= r <= s - 1:
        raise InvalidR(f"r must satisfy 2 <= r <= s-1 = {s - 1}, got {r}")
    if reading not in READINGS:
        raise ValueError(f"reading must be one of {READINGS}")
    d = P.indices

    def D(j):
        return d[j - 1]

    mult = multiplicity(P)
    out = {}
    for name in CONDITIONS:
        c = _Clauses(kps)
        if name == "i":
            val, detail = c.k_gt(D(s - 2)), f"k={kps.k} d_(s-2)={D(s - 2)}"
        elif name in ("ii", "iii") and s < 4:
            out[name] = Verdict(Status.NA, detail="needs s >= 4")
            continue
        elif name == "ii":
            val = _and(c.k_gt(D(s - 3)), c.p_is(lambda p: p >= 3))
            detail = f"k={kps.k} d_(s-3)={D(s - 3)} p={kps.p}"
        elif name == "iii":
            val = _and(c.k_gt(D(s - 3)), c.p_is(lambda p: p == 2),
                       _or(c.sharp(lambda v: v == 2), c.sharp(lambda v: v >= 4)))
            detail = f"k={kps.k} d_(s-3)={D(s - 3)} p={kps.p} #={sorted(kps.sharp_values)}"
        else:
            kd = c.k_gt(D(s - r))
            p_r = c.p_is(lambda p: p >= r)
            eq_p = c.sharp(lambda v: kps.p is not None and v == kps.p)
            ge_r = c.sharp(lambda v: v >= r + 1)
            if reading == "iv-a":
                val = _and(kd, _or(p_r, eq_p, ge_r))
            else:
                val = _or(_and(kd, p_r), eq_p, ge_r)
            detail = (f"reading={reading} r={r} k={kps.k} d_(s-r)={D(s - r)} "
                      f"p={kps.p} #={sorted(kps.sharp_values)}")
        if val is True:
            out[name] = Verdict(Status.HOLDS, kps.k_place, kps.k_word, c.used_sharp,
                                detail, consequence=mult)
        elif val is False:
            out[name] = Verdict(Status.FAILS, detail=detail)
        else:
            out[name] = Verdict(Status.UNKNOWN, detail=detail)
    return out


def effective_r(condition: str, r: int) -> int:
    """Number of places after the first that a condition reads: d_{s-2} -> 2, d_{s-3} -> 3."""
    return {"i": 2, "ii": 3, "iii": 3}.get(condition, r)


def neighborhood_radius(condition: str, r: int = DEFAULT_R) -> Fraction:
    if condition == "theorem1":
        return Fraction(1, 2)
    return Fraction(1, 2 ** (effective_r(condition, r) + 1))


def admissible_r(P: CosetPartition) -> range:
    return range(2, P.s)


@dataclass
class AnalysisReport:
    partition: CosetPartition
    is_partition: bool
    theorem1: Verdict | None = None
    kps: KPSharp | None = None
    theorem2: dict[str, Verdict] | None = None
    r: int | None = None
    reading: str = DEFAULT_READING
    neighborhood_radii: list[tuple[str, Fraction]] = field(default_factory=list)

    @property
    def indices(self) -> tuple[int, ...]:
        return self.partition.indices

    @property
    def multiplicity(self) -> bool:
        return multiplicity(self.partition)

    def fields(self) -> list[tuple[str, str]]:
        P = self.partition
        out = [
            ("is_partition", _fmt(self.is_partition)),
            ("rank", str(P.rank)),
            ("parts", str(P.s)),
            ("indices", ",".join(map(str, self.indices))),
            ("multiplicity", _fmt(self.multiplicity)),
        ]
        if not self.is_partition:
            return out
        t1 = self.theorem1
        out += [
            ("theorem1", t1.status.value),
            ("theorem1_witness", _fmt(t1.certificate)),
            ("theorem1_detail", t1.detail),
        ]
        kps = self.kps
        out += [
            ("k", str(kps.k)),
            ("k_exact", _fmt(kps.k_exact)),
            ("k_route1", str(kps.k_route1)),
            ("k_route1_exact", _fmt(kps.k_route1_exact)),
            ("k_route2", str(kps.k_route2)),
            ("k_route2_exact", _fmt(kps.k_route2_exact)),
            ("k_witness", f"{kps.k_place}:{kps.k_word}"),
            ("p", "NoP" if kps.p is None else str(kps.p)),
            ("sharp_values", ",".join(map(str, sorted(kps.sharp_values))) or "-"),
            ("sharp_witnesses", " ".join(f"{v}:{w}" for v, w in kps.sharp_words.items()) or "-"),
            ("sharp_exhaustive", _fmt(kps.exhaustive)),
        ]
        if self.theorem2 is None:
            out.append(("theorem2", "n/a"))
        else:
            out += [("theorem2_r", str(self.r)), ("theorem2_reading", self.reading)]
            for name, v in self.theorem2.items():
                out.append((f"theorem2_{name}", v.status.value))
                if v.holds:
                    out.append((f"theorem2_{name}_witness", f"{v.place}:{v.certificate}"
                                + (f" #:{v.sharp_certificate}" if v.sharp_certificate else "")))
        out.append(("neighborhood", " ".join(f"{c}:{_fmt_dyadic(x)}"
                                             for c, x in self.neighborhood_radii) or "-"))
        return out

    def to_kv(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.fields())

    def to_text(self) -> str:
        P = self.partition
        lines = [f"Coset partition of F_{P.rank} with {P.s} parts"]
        for i, pair in enumerate(P.pairs, start=1):
            lines.append(f"  place {i}: index {pair.index}, rep {pair.representative}, "
                         f"marked vertex {pair.marked_vertex}")
        width = max(len(k) for k, _ in self.fields())
        lines += [f"{k.ljust(width)}  {v}" for k, v in self.fields()]
        return "\n".join(lines) + "\n"


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def _fmt_dyadic(x: Fraction) -> str:
    if x == 0:
        return "0"
    m = x.denominator.bit_length() - 1
    assert x == Fraction(1, 2**m), x
    return f"2^-{m}"


def analyze(P: CosetPartition, cap: int = DEFAULT_CAP, r: int = DEFAULT_R,
            reading: str = DEFAULT_READING, cache: dict | None = None,
            strict: bool = True, witness_cap: int | None = None) -> AnalysisReport:
    """Full report. With ``strict``, a failed implication raises TheoremViolation."""
    if not verify(P).is_partition:
        return AnalysisReport(P, False, reading=reading)
    if cache is None:
        cache = {}
    t1 = check_theorem1(P, cap, cache)
    kps = compute_kp_sharp(P, cap, cache, witness_cap)
    t2 = None
    if P.s >= 3:
        r = r if r in admissible_r(P) else admissible_r(P)[0]
        t2 = check_theorem2(P, kps, r, reading)
    else:
        r = None
    radii = []
    if t1.holds:
        radii.append(("theorem1", neighborhood_radius("theorem1")))
    for name, v in (t2 or {}).items():
        if v.holds:
            radii.append((name, neighborhood_radius(name, r)))
    report = AnalysisReport(P, True, t1, kps, t2, r, reading, radii)
    if strict:
        bad = [n for n, v in [("theorem1", t1)] + list((t2 or {}).items())
               if v.holds and not v.consequence]
        if bad:
            raise TheoremViolation(f"conditions {bad} hold but their consequence fails")
    return report


def recheck_theorem1(P: CosetPartition, v: Verdict) -> bool:
    """Re-certify a holds verdict from its word alone."""
    top = P.pairs[0].subgroup
    return v.holds and permutation_of_word(top, v.certificate).is_full_cycle()


def recheck_k(P: CosetPartition, kps: KPSharp) -> bool:
    """The k-witness realizes a cycle of length k in the group at its place."""
    H = P.pairs[kps.k_place - 1].subgroup
    return permutation_of_word(H, kps.k_word).max_cycle_length() == kps.k


def recheck_sharp(P: CosetPartition, kps: KPSharp, value: int) -> bool:
    w = kps.sharp_words[value]
    orders = [permutation_of_word(pair.subgroup, w).cycle_length_at(pair.marked_vertex)
              for pair in P.pairs]
    return max(orders) == kps.k and orders.count(kps.k) == value


@dataclass(frozen=True)
class NeighborhoodCheck:
    position: int
    condition: str
    r: int | None
    radius: Fraction
    distance: Fraction
    verdict: str  # transfers | falsified | unverified


def certified_claims(P0: CosetPartition, cap: int = DEFAULT_CAP, cache: dict | None = None,
                     reading: str = DEFAULT_READING, witness_cap: int | None = None):
    """(condition, r, radius) for every condition P0 certifies, over all admissible r."""
    claims = []
    t1 = check_theorem1(P0, cap, cache)
    if t1.holds:
        claims.append(("theorem1", None, neighborhood_radius("theorem1")))
    if P0.s >= 3:
        kps = compute_kp_sharp(P0, cap, cache, witness_cap)
        seen = set()
        for r in admissible_r(P0):
            for name, v in check_theorem2(P0, kps, r, reading).items():
                key = (name, effective_r(name, r))
                if v.holds and key not in seen:
                    seen.add(key)
                    claims.append((name, key[1], neighborhood_radius(name, r)))
    return claims


def check_neighborhood(P0: CosetPartition, corpus: Sequence[CosetPartition],
                       cap: int = DEFAULT_CAP, cache: dict | None = None,
                       reading: str = DEFAULT_READING,
                       witness_cap: int | None = None) -> list[NeighborhoodCheck]:
    """Check the neighbourhood transfers from P0 to every corpus member within radius.

    theorem1 within 1/2: the same condition and multiplicity, and the distance
    is at most 2^-(p+1) with p the least prime dividing d_s. Conditions (i),
    (ii) within 2^-(r+1): the same condition. (iii), (iv): multiplicity.
    """
    if cache is None:
        cache = {}
    claims = certified_claims(P0, cap, cache, reading, witness_cap)
    out = []
    for pos, P in enumerate(corpus):
        if P.rank != P0.rank:
            continue  # different spaces
        rho = distance(P, P0)
        for name, r, radius in claims:
            if rho >= radius:
                continue
            if name == "theorem1":
                v = check_theorem1(P, cap, cache)
                verdict = _transfer(v.status, multiplicity(P))
                out.append(NeighborhoodCheck(pos, name, r, radius, rho, verdict))
                p = least_prime_factor(P0.pairs[0].index)
                bound_ok = rho <= Fraction(1, 2 ** (p + 1))
                out.append(NeighborhoodCheck(pos, "theorem1_bound", r, radius, rho,
                                             "transfers" if bound_ok else "falsified"))
            elif name in ("i", "ii"):
                if r not in admissible_r(P):
                    verdict = "falsified"
                else:
                    kps = compute_kp_sharp(P, cap, cache, witness_cap)
                    v = check_theorem2(P, kps, r, reading)[name]
                    verdict = _transfer(v.status, multiplicity(P))
                out.append(NeighborhoodCheck(pos, name, r, radius, rho, verdict))
            else:
                out.append(NeighborhoodCheck(pos, name, r, radius, rho,
                                             "transfers" if multiplicity(P) else "falsified"))
    return out


def _transfer(status: Status, mult: bool) -> str:
    if not mult or status is Status.FAILS or status is Status.NA:
        return "falsified"
    return "transfers" if status is Status.HOLDS else "unverified"
