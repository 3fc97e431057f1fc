"""Borel/Baire closures, the separation lemma for zero pairs, and the
predicative measure / integration structures, all over exact rationals.

Complemented subsets over the inequality induced by a finite function cache
are canonicalized to (pos-image, neg-image) key pairs; "countable" unions and
intersections stabilize on the finite lattice, so the closure engine is a
binary ∪/∩ fixpoint with equality-extension built into the keys.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .complemented import Complemented
from .report import LawReport
from .setoid import Setoid, SetoidError, SetoidMap, CapabilityError
from .subsets import Subset, subset_leq
from .subset_families import ComplementedFamily, SubsetFamily
from .topology import RFn, as_q

Q = Fraction


# -- F-induced apartness and basic families -------------------------------------


def cache_apartness(carrier: Setoid, cache: list[RFn]) -> Setoid:
    """x ≠ y when some cached function separates them."""
    fns = list(cache)

    def apart(a, b):
        return any(f(a) != f(b) for f in fns)

    return Setoid(carrier.elements, carrier.eq, apart, name=carrier.name)


def key_of_pair(amb: Setoid, pos: Iterable, neg: Iterable) -> tuple:
    reps_pos = frozenset(amb.elements.index(amb.rep(x)) for x in pos)
    reps_neg = frozenset(amb.elements.index(amb.rep(x)) for x in neg)
    return (reps_pos, reps_neg)


def key_members(amb: Setoid, key: tuple) -> tuple[list, list]:
    pos = [x for x in amb.elements if amb.elements.index(amb.rep(x)) in key[0]]
    neg = [x for x in amb.elements if amb.elements.index(amb.rep(x)) in key[1]]
    return pos, neg


def key_is_valid(amb: Setoid, key: tuple) -> bool:
    ap = amb.require_apartness("complemented-subset key")
    pos, neg = key_members(amb, key)
    return all(ap(p, n) for p in pos for n in neg)


def complemented_key(c: Complemented) -> tuple:
    return key_of_pair(
        c.ambient,
        (c.pos.embed(a) for a in c.pos.part.elements),
        (c.neg.embed(b) for b in c.neg.part.elements),
    )


def key_union(k1: tuple, k2: tuple) -> tuple:
    return (k1[0] | k2[0], k1[1] & k2[1])


def key_intersection(k1: tuple, k2: tuple) -> tuple:
    return (k1[0] & k2[0], k1[1] | k2[1])


def key_negation(k: tuple) -> tuple:
    return (k[1], k[0])


def key_leq(k1: tuple, k2: tuple) -> bool:
    return k1[0] <= k2[0] and k2[1] <= k1[1]


def key_to_complemented(amb: Setoid, key: tuple) -> Complemented:
    pos, neg = key_members(amb, key)
    return Complemented.of(amb, pos, neg)


def all_valid_keys(amb: Setoid) -> list[tuple]:
    """Every ][-valid complemented subset over the ambient, canonically."""
    ap = amb.require_apartness("complemented lattice")
    class_reps = [amb.elements.index(c[0]) for c in amb.classes()]
    out = []
    for assignment in itertools.product((0, 1, 2), repeat=len(class_reps)):
        pos = frozenset(r for r, a in zip(class_reps, assignment) if a == 1)
        neg = frozenset(r for r, a in zip(class_reps, assignment) if a == 2)
        key = (pos, neg)
        if key_is_valid(amb, key):
            out.append(key)
    return out


def open_pair(f: RFn) -> tuple:
    """([f > 0], [f ≤ 0]) as a canonical key."""
    pos = [x for x in f.dom.elements if f(x) > 0]
    neg = [x for x in f.dom.elements if f(x) <= 0]
    return key_of_pair(f.dom, pos, neg)


def zero_pair(f: RFn) -> tuple:
    """([f = 0], [f ≠ 0]) as a canonical key."""
    pos = [x for x in f.dom.elements if f(x) == 0]
    neg = [x for x in f.dom.elements if f(x) != 0]
    return key_of_pair(f.dom, pos, neg)


def basic_families(kind: str, carrier: Setoid, cache: list[RFn]) -> ComplementedFamily:
    """The open ([f>0],[f≤0]) or zero ([f=0],[f≠0]) family over the cache.

    The index is the (finite) cache with pointwise-value equality; embeddings
    and transports follow the identity rule.
    """
    amb = cache_apartness(carrier, cache)
    keys = tuple(range(len(cache)))
    idx = Setoid(keys, lambda a, b: cache[a].eq_to(cache[b]), None, name="cache")
    members = {}
    for k in keys:
        f = cache[k]
        if kind == "open":
            pos = [x for x in amb.elements if f(x) > 0]
            neg = [x for x in amb.elements if f(x) <= 0]
        elif kind == "zero":
            pos = [x for x in amb.elements if f(x) == 0]
            neg = [x for x in amb.elements if f(x) != 0]
        else:
            raise SetoidError(f"unknown basic family {kind!r}")
        members[k] = Complemented.of(amb, pos, neg)
    return ComplementedFamily.of_members(amb, idx, members)


def open_separation_witness(f: RFn) -> bool:
    """f itself separates its own positive and non-positive parts."""
    return all(
        f(x) != f(y)
        for x in f.dom.elements
        if f(x) > 0
        for y in f.dom.elements
        if f(y) <= 0
    )


# -- stabilization helpers -------------------------------------------------------


def stabilizing_level(f: RFn) -> int:
    """The first n with 1/n below every positive value of |f|."""
    positives = [abs(v) for v in f.key() if v != 0]
    if not positives:
        return 1
    m = min(positives)
    n = 1
    while Q(1, n) >= m:
        n += 1
    return n


def complement_scheme_open(f: RFn) -> RFn:
    """1/n − f at the stabilizing level: its open pair is −(open pair of f)."""
    n = stabilizing_level(f)
    return RFn.constant(f.dom, Q(1, n)) - f


def complement_scheme_zero(f: RFn) -> RFn:
    """(|f| ∧ 1/n) − 1/n at the stabilizing level: zero pair flips."""
    n = stabilizing_level(f)
    return f.abs().wedge(Q(1, n)) - RFn.constant(f.dom, Q(1, n))


def saturate_cache(cache: list[RFn]) -> list[RFn]:
    """Close the cache under the finitely many helper functions the
    complement/translation identities use; all are exact topology members."""
    seen: dict[tuple, RFn] = {}
    out: list[RFn] = []

    def push(f: RFn):
        if f.key() not in seen:
            seen[f.key()] = f
            out.append(f)

    for f in cache:
        push(f)
    for f in list(out):
        neg = f * Q(-1)
        push(neg)
        push(f.abs())
        push(f.vee(0).wedge(1))
        push(complement_scheme_open(f))
        push(complement_scheme_open(neg))
        push(neg.wedge(0))
        push(complement_scheme_zero(f))
        n = stabilizing_level(f)
        push(f.wedge(Q(1, n)) - RFn.constant(f.dom, Q(1, n)))
        push(complement_scheme_zero(neg.wedge(0)))
    return out


# -- closure engine ---------------------------------------------------------------


@dataclass
class BorelUniverse:
    """The reachable part of the finite complemented-subset lattice."""

    ambient: Setoid
    seeds: list
    closure: set = field(default_factory=set)
    traces: dict = field(default_factory=dict)

    def __contains__(self, key: tuple) -> bool:
        return key in self.closure


def borel_closure(ambient: Setoid, seed_keys: Iterable[tuple]) -> BorelUniverse:
    """Least fixpoint of binary ∪/∩ over the seeds.

    Eventually-constant countable sequences stabilize on the finite lattice,
    so the binary closure realizes the countable rules; equality-extension is
    absorbed by canonical keys.  Derivation traces record one parent pair per
    discovered element.
    """
    seeds = list(dict.fromkeys(seed_keys))
    uni = BorelUniverse(ambient, seeds)
    uni.closure = set(seeds)
    for s in seeds:
        uni.traces[s] = ("seed",)
    frontier = list(seeds)
    while frontier:
        fresh = []
        current = sorted(uni.closure)
        for a in current:
            for b in frontier:
                for op, combiner in (("union", key_union), ("inter", key_intersection)):
                    c = combiner(a, b)
                    if c not in uni.closure:
                        uni.closure.add(c)
                        uni.traces[c] = (op, a, b)
                        fresh.append(c)
                    d = combiner(b, a)
                    if d not in uni.closure:
                        uni.closure.add(d)
                        uni.traces[d] = (op, b, a)
                        fresh.append(d)
        frontier = fresh
    return uni


def whole_lattice_closure_oracle(ambient: Setoid, seed_keys: Iterable[tuple]) -> set:
    """Independent oracle: scan the entire finite lattice, marking elements
    reachable as a ∪/∩ of two already-marked ones, until stable."""
    lattice = all_valid_keys(ambient)
    marked = set(seed_keys)
    changed = True
    while changed:
        changed = False
        for key in lattice:
            if key in marked:
                continue
            hit = False
            for a in marked:
                for b in marked:
                    if key_union(a, b) == key or key_intersection(a, b) == key:
                        hit = True
                        break
                if hit:
                    break
            if hit:
                marked.add(key)
                changed = True
    return marked


def borel_of_cache(carrier: Setoid, cache: list[RFn], kind: str) -> BorelUniverse:
    amb = cache_apartness(carrier, saturate_cache(cache))
    saturated = saturate_cache(cache)
    pair = open_pair if kind == "open" else zero_pair
    seeds = [pair(f) for f in saturated]
    return borel_closure(amb, seeds)


def borel_baire_equality(carrier: Setoid, cache: list[RFn]) -> LawReport:
    """The four closures (open/zero over the full and the bounded caches)
    agree, with the translation identities exhibited on the way."""
    rep = LawReport(subject="borel-baire-equality")
    saturated = saturate_cache(cache)
    amb = cache_apartness(carrier, saturated)
    bounded = [f.vee(0).wedge(1) for f in cache] + [
        (f * Q(-1)).vee(0).wedge(1) for f in cache
    ]

    borel = borel_closure(amb, [open_pair(f) for f in saturated])
    baire = borel_closure(amb, [zero_pair(f) for f in saturated])
    sat_bounded = saturate_cache(bounded)
    borel_star = borel_closure(amb, [open_pair(f) for f in sat_bounded])
    baire_star = borel_closure(amb, [zero_pair(f) for f in sat_bounded])

    # translation identities, witnessed per cached function
    w = None
    for f in cache:
        g = (f * Q(-1)).wedge(0)
        if open_pair(f) != key_negation(zero_pair(g)):
            w = f.key()
            break
    rep.law("open-equals-negated-zero", w is None, w)

    w = None
    for f in cache:
        lhs = zero_pair(f)
        rhs = key_intersection(
            key_negation(open_pair(f)), key_negation(open_pair(f * Q(-1)))
        )
        if lhs != rhs:
            w = f.key()
            break
    rep.law("zero-from-two-opens", w is None, w)

    w = None
    for f in cache:
        g = complement_scheme_open(f)
        if open_pair(g) != key_negation(open_pair(f)):
            w = f.key()
            break
    rep.law("open-complement-scheme", w is None, w)

    rep.law("borel-equals-baire", borel.closure == baire.closure)
    rep.law("borel-equals-bounded-borel", borel.closure == borel_star.closure)
    rep.law("baire-equals-bounded-baire", baire.closure == baire_star.closure)
    return rep


def closure_complement_check(carrier: Setoid, cache: list[RFn]) -> LawReport:
    """−B stays inside the closure, replayed through the 1/n − f scheme."""
    rep = LawReport(subject="borel-complement-closure")
    uni = borel_of_cache(carrier, cache, "open")
    w = next((k for k in sorted(uni.closure) if key_negation(k) not in uni.closure), None)
    rep.law("closure-closed-under-complement", w is None, w)
    return rep


# -- separation of zero pairs (the two-sided construction) -----------------------


def urysohn_forward(space_members: list[RFn], a: Complemented, h: RFn):
    """From a 0/1 separating member h, produce (f, g, c) := (1 − h, h, 1)."""
    dom = h.dom
    for x in a.pos.part.elements:
        if h(a.pos.embed(x)) != 1:
            raise SetoidError(f"separating function is not 1 on pos at {x!r}")
    for y in a.neg.part.elements:
        if h(a.neg.embed(y)) != 0:
            raise SetoidError(f"separating function is not 0 on neg at {y!r}")
    f = RFn.constant(dom, 1) - h
    g = h
    c = Q(1)
    rep = LawReport(subject="zero-separation-forward")
    rep.law("pos-below-zero-of-f", _below_zero(a, f, positive=True))
    rep.law("neg-below-zero-of-g", _below_zero(a, g, positive=False))
    rep.law(
        "moduli-bounded-away",
        all(abs(f(x)) + abs(g(x)) >= c for x in dom.elements),
    )
    return rep, (f, g, c)


def _below_zero(a: Complemented, f: RFn, positive: bool) -> bool:
    """pos ⊆ [f = 0] and neg ⊆ [f ≠ 0] (swapped when positive=False)."""
    first = a.pos if positive else a.neg
    second = a.neg if positive else a.pos
    return all(f(first.embed(x)) == 0 for x in first.part.elements) and all(
        f(second.embed(y)) != 0 for y in second.part.elements
    )


def urysohn_backward(a: Complemented, f: RFn, g: RFn, c):
    """From (f, g, c) recover h := 1 − ((1/c)|f| ∧ 1), 1 on pos and 0 on neg."""
    c = as_q(c)
    if c <= 0:
        raise SetoidError("the separation constant must be positive")
    if not _below_zero(a, f, positive=True):
        raise SetoidError("pos side is not within the zero set of f")
    if not _below_zero(a, g, positive=False):
        raise SetoidError("neg side is not within the zero set of g")
    bad = next(
        (x for x in f.dom.elements if abs(f(x)) + abs(g(x)) < c), None
    )
    if bad is not None:
        raise SetoidError(f"|f|+|g| drops below the constant at {bad!r}")
    h = RFn.constant(f.dom, 1) - (f.abs() * (1 / c)).wedge(1)
    rep = LawReport(subject="zero-separation-backward")
    rep.law(
        "one-on-pos",
        all(h(a.pos.embed(x)) == 1 for x in a.pos.part.elements),
    )
    rep.law(
        "zero-on-neg",
        all(h(a.neg.embed(y)) == 0 for y in a.neg.part.elements),
    )
    return rep, h


def is_strongly_separated(a: Complemented, cache: list[RFn]) -> Optional[RFn]:
    """A cached member that is 1 on pos and 0 on neg, when one exists."""
    for f in cache:
        if all(f(a.pos.embed(x)) == 1 for x in a.pos.part.elements) and all(
            f(a.neg.embed(y)) == 0 for y in a.neg.part.elements
        ):
            return f
    return None


# -- pre-measure and measure spaces ----------------------------------------------


@dataclass
class PreMeasure:
    """(X, I, μ) with join/meet/complement operations mirrored by the family."""

    family: ComplementedFamily
    vee: Callable
    wedge: Callable
    tilde: Callable
    mu: dict  # index element -> nonnegative rational

    def __post_init__(self):
        for i in self.index.elements:
            if i not in self.mu:
                raise SetoidError(f"measure not total at {i!r}")
            self.mu[i] = as_q(self.mu[i])
            if self.mu[i] < 0:
                raise SetoidError("measures must be nonnegative")

    @property
    def index(self) -> Setoid:
        return self.family.index

    @property
    def ambient(self) -> Setoid:
        return self.family.ambient

    def member_key(self, i) -> tuple:
        return complemented_key(self.family.member(i))

    def meet_of(self, items: list):
        out = items[0]
        for i in items[1:]:
            out = self.wedge(out, i)
        return out

    def join_of(self, items: list):
        out = items[0]
        for i in items[1:]:
            out = self.vee(out, i)
        return out


def premeasure_check(pm: PreMeasure, subset_scan_limit: int = 16) -> LawReport:
    """PMS1–PMS4 with eventually-constant limit semantics."""
    rep = LawReport(subject="pre-measure")
    idx = pm.index
    amb = pm.ambient

    ok, w = _family_is_set(pm.family)
    rep.law("family-is-a-set-of-complemented-subsets", ok, w)

    w = None
    for i in idx.elements:
        for j in idx.elements:
            ki, kj = pm.member_key(i), pm.member_key(j)
            if key_union(ki, kj) != pm.member_key(pm.vee(i, j)):
                w = ("union", i, j)
                break
            if key_intersection(ki, kj) != pm.member_key(pm.wedge(i, j)):
                w = ("intersection", i, j)
                break
            if pm.mu[i] + pm.mu[j] != pm.mu[idx.rep(pm.vee(i, j))] + pm.mu[
                idx.rep(pm.wedge(i, j))
            ]:
                w = ("modularity", i, j)
                break
        if w:
            break
    rep.law("PMS1-lattice-and-modularity", w is None, w)

    w = next(
        (
            i
            for i in idx.elements
            if key_negation(pm.member_key(i)) != pm.member_key(pm.tilde(i))
        ),
        None,
    )
    rep.law("PMS1-complement", w is None, w)

    # PMS2 over every ][-valid complemented subset of the finite ambient
    w = None
    member_keys = {pm.member_key(i): i for i in idx.elements}
    for i in idx.elements:
        ki = pm.member_key(i)
        for bkey in all_valid_keys(amb):
            inter = key_intersection(ki, bkey)
            k = member_keys.get(inter)
            if k is None:
                continue
            minus = pm.wedge(i, pm.tilde(k))
            want = key_intersection(ki, key_negation(bkey))
            if pm.member_key(minus) != want:
                w = ("difference-representation", i, bkey)
                break
            if pm.mu[idx.rep(i)] != pm.mu[idx.rep(k)] + pm.mu[idx.rep(minus)]:
                w = ("additivity", i, bkey)
                break
        if w:
            break
    rep.law("PMS2-relative-difference", w is None, w)

    rep.law("PMS3-something-positive", any(pm.mu[i] > 0 for i in idx.elements))

    rep.law("PMS4-positive-meets-inhabited", *_pms4(pm, subset_scan_limit))
    return rep


def _family_is_set(cf: ComplementedFamily):
    idx = cf.index
    keys = {i: complemented_key(cf.member(i)) for i in idx.elements}
    for i in idx.elements:
        for j in idx.elements:
            if keys[i] == keys[j] and not idx.eq(i, j):
                return False, (i, j)
    return True, None


def _pms4(pm: PreMeasure, subset_scan_limit: int):
    """Stabilized meets with positive measure must have inhabited pos parts.

    Sequences stabilize onto the meet of their value sets (once PMS1 holds),
    so the quantifier runs over nonempty subsets of the index; a subset-DP
    computes all meets when the index is small enough, otherwise the
    pointwise reduction plus all pairs is used.
    """
    idx = pm.index
    els = idx.elements
    n = len(els)

    def pos_inhabited(i) -> bool:
        return pm.family.member(idx.rep(i)).pos.is_inhabited()

    if n <= subset_scan_limit:
        meets: dict[int, object] = {}
        for bit in range(n):
            meets[1 << bit] = els[bit]
        for mask in range(1, 1 << n):
            if mask not in meets:
                low = mask & -mask
                meets[mask] = pm.wedge(meets[mask ^ low], meets[low])
            i = meets[mask]
            if pm.mu[idx.rep(i)] > 0 and not pos_inhabited(i):
                return False, [els[k] for k in range(n) if mask >> k & 1]
        return True, None

    for i in els:
        if pm.mu[idx.rep(i)] > 0 and not pos_inhabited(i):
            return False, [i]
    for i in els:
        for j in els:
            m = pm.wedge(i, j)
            if pm.mu[idx.rep(m)] > 0 and not pos_inhabited(m):
                return False, [i, j]
    return True, None


@dataclass
class MeasureSpace:
    """The lifted space: measurable sets are family members up to pair equality."""

    pre: PreMeasure

    def mu_star(self, key: tuple) -> Fraction:
        for i in self.pre.index.elements:
            if self.pre.member_key(i) == key:
                return self.pre.mu[self.pre.index.rep(i)]
        raise SetoidError("key is not a measurable set")


def lift(pm: PreMeasure) -> MeasureSpace:
    ok, w = _family_is_set(pm.family)
    if not ok:
        raise CapabilityError(f"lifting refused: family is not a set at {w!r}")
    return MeasureSpace(pm)


def measure_check(ms: MeasureSpace, subset_scan_limit: int = 16) -> LawReport:
    """MS1–MS4 for the lifted measure."""
    rep = LawReport(subject="measure-space")
    pm = ms.pre
    idx = pm.index
    keys = {i: pm.member_key(i) for i in idx.elements}
    key_list = list(dict.fromkeys(keys.values()))

    w = None
    for i in idx.elements:
        for j in idx.elements:
            union = key_union(keys[i], keys[j])
            inter = key_intersection(keys[i], keys[j])
            if union not in key_list or inter not in key_list:
                w = ("pseudo-membership", i, j)
                break
            if pm.mu[idx.rep(i)] + pm.mu[idx.rep(j)] != ms.mu_star(union) + ms.mu_star(inter):
                w = ("modularity", i, j)
                break
        if w:
            break
    rep.law("MS1", w is None, w)

    w = None
    for i in idx.elements:
        for bkey in all_valid_keys(pm.ambient):
            inter = key_intersection(keys[i], bkey)
            if inter not in key_list:
                continue
            diff = key_intersection(keys[i], key_negation(bkey))
            if diff not in key_list:
                w = ("difference-missing", i, bkey)
                break
            if pm.mu[idx.rep(i)] != ms.mu_star(inter) + ms.mu_star(diff):
                w = ("additivity", i, bkey)
                break
        if w:
            break
    rep.law("MS2", w is None, w)

    rep.law("MS3", any(pm.mu[i] > 0 for i in idx.elements))

    ok, w = _pms4(pm, subset_scan_limit)
    rep.law("MS4", ok, w)
    return rep


def completeness_check(ms: MeasureSpace, subset_scan_limit: int = 16) -> LawReport:
    """CM1–CM3 over all ][-valid complemented subsets of the ambient."""
    rep = LawReport(subject="complete-measure")
    pm = ms.pre
    idx = pm.index
    amb = pm.ambient
    keys = {i: pm.member_key(i) for i in idx.elements}
    key_list = set(keys.values())

    w = None
    for i in idx.elements:
        for bkey in all_valid_keys(amb):
            if keys[i][0] <= bkey[0] and keys[i][1] <= bkey[1]:
                if bkey not in key_list:
                    w = (i, bkey)
                    break
        if w:
            break
    rep.law("CM1-squeeze-onto-members", w is None, w)

    ok, w = _cm2(pm, key_list, subset_scan_limit)
    rep.law("CM2-stable-joins-represented", ok, w)

    w = None
    for i in idx.elements:
        for j in idx.elements:
            if pm.mu[idx.rep(i)] != pm.mu[idx.rep(j)]:
                continue
            for bkey in all_valid_keys(amb):
                if key_leq(keys[i], bkey) and key_leq(bkey, keys[j]):
                    if bkey not in key_list:
                        w = (i, j, sorted(bkey[0]), sorted(bkey[1]))
                        break
            if w:
                break
        if w:
            break
    rep.law("CM3-pseudo-membership-between", w is None, w)
    return rep


def cm3_witness_confirms(ms: MeasureSpace, i, j, b_pos, b_neg) -> bool:
    """Does the supplied triple (member i, member j, pair B) violate CM3?

    B must sit between the two members, their measures must agree, and B must
    not equal any family member.
    """
    pm = ms.pre
    idx = pm.index
    bkey = key_of_pair(pm.ambient, b_pos, b_neg)
    if not key_is_valid(pm.ambient, bkey):
        return False
    ki, kj = pm.member_key(i), pm.member_key(j)
    if not (key_leq(ki, bkey) and key_leq(bkey, kj)):
        return False
    if pm.mu[idx.rep(i)] != pm.mu[idx.rep(j)]:
        return False
    return all(pm.member_key(k) != bkey for k in idx.elements)


def _cm2(pm: PreMeasure, key_list: set, subset_scan_limit: int):
    idx = pm.index
    els = idx.elements
    n = len(els)
    if n > subset_scan_limit:
        els = els[:subset_scan_limit]
        n = len(els)
    joins: dict[int, object] = {}
    for bit in range(n):
        joins[1 << bit] = els[bit]
    for mask in range(1, 1 << n):
        if mask not in joins:
            low = mask & -mask
            joins[mask] = pm.vee(joins[mask ^ low], joins[low])
        if pm.member_key(joins[mask]) not in key_list:
            return False, [els[k] for k in range(n) if mask >> k & 1]
    return True, None


# -- the Dirac pre-measure on detachable pairs ------------------------------------


def two_valued_function_index(x: Setoid) -> tuple[Setoid, list[SetoidMap]]:
    from .setoid import all_maps, TWO

    maps = list(all_maps(x, TWO))
    els = tuple(range(len(maps)))
    eq = lambda a, b: maps[a].eq_to(maps[b])
    idx = Setoid(els, eq, None, name="F(X,2)")
    return idx, maps


def dirac_premeasure(x: Setoid, base_point) -> tuple[PreMeasure, list[SetoidMap]]:
    """μ(f) := f(x₀) on the family of detachable complemented pairs."""
    from .complemented import detachable_pair, two_valued_apartness

    idx, maps = two_valued_function_index(x)
    amb = two_valued_apartness(x)
    members = {k: detachable_pair(maps[k]) for k in idx.elements}
    fam = ComplementedFamily.of_members(amb, idx, members)

    def find(table: dict) -> int:
        for k, m in enumerate(maps):
            if all(m(e) == table[e] for e in x.elements):
                return k
        raise SetoidError("closed operation left the function space")

    vee = lambda a, b: find(
        {e: maps[a](e) + maps[b](e) - maps[a](e) * maps[b](e) for e in x.elements}
    )
    wedge = lambda a, b: find({e: maps[a](e) * maps[b](e) for e in x.elements})
    tilde = lambda a: find({e: 1 - maps[a](e) for e in x.elements})
    mu = {k: Q(maps[k](base_point)) for k in idx.elements}
    return PreMeasure(fam, vee, wedge, tilde, mu), maps


# -- sums of real-valued partial functions ----------------------------------------


def partial_sum(terms: list, restriction: Optional[Subset] = None):
    """The pointwise finite sum of rational-valued partial functions over the
    intersection of their domains (or a further restriction of it).

    Each term is a pair (Subset, RFn on the part).  Returns (subset, value
    table) with the value an `RFn` on the subset carrier.
    """
    if not terms:
        raise SetoidError("empty sum")
    amb = terms[0][0].ambient
    order = list(range(len(terms)))
    pools = [terms[k][0].part.elements for k in order]
    members = []
    for combo in itertools.product(*pools):
        images = [terms[k][0].embed(v) for k, v in zip(order, combo)]
        if all(amb.eq(images[0], im) for im in images[1:]):
            members.append(combo)
    emb = lambda t: terms[0][0].embed(t[0])
    eq = lambda s, t: amb.eq(emb(s), emb(t))
    apart = None
    if amb.apart is not None:
        aap = amb.apart
        apart = lambda s, t: aap(emb(s), emb(t))
    part = Setoid(tuple(members), eq, apart, name="sum-domain")
    dom = Subset(amb, part, SetoidMap(part, amb, {t: emb(t) for t in members}))
    value = RFn(
        part,
        {t: sum((terms[k][1](v) for k, v in zip(order, t)), Q(0)) for t in members},
    )
    if restriction is not None:
        inc = subset_leq(restriction, dom)
        if inc is None:
            raise SetoidError("restriction is not included in the common domain")
        rpart = restriction.part
        value = RFn(rpart, {a: value(inc(a)) for a in rpart.elements})
        return restriction, value
    return dom, value


def sum_is_strongly_extensional(dom: Subset, value: RFn) -> bool:
    """Apart outputs force apart points of the ambient through the embedding."""
    amb_ap = dom.ambient.require_apartness("strong extensionality")
    for a in dom.part.elements:
        for b in dom.part.elements:
            if value(a) != value(b) and not amb_ap(dom.embed(a), dom.embed(b)):
                return False
    return True


# -- simple functions and pre-integration -----------------------------------------


def chi_partial(pm: PreMeasure, i) -> tuple[Subset, RFn]:
    """The indicator of a family member as a rational-valued partial function
    on pos ∪ neg."""
    member = pm.family.member(i)
    dom = member.domain()
    value = RFn(
        dom.part,
        {z: Q(1 if z[0] == 0 else 0) for z in dom.part.elements},
    )
    return dom, value


@dataclass(frozen=True)
class SimpleFn:
    """A formal rational combination of member indicators with its partial
    function realisation."""

    terms: tuple                 # ((coefficient, index), ...)
    dom: Subset
    value: RFn


@dataclass
class SimpleSpace:
    """The pre-integration structure of simple functions over a pre-measure."""

    pm: PreMeasure

    def make(self, terms) -> SimpleFn:
        terms = tuple((as_q(a), i) for a, i in terms)
        if not terms:
            raise SetoidError("a simple function needs at least one term")
        scaled = []
        for a, i in terms:
            dom, value = chi_partial(self.pm, i)
            scaled.append((dom, value * a))
        dom, value = partial_sum(scaled)
        return SimpleFn(terms, dom, value)

    def integral(self, s: SimpleFn) -> Fraction:
        idx = self.pm.index
        return sum((a * self.pm.mu[idx.rep(i)] for a, i in s.terms), Q(0))

    def eq(self, s: SimpleFn, t: SimpleFn) -> bool:
        """Partial-function equality: mutual domain inclusion with pointwise
        value agreement along the inclusions."""
        inc = subset_leq(s.dom, t.dom)
        if inc is None:
            return False
        if any(s.value(a) != t.value(inc(a)) for a in s.dom.part.elements):
            return False
        back = subset_leq(t.dom, s.dom)
        if back is None:
            return False
        return all(t.value(b) == s.value(back(b)) for b in t.dom.part.elements)

    def strongly_extensional(self, s: SimpleFn) -> bool:
        return sum_is_strongly_extensional(s.dom, s.value)

    # term-level operations

    def scale(self, a, s: SimpleFn) -> SimpleFn:
        a = as_q(a)
        return self.make([(a * c, i) for c, i in s.terms])

    def add(self, s: SimpleFn, t: SimpleFn) -> SimpleFn:
        return self.make(list(s.terms) + list(t.terms))

    def represent(self, dom: Subset, value_of: Callable) -> Optional[SimpleFn]:
        """Search a term list whose realisation is the given partial function.

        Blocks of equal value must match member pos-parts whose domains agree
        with the target; returns None when no representation is found.
        """
        amb = self.pm.ambient
        dom_key = dom.key()
        blocks: dict[Fraction, set] = {}
        for a in dom.part.elements:
            v = as_q(value_of(a))
            blocks.setdefault(v, set()).add(amb.rep(dom.embed(a)))
        member_info = {}
        for i in self.pm.index.elements:
            m = self.pm.family.member(i)
            pos_key = frozenset(amb.rep(x) for x in m.pos.image_elements())
            whole = m.domain()
            whole_key = whole.key()
            member_info.setdefault((pos_key, whole_key), i)
        chosen = []
        for v in sorted(blocks, key=lambda q: (q.numerator, q.denominator)):
            if v == 0:
                continue
            block_key = frozenset(blocks[v])
            i = member_info.get((block_key, dom_key))
            if i is None:
                return None
            chosen.append((v, i))
        if not chosen:
            full = next(
                (
                    i
                    for (pos_key, whole_key), i in member_info.items()
                    if whole_key == dom_key
                ),
                None,
            )
            if full is None:
                return None
            chosen = [(Q(0), full)]
        out = self.make(chosen)
        ok = subset_leq(dom, out.dom) is not None and all(
            out.value(b) == as_q(value_of(_pull(dom, out.dom, b)))
            for b in out.dom.part.elements
        )
        return out if ok else None

    def abs(self, s: SimpleFn) -> Optional[SimpleFn]:
        table = {a: abs(s.value(a)) for a in s.dom.part.elements}
        return self.represent(s.dom, lambda a: table[a])

    def wedge_const(self, s: SimpleFn, c) -> Optional[SimpleFn]:
        c = as_q(c)
        table = {a: min(s.value(a), c) for a in s.dom.part.elements}
        return self.represent(s.dom, lambda a: table[a])


def _pull(src: Subset, dst: Subset, b):
    """The element of src matching b in dst (exists when dst ≤ src)."""
    back = subset_leq(dst, src)
    return back(b)


def generated_simple_batch(space: SimpleSpace, coefficients=(Q(1), Q(2), Q(-1))) -> list[SimpleFn]:
    """All 1- and 2-term simple functions with the given coefficients."""
    idx = space.pm.index.elements
    out = []
    for c in coefficients:
        for i in idx:
            out.append(space.make([(c, i)]))
    for c1 in coefficients[:2]:
        for c2 in coefficients[:2]:
            for i in idx:
                for j in idx:
                    out.append(space.make([(c1, i), (c2, j)]))
    return out


def integration_check(space: SimpleSpace, batch: list[SimpleFn] = None) -> LawReport:
    """PIS1–PIS8 over a generated batch, eventually-constant limit semantics."""
    rep = LawReport(subject="pre-integration")
    batch = batch if batch is not None else generated_simple_batch(space)

    w = next((k for k, s in enumerate(batch) if not space.strongly_extensional(s)), None)
    rep.law("members-strongly-extensional", w is None, w)

    # well-definedness of the integral on equality classes
    w = None
    for a in range(len(batch)):
        for b in range(a + 1, len(batch)):
            if space.eq(batch[a], batch[b]) and space.integral(batch[a]) != space.integral(batch[b]):
                w = (a, b)
                break
        if w:
            break
    rep.law("integral-respects-equality", w is None, w)

    w = None
    for s in batch[: len(batch) // 2 + 1]:
        for a in (Q(2), Q(-3, 2)):
            t = space.scale(a, s)
            if not _partial_scaled_eq(space, s, a, t):
                w = ("pointwise", a)
                break
            if space.integral(t) != a * space.integral(s):
                w = ("integral", a)
                break
        if w:
            break
    rep.law("PIS1-scaling", w is None, w)

    w = None
    shortlist = batch[: min(len(batch), 12)]
    for s in shortlist:
        for t in shortlist:
            u = space.add(s, t)
            if space.integral(u) != space.integral(s) + space.integral(t):
                w = "integral"
                break
        if w:
            break
    rep.law("PIS2-additivity", w is None, w)

    w, unknown = None, None
    for k, s in enumerate(batch):
        u = space.abs(s)
        if u is None:
            unknown = k
            break
        if any(u.value(_match(u, s, a)) != abs(s.value(a)) for a in s.dom.part.elements):
            w = k
            break
    if unknown is not None:
        rep.inconclusive("PIS3-absolute-closure", unknown)
    else:
        rep.law("PIS3-absolute-closure", w is None, w)

    w, unknown = None, None
    for k, s in enumerate(batch):
        u = space.wedge_const(s, 1)
        if u is None:
            unknown = k
            break
        if any(u.value(_match(u, s, a)) != min(s.value(a), Q(1)) for a in s.dom.part.elements):
            w = k
            break
    if unknown is not None:
        rep.inconclusive("PIS4-wedge-one-closure", unknown)
    else:
        rep.law("PIS4-wedge-one-closure", w is None, w)

    rep.law("PIS5-witness-below", *_pis5(space, batch))

    rep.law("PIS6-unit-integral", any(
        space.integral(space.make([(Q(1), i)])) == 1 for i in space.pm.index.elements
    ))

    rep.law("PIS7-truncation-limit", *_pis7(space, batch))
    rep.law("PIS8-vanishing-tail", *_pis8(space, batch))
    return rep


def _match(u: SimpleFn, s: SimpleFn, a):
    """The element of u's domain matching a in s's domain."""
    inc = subset_leq(s.dom, u.dom)
    return inc(a)


def _partial_scaled_eq(space: SimpleSpace, s: SimpleFn, a, t: SimpleFn) -> bool:
    inc = subset_leq(s.dom, t.dom)
    if inc is None:
        return False
    return all(t.value(inc(x)) == a * s.value(x) for x in s.dom.part.elements)


def _pis5(space: SimpleSpace, batch: list[SimpleFn]):
    """When a short series of integrals stays below ∫i, a common-domain point
    witnesses the strict inequality pointwise."""
    shortlist = batch[: min(len(batch), 8)]
    for s in shortlist:
        for seq in ([t] for t in shortlist):
            total = sum((space.integral(t) for t in seq), Q(0))
            if not total < space.integral(s):
                continue
            found = False
            for u in s.dom.part.elements:
                image = s.dom.embed(u)
                vals = []
                ok = True
                for t in seq:
                    hit = next(
                        (
                            a
                            for a in t.dom.part.elements
                            if space.pm.ambient.eq(t.dom.embed(a), image)
                        ),
                        None,
                    )
                    if hit is None:
                        ok = False
                        break
                    vals.append(t.value(hit))
                if ok and sum(vals, Q(0)) < s.value(u):
                    found = True
                    break
            if not found:
                return False, "no pointwise witness"
    return True, None


def _pis7(space: SimpleSpace, batch: list[SimpleFn]):
    for k, s in enumerate(batch[: min(len(batch), 10)]):
        values = [s.value(a) for a in s.dom.part.elements]
        top = max([v for v in values] + [Q(1)])
        n0 = int(top) + 1
        stable = space.wedge_const(s, n0)
        nxt = space.wedge_const(s, n0 + 1)
        if stable is None or nxt is None:
            return False, ("representation", k)
        if not (space.eq(stable, s) and space.eq(nxt, s)):
            return False, ("stabilization", k)
        if space.integral(stable) != space.integral(s):
            return False, ("limit-value", k)
    return True, None


def _pis8(space: SimpleSpace, batch: list[SimpleFn]):
    for k, s in enumerate(batch[: min(len(batch), 10)]):
        abs_s = space.abs(s)
        if abs_s is None:
            return False, ("absolute-representation", k)
        n0 = stabilizing_level(RFn(s.dom.part, {a: s.value(a) for a in s.dom.part.elements}))
        tail = []
        for n in (n0, n0 + 1, n0 + 2):
            t = space.wedge_const(abs_s, Q(1, n))
            if t is None:
                return False, ("tail-representation", k)
            tail.append((n, space.integral(t)))
        constant = tail[0][1] * tail[0][0]
        if any(v * n != constant for n, v in tail):
            return False, ("tail-shape", k)
        # the tail is exactly constant/n, so the limit is 0
    return True, None
