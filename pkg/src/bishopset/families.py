"""Set-indexed families with transport maps, family-maps, Σ- and Π-sets.

A family over an index setoid I assigns a carrier setoid to every index and a
transport map to every pair in the diagonal D(I); identity and triangle laws
are verified exhaustively.  Directed variants replace D(I) by the order
diagonal of a preorder carrying a modulus of directedness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .report import LawReport
from .setoid import (
    TWO,
    CapabilityError,
    EqWitness,
    Setoid,
    SetoidError,
    SetoidMap,
    all_maps,
    find_eq_witness,
    function_space,
    map_to_tuple,
    product_setoid,
    tuple_to_map,
)


def diagonal(index: Setoid) -> list[tuple]:
    return [(i, j) for i in index.elements for j in index.elements if index.eq(i, j)]


@dataclass(frozen=True)
class Family:
    """An index setoid, a carrier per index, a transport map per D(I)-pair."""

    index: Setoid
    carriers: dict = field(compare=False)
    transports: dict = field(compare=False)

    def __post_init__(self):
        for i in self.index.elements:
            if i not in self.carriers:
                raise SetoidError(f"missing carrier at index {i!r}")
        for i, j in diagonal(self.index):
            if (i, j) not in self.transports:
                raise SetoidError(f"missing transport entry for {(i, j)!r}")

    def carrier(self, i) -> Setoid:
        return self.carriers[i]

    def transport(self, i, j) -> SetoidMap:
        return self.transports[(i, j)]

    @staticmethod
    def constant(index: Setoid, x: Setoid) -> "Family":
        ident = SetoidMap.identity(x)
        return Family(
            index,
            {i: x for i in index.elements},
            {(i, j): ident for i, j in diagonal(index)},
        )

    @staticmethod
    def of_two(x: Setoid, y: Setoid) -> "Family":
        """The 2-indexed family of two sets with identity transports."""
        return Family(
            TWO,
            {0: x, 1: y},
            {(0, 0): SetoidMap.identity(x), (1, 1): SetoidMap.identity(y)},
        )

    @staticmethod
    def over_discrete(index: Setoid, carriers: dict) -> "Family":
        """Only diagonal transports needed when the index is discrete."""
        return Family(
            index,
            dict(carriers),
            {
                (i, j): SetoidMap.identity(carriers[i])
                for i, j in diagonal(index)
            },
        )


def check_family(fam: Family) -> LawReport:
    """Identity, composition-triangle, and witness-pair laws, exhaustively."""
    rep = LawReport(subject="family")
    idx = fam.index

    w = next(
        (
            (i, x)
            for i in idx.elements
            for x in fam.carrier(i).elements
            if not fam.carrier(i).eq(fam.transport(i, i)(x), x)
        ),
        None,
    )
    rep.law("transport-identity", w is None, w)

    w = None
    for i, j in diagonal(idx):
        for k in idx.elements:
            if not idx.eq(j, k):
                continue
            lam_ij, lam_jk, lam_ik = (
                fam.transport(i, j),
                fam.transport(j, k),
                fam.transport(i, k),
            )
            for x in fam.carrier(i).elements:
                if not fam.carrier(k).eq(lam_jk(lam_ij(x)), lam_ik(x)):
                    w = (i, j, k, x)
                    break
            if w:
                break
        if w:
            break
    rep.law("transport-triangle", w is None, w)

    w = None
    for i, j in diagonal(idx):
        pair = EqWitness(fam.transport(i, j), fam.transport(j, i))
        if not pair.is_valid():
            w = (i, j)
            break
    rep.law("transports-form-equality-witness", w is None, w)
    return rep


@dataclass(frozen=True)
class FamilyMap:
    """A component map per index whose naturality squares all commute."""

    source: Family
    target: Family
    components: dict = field(compare=False)

    def __post_init__(self):
        rep = check_family_map_raw(self.source, self.target, self.components)
        if not rep.ok:
            raise SetoidError(f"family-map laws fail: {rep.failures()}")

    def component(self, i) -> SetoidMap:
        return self.components[i]

    @staticmethod
    def identity(fam: Family) -> "FamilyMap":
        return FamilyMap(
            fam,
            fam,
            {i: SetoidMap.identity(fam.carrier(i)) for i in fam.index.elements},
        )

    def compose(self, other: "FamilyMap") -> "FamilyMap":
        return FamilyMap(
            other.source,
            self.target,
            {
                i: self.component(i).compose(other.component(i))
                for i in self.source.index.elements
            },
        )

    def eq_to(self, other: "FamilyMap") -> bool:
        return all(
            self.component(i).eq_to(other.component(i))
            for i in self.source.index.elements
        )


def check_family_map_raw(source: Family, target: Family, components: dict) -> LawReport:
    rep = LawReport(subject="family-map")
    missing = next((i for i in source.index.elements if i not in components), None)
    rep.law("components-total", missing is None, missing)
    if missing is not None:
        return rep
    w = None
    for i, j in diagonal(source.index):
        lhs = components[j].compose(source.transport(i, j))
        rhs = target.transport(i, j).compose(components[i])
        if not lhs.eq_to(rhs):
            w = (i, j)
            break
    rep.law("naturality-square", w is None, w)
    return rep


def check_family_map(fmap: FamilyMap) -> LawReport:
    return check_family_map_raw(fmap.source, fmap.target, fmap.components)


# -- Σ and Π -----------------------------------------------------------------


def sigma_setoid(fam: Family, with_apartness: bool = True) -> Setoid:
    """The exterior union: pairs (i, x), equal when indices are and transport
    carries one fibre element to the other.

    When the index is discrete and all transports are strongly extensional,
    the canonical disjunctive inequality is attached.
    """
    idx = fam.index
    els = tuple(
        (i, x) for i in idx.elements for x in fam.carrier(i).elements
    )

    def eq(p, q):
        i, x = p
        j, y = q
        return idx.eq(i, j) and fam.carrier(j).eq(fam.transport(i, j)(x), y)

    apart = None
    if with_apartness and idx.apart is not None and idx.is_discrete():
        carriers_ok = all(
            fam.carrier(i).apart is not None for i in idx.elements
        )
        strong = carriers_ok and all(
            fam.transport(i, j).is_strongly_extensional()
            for i, j in diagonal(idx)
        )
        if strong:
            iap = idx.apart

            def apart(p, q):
                i, x = p
                j, y = q
                if iap(i, j):
                    return True
                return idx.eq(i, j) and fam.carrier(j).apart(
                    fam.transport(i, j)(x), y
                )

    return Setoid(els, eq, apart, name="sigma")


def sigma_injection(fam: Family, i, sig: Setoid = None) -> SetoidMap:
    sig = sig or sigma_setoid(fam)
    return SetoidMap(
        fam.carrier(i), sig, {x: (i, x) for x in fam.carrier(i).elements}
    )


def pi_setoid(fam: Family) -> Setoid:
    """Dependent functions: index-aligned tuples compatible with transports."""
    idx = fam.index
    pools = [fam.carrier(i).elements for i in idx.elements]
    order = {i: k for k, i in enumerate(idx.elements)}
    members = []
    for combo in itertools.product(*pools):
        ok = True
        for i, j in diagonal(idx):
            ci, cj = combo[order[i]], combo[order[j]]
            if not fam.carrier(j).eq(fam.transport(i, j)(ci), cj):
                ok = False
                break
        if ok:
            members.append(combo)

    def eq(s, t):
        return all(
            fam.carrier(i).eq(s[order[i]], t[order[i]]) for i in idx.elements
        )

    apart = None
    if all(fam.carrier(i).apart is not None for i in idx.elements):
        apart = lambda s, t: any(
            fam.carrier(i).apart(s[order[i]], t[order[i]]) for i in idx.elements
        )
    return Setoid(tuple(members), eq, apart, name="pi")


def pi_component(fam: Family, theta: tuple, i):
    order = {ix: k for k, ix in enumerate(fam.index.elements)}
    return theta[order[i]]


def pi_projection(fam: Family, i, pi: Setoid = None) -> SetoidMap:
    pi = pi or pi_setoid(fam)
    return SetoidMap(
        pi, fam.carrier(i), {t: pi_component(fam, t, i) for t in pi.elements}
    )


def sigma_map(fmap: FamilyMap, src_sigma: Setoid = None, dst_sigma: Setoid = None) -> SetoidMap:
    """(i, x) ↦ (i, Ψ_i(x)) between the Σ-setoids."""
    src = src_sigma or sigma_setoid(fmap.source)
    dst = dst_sigma or sigma_setoid(fmap.target)
    return SetoidMap(
        src, dst, {(i, x): (i, fmap.component(i)(x)) for i, x in src.elements}
    )


def pi_map(fmap: FamilyMap, src_pi: Setoid = None, dst_pi: Setoid = None) -> SetoidMap:
    """Θ ↦ (Ψ_i(Θ_i))_i between the Π-setoids."""
    src = src_pi or pi_setoid(fmap.source)
    dst = dst_pi or pi_setoid(fmap.target)
    order = fmap.source.index.elements
    table = {
        t: tuple(fmap.component(i)(v) for i, v in zip(order, t))
        for t in src.elements
    }
    return SetoidMap(src, dst, table)


def sigma_surjectivity_modulus(fmap: FamilyMap, modulus: FamilyMap) -> SetoidMap:
    """(i, y) ↦ (i, Φ_i(y)) when each Φ_i is a surjectivity modulus for Ψ_i."""
    src = sigma_setoid(fmap.target)
    dst = sigma_setoid(fmap.source)
    return SetoidMap(
        src, dst, {(i, y): (i, modulus.component(i)(y)) for i, y in src.elements}
    )


# -- family constructions ----------------------------------------------------


def family_product(lam: Family, mu: Family) -> Family:
    idx = lam.index
    carriers = {
        i: product_setoid(lam.carrier(i), mu.carrier(i)) for i in idx.elements
    }
    transports = {}
    for i, j in diagonal(idx):
        li, mi = lam.transport(i, j), mu.transport(i, j)
        transports[(i, j)] = SetoidMap(
            carriers[i],
            carriers[j],
            {(x, y): (li(x), mi(y)) for x, y in carriers[i].elements},
        )
    return Family(idx, carriers, transports)


def family_funspace(lam: Family, mu: Family) -> Family:
    """Carrier F(λ(i), μ(i)); transports conjugate by the two transports."""
    idx = lam.index
    carriers = {
        i: function_space(lam.carrier(i), mu.carrier(i)) for i in idx.elements
    }
    transports = {}
    for i, j in diagonal(idx):
        lam_ji = lam.transport(j, i)
        mu_ij = mu.transport(i, j)

        def make(i=i, j=j, lam_ji=lam_ji, mu_ij=mu_ij):
            src, dst = carriers[i], carriers[j]
            table = {}
            for t in src.elements:
                f = tuple_to_map(t, lam.carrier(i), mu.carrier(i))
                g = mu_ij.compose(f).compose(lam_ji)
                table[t] = dst.rep(map_to_tuple(g))
            return SetoidMap(src, dst, table)

        transports[(i, j)] = make()
    return Family(idx, carriers, transports)


def setoid_coproduct(x: Setoid, y: Setoid) -> Setoid:
    """X + Y: tagged carriers, same-tag componentwise equality."""
    els = tuple(itertools.chain(((0, u) for u in x.elements), ((1, w) for w in y.elements)))

    def eq(p, q):
        if p[0] != q[0]:
            return False
        return (x if p[0] == 0 else y).eq(p[1], q[1])

    apart = None
    if x.apart is not None and y.apart is not None:
        def apart(p, q):
            if p[0] != q[0]:
                return True
            return (x if p[0] == 0 else y).apart(p[1], q[1])

    return Setoid(els, eq, apart, name=f"({x.name}+{y.name})")


def family_coproduct(lam: Family, mu: Family) -> Family:
    idx = lam.index
    carriers = {
        i: setoid_coproduct(lam.carrier(i), mu.carrier(i)) for i in idx.elements
    }
    transports = {}
    for i, j in diagonal(idx):
        li, mi = lam.transport(i, j), mu.transport(i, j)
        transports[(i, j)] = SetoidMap(
            carriers[i],
            carriers[j],
            {
                (tag, v): (tag, (li if tag == 0 else mi)(v))
                for tag, v in carriers[i].elements
            },
        )
    return Family(idx, carriers, transports)


def family_compose(lam: Family, h: SetoidMap) -> Family:
    """Λ ∘ h for h : J → I (the h-subfamily)."""
    j_idx = h.dom
    carriers = {j: lam.carrier(h(j)) for j in j_idx.elements}
    transports = {
        (j, jp): lam.transport(h(j), h(jp)) for j, jp in diagonal(j_idx)
    }
    return Family(j_idx, carriers, transports)


# -- families over a product index -------------------------------------------


def x_component(r: Family, x, y_setoid: Setoid) -> Family:
    """Fix the first product coordinate; a family over the second factor."""
    carriers = {y: r.carrier((x, y)) for y in y_setoid.elements}
    transports = {
        (y, yp): r.transport((x, y), (x, yp)) for y, yp in diagonal(y_setoid)
    }
    return Family(y_setoid, carriers, transports)


def y_component(r: Family, y, x_setoid: Setoid) -> Family:
    carriers = {x: r.carrier((x, y)) for x in x_setoid.elements}
    transports = {
        (x, xp): r.transport((x, y), (xp, y)) for x, xp in diagonal(x_setoid)
    }
    return Family(x_setoid, carriers, transports)


def sigma_over_first(r: Family, x_setoid: Setoid, y_setoid: Setoid) -> Family:
    """x ↦ Σ_y ρ(x, y) as a family over the first factor."""
    carriers = {}
    for x in x_setoid.elements:
        carriers[x] = sigma_setoid(x_component(r, x, y_setoid), with_apartness=False)
    transports = {}
    for x, xp in diagonal(x_setoid):
        src, dst = carriers[x], carriers[xp]
        table = {
            (y, u): (y, r.transport((x, y), (xp, y))(u)) for y, u in src.elements
        }
        transports[(x, xp)] = SetoidMap(src, dst, table)
    return Family(x_setoid, carriers, transports)


def pi_over_first(r: Family, x_setoid: Setoid, y_setoid: Setoid) -> Family:
    """x ↦ Π_y ρ(x, y) as a family over the first factor."""
    comps = {x: x_component(r, x, y_setoid) for x in x_setoid.elements}
    carriers = {x: pi_setoid(comps[x]) for x in x_setoid.elements}
    transports = {}
    for x, xp in diagonal(x_setoid):
        src, dst = carriers[x], carriers[xp]
        ys = comps[x].index.elements
        table = {
            t: tuple(r.transport((x, y), (xp, y))(v) for y, v in zip(ys, t))
            for t in src.elements
        }
        transports[(x, xp)] = SetoidMap(src, dst, table)
    return Family(x_setoid, carriers, transports)


def sigma_over_second(r: Family, x_setoid: Setoid, y_setoid: Setoid) -> Family:
    carriers = {
        y: sigma_setoid(y_component(r, y, x_setoid), with_apartness=False)
        for y in y_setoid.elements
    }
    transports = {}
    for y, yp in diagonal(y_setoid):
        src, dst = carriers[y], carriers[yp]
        table = {
            (x, u): (x, r.transport((x, y), (x, yp))(u)) for x, u in src.elements
        }
        transports[(y, yp)] = SetoidMap(src, dst, table)
    return Family(y_setoid, carriers, transports)


def pi_over_second(r: Family, x_setoid: Setoid, y_setoid: Setoid) -> Family:
    comps = {y: y_component(r, y, x_setoid) for y in y_setoid.elements}
    carriers = {y: pi_setoid(comps[y]) for y in y_setoid.elements}
    transports = {}
    for y, yp in diagonal(y_setoid):
        src, dst = carriers[y], carriers[yp]
        xs = comps[y].index.elements
        table = {
            t: tuple(r.transport((x, y), (x, yp))(v) for x, v in zip(xs, t))
            for t in src.elements
        }
        transports[(y, yp)] = SetoidMap(src, dst, table)
    return Family(y_setoid, carriers, transports)


def family_constructions(kind: str, *args) -> Family:
    table: dict[str, Callable] = {
        "product": family_product,
        "funspace": family_funspace,
        "coproduct": family_coproduct,
        "compose_h": family_compose,
    }
    if kind in table:
        return table[kind](*args)
    raise SetoidError(f"unknown family construction {kind!r}")


# -- distributivity of Π over Σ ----------------------------------------------


def graph_family(r: Family, x_setoid: Setoid, y_setoid: Setoid, f: SetoidMap) -> Family:
    """x ↦ ρ(x, f(x)) along a function f : X → Y."""
    carriers = {x: r.carrier((x, f(x))) for x in x_setoid.elements}
    transports = {
        (x, xp): r.transport((x, f(x)), (xp, f(xp)))
        for x, xp in diagonal(x_setoid)
    }
    return Family(x_setoid, carriers, transports)


def selection_family(r: Family, x_setoid: Setoid, y_setoid: Setoid) -> Family:
    """f ↦ Π_x ρ(x, f(x)) as a family over the function space F(X, Y)."""
    fs = function_space(x_setoid, y_setoid)
    graphs = {
        t: graph_family(r, x_setoid, y_setoid, tuple_to_map(t, x_setoid, y_setoid))
        for t in fs.elements
    }
    carriers = {t: pi_setoid(graphs[t]) for t in fs.elements}
    transports = {}
    for t, tp in diagonal(fs):
        src, dst = carriers[t], carriers[tp]
        f = tuple_to_map(t, x_setoid, y_setoid)
        fp = tuple_to_map(tp, x_setoid, y_setoid)
        xs = x_setoid.elements
        table = {
            h: tuple(
                r.transport((x, f(x)), (x, fp(x)))(v) for x, v in zip(xs, h)
            )
            for h in src.elements
        }
        transports[(t, tp)] = SetoidMap(src, dst, table)
    return Family(fs, carriers, transports)


def ac_distribute(r: Family, x_setoid: Setoid, y_setoid: Setoid):
    """The choice map Π_x Σ_y ρ(x,y) → Σ_f Π_x ρ(x, f(x)) plus both setoids.

    Returns (ac_map, lhs_setoid, rhs_setoid, selection_family).
    """
    first = sigma_over_first(r, x_setoid, y_setoid)
    lhs = pi_setoid(first)
    sel = selection_family(r, x_setoid, y_setoid)
    rhs = sigma_setoid(sel, with_apartness=False)
    xs = x_setoid.elements

    def split(phi):
        fvals = tuple(phi[k][0] for k in range(len(xs)))
        theta = tuple(phi[k][1] for k in range(len(xs)))
        return (fvals, theta)

    table = {phi: split(phi) for phi in lhs.elements}
    ac = SetoidMap(lhs, rhs, table)
    return ac, lhs, rhs, sel


# -- sets of sets -------------------------------------------------------------


def set_of_sets_setoid(fam: Family) -> Setoid:
    """The index with equality 'the carriers are equal in the universe'."""
    idx = fam.index
    cache: dict[tuple, bool] = {}

    def eq(i, j):
        key = (idx.elements.index(i), idx.elements.index(j))
        if key not in cache:
            cache[key] = find_eq_witness(fam.carrier(i), fam.carrier(j)) is not None
        return cache[key]

    return Setoid(idx.elements, eq, None, name="carrier-classes")


def is_set_of_sets(fam: Family):
    """Does carrier equality in the universe imply index equality?

    Returns (ok, counterexample-pair).
    """
    idx = fam.index
    for i in idx.elements:
        for j in idx.elements:
            if find_eq_witness(fam.carrier(i), fam.carrier(j)) is not None:
                if not idx.eq(i, j):
                    return False, (i, j)
    return True, None


def lift_through_carriers(fam: Family, f: SetoidMap) -> SetoidMap:
    """The unique map on carrier-classes with lift ∘ λ* = f; needs Set(I)."""
    ok, witness = is_set_of_sets(fam)
    if not ok:
        raise CapabilityError(
            f"family is not a set of sets; carriers equal at {witness!r}"
        )
    classes = set_of_sets_setoid(fam)
    return SetoidMap(classes, f.cod, {i: f(i) for i in classes.elements})


# -- directed indices and direct families -------------------------------------


@dataclass(frozen=True)
class DirectedIndex:
    """A poset with an explicit modulus of directedness."""

    setoid: Setoid
    leq: Callable
    delta: Callable

    def __post_init__(self):
        rep = check_directed(self)
        if not rep.ok:
            raise SetoidError(f"directedness laws fail: {rep.failures()}")

    @property
    def elements(self):
        return self.setoid.elements

    def order_pairs(self) -> list[tuple]:
        return [
            (i, j)
            for i in self.elements
            for j in self.elements
            if self.leq(i, j)
        ]

    @staticmethod
    def chain(elements) -> "DirectedIndex":
        els = tuple(elements)
        rank = {e: k for k, e in enumerate(els)}
        return DirectedIndex(
            Setoid.discrete(els),
            lambda a, b: rank[a] <= rank[b],
            lambda a, b: a if rank[a] >= rank[b] else b,
        )


def check_directed(d: DirectedIndex) -> LawReport:
    rep = LawReport(subject="directed-index")
    s, leq, delta = d.setoid, d.leq, d.delta
    els = s.elements

    w = next(
        (
            (i, j, ip, jp)
            for i in els for j in els for ip in els for jp in els
            if s.eq(i, ip) and s.eq(j, jp) and leq(i, j) and not leq(ip, jp)
        ),
        None,
    )
    rep.law("order-extensional", w is None, w)
    w = next((i for i in els if not leq(i, i)), None)
    rep.law("order-reflexive", w is None, w)
    w = next(
        (
            (i, j, k)
            for i in els for j in els for k in els
            if leq(i, j) and leq(j, k) and not leq(i, k)
        ),
        None,
    )
    rep.law("order-transitive", w is None, w)
    w = next(
        (
            (i, j)
            for i in els for j in els
            if leq(i, j) and leq(j, i) and not s.eq(i, j)
        ),
        None,
    )
    rep.law("order-antisymmetric", w is None, w)

    w = next(
        (
            (i, j)
            for i in els for j in els
            if not (leq(i, delta(i, j)) and leq(j, delta(i, j)))
        ),
        None,
    )
    rep.law("delta-upper-bound", w is None, w)
    w = next(
        (
            (i, j)
            for i in els for j in els
            if leq(i, j)
            and not (s.eq(delta(i, j), j) and s.eq(delta(j, i), j))
        ),
        None,
    )
    rep.law("delta-absorbs-order", w is None, w)
    w = next(
        (
            (i, j, k)
            for i in els for j in els for k in els
            if not s.eq(delta(delta(i, j), k), delta(i, delta(j, k)))
        ),
        None,
    )
    rep.law("delta-associative", w is None, w)
    return rep


@dataclass(frozen=True)
class DirectFamily:
    """Carriers with covariant transports along the order diagonal."""

    directed: DirectedIndex
    carriers: dict = field(compare=False)
    transports: dict = field(compare=False)

    def __post_init__(self):
        for i, j in self.directed.order_pairs():
            if (i, j) not in self.transports:
                raise SetoidError(f"missing transport for {(i, j)!r}")

    def carrier(self, i) -> Setoid:
        return self.carriers[i]

    def transport(self, i, j) -> SetoidMap:
        return self.transports[(i, j)]

    @staticmethod
    def constant(directed: DirectedIndex, x: Setoid) -> "DirectFamily":
        ident = SetoidMap.identity(x)
        return DirectFamily(
            directed,
            {i: x for i in directed.elements},
            {p: ident for p in directed.order_pairs()},
        )


def check_direct_family(fam: DirectFamily) -> LawReport:
    rep = LawReport(subject="direct-family")
    d = fam.directed
    w = next(
        (
            (i, x)
            for i in d.elements
            for x in fam.carrier(i).elements
            if not fam.carrier(i).eq(fam.transport(i, i)(x), x)
        ),
        None,
    )
    rep.law("transport-identity", w is None, w)
    w = None
    for i, j in d.order_pairs():
        for k in d.elements:
            if not d.leq(j, k):
                continue
            for x in fam.carrier(i).elements:
                lhs = fam.transport(j, k)(fam.transport(i, j)(x))
                rhs = fam.transport(i, k)(x)
                if not fam.carrier(k).eq(lhs, rhs):
                    w = (i, j, k, x)
                    break
            if w:
                break
        if w:
            break
    rep.law("cocone-triangle", w is None, w)
    return rep


def direct_sigma_eq(fam: DirectFamily):
    """The Σ-equality: some common upper index identifies the transports.

    The modulus of directedness supplies the first candidate; an exhaustive
    scan over all upper bounds certifies the existential either way.
    """
    d = fam.directed

    def eq(p, q):
        i, x = p
        j, y = q
        k0 = d.delta(i, j)
        if d.leq(i, k0) and d.leq(j, k0):
            if fam.carrier(k0).eq(fam.transport(i, k0)(x), fam.transport(j, k0)(y)):
                return True
        for k in d.elements:
            if d.leq(i, k) and d.leq(j, k):
                if fam.carrier(k).eq(
                    fam.transport(i, k)(x), fam.transport(j, k)(y)
                ):
                    return True
        return False

    return eq


def direct_sigma(fam: DirectFamily) -> Setoid:
    els = tuple(
        (i, x) for i in fam.directed.elements for x in fam.carrier(i).elements
    )
    return Setoid(els, direct_sigma_eq(fam), None, name="direct-sigma")


def direct_sigma_first_projection_table(fam: DirectFamily) -> dict:
    """The raw first-projection operation on Σ-pairs.

    Exposed as a table only: it does not respect the Σ-equality in general,
    so no extensionality claim is attached.
    """
    sig = direct_sigma(fam)
    return {p: p[0] for p in sig.elements}


def direct_pi(fam: DirectFamily) -> Setoid:
    """Tables compatible with every covariant transport; pointwise equality."""
    d = fam.directed
    order = {i: k for k, i in enumerate(d.elements)}
    pools = [fam.carrier(i).elements for i in d.elements]
    members = []
    for combo in itertools.product(*pools):
        ok = True
        for i, j in d.order_pairs():
            if not fam.carrier(j).eq(
                fam.transport(i, j)(combo[order[i]]), combo[order[j]]
            ):
                ok = False
                break
        if ok:
            members.append(combo)

    def eq(s, t):
        return all(
            fam.carrier(i).eq(s[order[i]], t[order[i]]) for i in d.elements
        )

    return Setoid(tuple(members), eq, None, name="direct-pi")


def direct_sigma_map(src: DirectFamily, dst: DirectFamily, components: dict) -> SetoidMap:
    """(i, x) ↦ (i, Ψ_i(x)) for a direct family-map."""
    for i, j in src.directed.order_pairs():
        lhs = components[j].compose(src.transport(i, j))
        rhs = dst.transport(i, j).compose(components[i])
        if not lhs.eq_to(rhs):
            raise SetoidError(f"direct family-map square fails at {(i, j)!r}")
    s, t = direct_sigma(src), direct_sigma(dst)
    return SetoidMap(s, t, {(i, x): (i, components[i](x)) for i, x in s.elements})
