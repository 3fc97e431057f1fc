"""Families of subsets of a fixed ambient setoid: interior unions,
intersections, coverings with the gluing theorem, semi-distributivity data,
and the complemented / partial-function variants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .complemented import Complemented
from .families import Family, FamilyMap, check_family, diagonal
from .report import LawReport
from .setoid import (
    TWO,
    Setoid,
    SetoidError,
    SetoidMap,
    all_operations,
    function_space,
    is_function,
    tuple_to_map,
)
from .subsets import PartialFn, Subset, subset_eq, subset_intersection, subset_leq


@dataclass(frozen=True)
class SubsetFamily:
    """A family of sets plus a modulus of embeddings into the ambient."""

    ambient: Setoid
    family: Family
    embeds: dict = field(compare=False)

    def __post_init__(self):
        rep = check_subset_family(self)
        if not rep.ok:
            raise SetoidError(f"subset-family laws fail: {rep.failures()}")

    @property
    def index(self) -> Setoid:
        return self.family.index

    def carrier(self, i) -> Setoid:
        return self.family.carrier(i)

    def embed(self, i) -> SetoidMap:
        return self.embeds[i]

    def member(self, i) -> Subset:
        return Subset(self.ambient, self.carrier(i), self.embed(i))

    @staticmethod
    def of_subsets(ambient: Setoid, index: Setoid, members: dict) -> "SubsetFamily":
        """Members given as `Subset`s over a discrete-style index.

        Transports are found by the inclusion search between equal-index
        members (identity when the index is discrete).
        """
        carriers = {i: members[i].part for i in index.elements}
        transports = {}
        for i, j in diagonal(index):
            t = subset_leq(members[i], members[j])
            if t is None:
                raise SetoidError(
                    f"members at equal indices {(i, j)!r} are not mutually included"
                )
            transports[(i, j)] = t
        fam = Family(index, carriers, transports)
        return SubsetFamily(
            ambient, fam, {i: members[i].embed for i in index.elements}
        )

    @staticmethod
    def constant(ambient: Setoid, index: Setoid, a: Subset) -> "SubsetFamily":
        fam = Family.constant(index, a.part)
        return SubsetFamily(ambient, fam, {i: a.embed for i in index.elements})

    @staticmethod
    def of_two(a: Subset, b: Subset) -> "SubsetFamily":
        fam = Family.of_two(a.part, b.part)
        return SubsetFamily(a.ambient, fam, {0: a.embed, 1: b.embed})


def check_subset_family(sf: SubsetFamily) -> LawReport:
    rep = LawReport(subject="subset-family")
    rep.extend(check_family(sf.family))
    w = next(
        (i for i in sf.index.elements if not sf.embeds[i].is_embedding()), None
    )
    rep.law("embeddings", w is None, w)
    w = None
    for i, j in diagonal(sf.index):
        lam = sf.family.transport(i, j)
        for x in sf.carrier(i).elements:
            if not sf.ambient.eq(sf.embeds[i](x), sf.embeds[j](lam(x))):
                w = (i, j, x)
                break
        if w:
            break
    rep.law("embeddings-commute-with-transports", w is None, w)
    return rep


def subsets_map(src: SubsetFamily, dst: SubsetFamily, components: dict) -> FamilyMap:
    """A family of subsets-map: components must commute with the embeddings."""
    for i in src.index.elements:
        comp = components[i]
        for x in src.carrier(i).elements:
            if not src.ambient.eq(src.embed(i)(x), dst.embed(i)(comp(x))):
                raise SetoidError(f"subsets-map triangle fails at {(i, x)!r}")
    return FamilyMap(src.family, dst.family, components)


def find_subsets_map(src: SubsetFamily, dst: SubsetFamily) -> Optional[FamilyMap]:
    """Search the (at most one, pointwise) family of subsets-map src ⇒ dst."""
    components = {}
    for i in src.index.elements:
        t = subset_leq(src.member(i), dst.member(i))
        if t is None:
            return None
        components[i] = t
    return subsets_map(src, dst, components)


def interior_union(sf: SubsetFamily) -> Subset:
    """⋃ λ(i): pairs (i, x) identified through their ambient images."""
    amb = sf.ambient
    els = tuple(
        (i, x) for i in sf.index.elements for x in sf.carrier(i).elements
    )
    emb = lambda p: sf.embed(p[0])(p[1])
    eq = lambda p, q: amb.eq(emb(p), emb(q))
    apart = None
    if amb.apart is not None:
        aap = amb.apart
        apart = lambda p, q: aap(emb(p), emb(q))
    part = Setoid(els, eq, apart, name="interior-union")
    return Subset(amb, part, SetoidMap(part, amb, {p: emb(p) for p in els}))


def family_intersection(sf: SubsetFamily, base_index) -> Subset:
    """⋂ λ(i): index-aligned tables with a single ambient image.

    The embedding reads off the image at the chosen base index; the result is
    independent of that choice up to subset equality (tested, not assumed).
    """
    amb = sf.ambient
    order = sf.index.elements
    pools = [sf.carrier(i).elements for i in order]
    members = []
    for combo in itertools.product(*pools):
        images = [sf.embed(i)(v) for i, v in zip(order, combo)]
        if all(amb.eq(images[0], im) for im in images[1:]):
            members.append(combo)
    base_pos = order.index(base_index)
    emb = lambda t: sf.embed(base_index)(t[base_pos])
    eq = lambda s, t: amb.eq(emb(s), emb(t))
    apart = None
    if amb.apart is not None:
        aap = amb.apart
        apart = lambda s, t: aap(emb(s), emb(t))
    part = Setoid(tuple(members), eq, apart, name="intersection")
    return Subset(amb, part, SetoidMap(part, amb, {t: emb(t) for t in members}))


def is_covering(sf: SubsetFamily) -> bool:
    union = interior_union(sf)
    return subset_leq(Subset.whole(sf.ambient), union) is not None


def is_disjoint(sf: SubsetFamily) -> Optional[tuple]:
    """None when pairwise apart at unequal indices; else a witness triple."""
    amb_ap = sf.ambient.require_apartness("disjointness")
    idx = sf.index
    idx_ap = idx.apart if idx.apart is not None else (lambda a, b: not idx.eq(a, b))
    for i in idx.elements:
        for j in idx.elements:
            if not idx_ap(i, j):
                continue
            for u in sf.carrier(i).elements:
                for w in sf.carrier(j).elements:
                    if not amb_ap(sf.embed(i)(u), sf.embed(j)(w)):
                        return (i, j, (u, w))
    return None


def covering_partition(sf: SubsetFamily) -> LawReport:
    rep = LawReport(subject="covering/partition")
    rep.law("covering", is_covering(sf))
    if sf.ambient.apart is None:
        rep.inconclusive("disjoint", "no apartness on the ambient setoid")
        return rep
    w = is_disjoint(sf)
    rep.law("disjoint", w is None, w)
    return rep


def glue(sf: SubsetFamily, pieces: dict, cod: Setoid) -> SetoidMap:
    """The unique map on the ambient restricting to each piece of a covering.

    `pieces[i]` maps carrier(i) → cod.  Overlap disagreement and missing
    covering witnesses raise with a precise witness.
    """
    amb = sf.ambient
    for i in sf.index.elements:
        for j in sf.index.elements:
            inter = subset_intersection(sf.member(i), sf.member(j))
            for u, w in inter.part.elements:
                if not cod.eq(pieces[i](u), pieces[j](w)):
                    raise SetoidError(
                        f"pieces disagree on the overlap at {(i, j, u)!r}"
                    )
    union = interior_union(sf)
    witness = {}
    for x in amb.elements:
        hit = next(
            (p for p in union.part.elements if amb.eq(union.embed(p), x)), None
        )
        if hit is None:
            raise SetoidError(f"not a covering: {x!r} is missed")
        witness[x] = hit
    table = {x: pieces[witness[x][0]](witness[x][1]) for x in amb.elements}
    glued = SetoidMap(amb, cod, table)
    for i in sf.index.elements:
        if not glued.compose(sf.embed(i)).eq_to(pieces[i]):
            raise SetoidError(f"glued map does not restrict to piece {i!r}")
    return glued


def glue_is_unique(sf: SubsetFamily, pieces: dict, cod: Setoid, glued: SetoidMap) -> bool:
    """Exhaustively: every map restricting to all pieces equals the glued one."""
    amb = sf.ambient
    for table in all_operations(amb, cod):
        ok, _ = is_function(table, amb, cod)
        if not ok:
            continue
        cand = SetoidMap(amb, cod, table)
        if all(
            cand.compose(sf.embed(i)).eq_to(pieces[i]) for i in sf.index.elements
        ):
            if not cand.eq_to(glued):
                return False
    return True


# -- semi-distributivity of intersection over interior union ------------------


@dataclass
class SemiDistData:
    """The assembled data: Λ(X) over I, P(I) over K with base k0."""

    lam: SubsetFamily
    k_setoid: Setoid
    p_family: SubsetFamily  # family of subsets of the index setoid I
    k0: object


def semi_distribute(data: SemiDistData):
    """Builds the nested families and the inclusion θ: V ⊆ W.

    Returns a report, the two `Subset`s (V, W), and θ (None when T is empty).
    V = ⋃_{τ∈T} ⋂_k λ(Z_k(τ_k));  W = ⋂_k ⋃_{j∈p(k)} λ(Z_k(j)).
    """
    rep = LawReport(subject="semi-distributivity")
    lam, kset, pfam, k0 = data.lam, data.k_setoid, data.p_family, data.k0
    amb = lam.ambient

    # N(K): k ↦ the union of the composed family over p(k)
    union_members = {}
    for k in kset.elements:
        comp = compose_with_index_map(lam, pfam.embed(k))
        union_members[k] = interior_union(comp)
    n_family = SubsetFamily.of_subsets(amb, kset, union_members)
    rep.extend(check_subset_family(n_family), prefix="N(K)/")

    # T = ⋂_k p(k) inside I
    t_subset = family_intersection(pfam, k0)
    rep.law("selector-set-computed", True)
    if not t_subset.is_inhabited():
        rep.law("selector-set-inhabited", False, "T is empty; theta is vacuous")
        w_subset = family_intersection(n_family, k0)
        return rep, None, w_subset, None
    rep.law("selector-set-inhabited", True)

    korder = kset.elements

    def tau_family(tau) -> SubsetFamily:
        members = {
            k: lam.member(pfam.embed(k)(tau[korder.index(k)]))
            for k in kset.elements
        }
        return SubsetFamily.of_subsets(amb, kset, members)

    taus = t_subset.part.elements
    tau_families = {tau: tau_family(tau) for tau in taus}
    for tau in taus[:1]:
        rep.extend(check_subset_family(tau_families[tau]), prefix="tau(X)/")

    # Ξ(X): τ ↦ ⋂_k λ(Z_k(τ_k)), a family of subsets over T
    xi_members = {
        tau: family_intersection(tau_families[tau], k0) for tau in taus
    }
    t_index = Setoid(taus, t_subset.part.eq, None, name="T")
    xi_family = SubsetFamily.of_subsets(amb, t_index, xi_members)
    rep.extend(check_subset_family(xi_family), prefix="Xi(X)/")

    v_subset = interior_union(xi_family)
    w_subset = family_intersection(n_family, k0)

    # θ(τ, Φ) has k-component (τ_k, Φ_k)
    theta_table = {}
    for (tau, phi) in v_subset.part.elements:
        tfam = tau_families[tau]
        comps = []
        for pos, k in enumerate(korder):
            comps.append((tau[pos], phi[pos]))
        theta_table[(tau, phi)] = tuple(comps)
    theta = SetoidMap(v_subset.part, w_subset.part, theta_table)
    triangle = all(
        amb.eq(w_subset.embed(theta(p)), v_subset.embed(p))
        for p in v_subset.part.elements
    )
    rep.law("theta-inclusion-triangle", triangle)
    rep.law("theta-is-embedding", theta.is_embedding())
    converse = subset_leq(w_subset, v_subset) is not None
    # instance-level observation only; the converse is never asserted
    rep.law("converse-inclusion-on-this-instance", True, {"holds": converse})
    return rep, v_subset, w_subset, theta


def compose_with_index_map(sf: SubsetFamily, h: SetoidMap) -> SubsetFamily:
    """Λ(X) ∘ h for h : J → I."""
    j_idx = h.dom
    carriers = {j: sf.carrier(h(j)) for j in j_idx.elements}
    transports = {
        (j, jp): sf.family.transport(h(j), h(jp)) for j, jp in diagonal(j_idx)
    }
    fam = Family(j_idx, carriers, transports)
    return SubsetFamily(sf.ambient, fam, {j: sf.embed(h(j)) for j in j_idx.elements})


# -- special families ----------------------------------------------------------


def eq_class_family(x: Setoid, relation=None) -> SubsetFamily:
    """x ↦ its class under an extensional equivalence (default: equality)."""
    rel = relation or x.eq
    for a, b in x.pairs():
        for c in x.elements:
            if x.eq(a, b) and rel(a, c) != rel(b, c):
                raise SetoidError("relation is not extensional over the setoid")
    members = {
        a: Subset.of(x, [y for y in x.elements if rel(y, a)]) for a in x.elements
    }
    return SubsetFamily.of_subsets(x, x, members)


def fiber_family(f: SetoidMap) -> SubsetFamily:
    from .subsets import fiber

    members = {y: fiber(f, y) for y in f.cod.elements}
    return SubsetFamily.of_subsets(f.dom, f.cod, members)


def cofiber_family(f: SetoidMap) -> SubsetFamily:
    from .subsets import cofiber

    members = {y: cofiber(f, y) for y in f.cod.elements}
    return SubsetFamily.of_subsets(f.dom, f.cod, members)


def detachable_family(x: Setoid) -> SubsetFamily:
    """[f = 1] indexed over the 2-valued function space."""
    fs = function_space(x, TWO)
    members = {
        t: Subset.of(x, [e for e, v in zip(x.elements, t) if v == 1])
        for t in fs.elements
    }
    return SubsetFamily.of_subsets(x, fs, members)


def detachable_complement(t: tuple) -> tuple:
    """The index-level complement 1 − f on value tuples."""
    return tuple(1 - v for v in t)


def special_families(kind: str, *args):
    if kind == "eql":
        return eq_class_family(*args)
    if kind == "fiber":
        return fiber_family(*args)
    if kind == "cofiber":
        return cofiber_family(*args)
    if kind == "detachable":
        return detachable_family(*args)
    raise SetoidError(f"unknown special family {kind!r}")


def subset_family_is_set(sf: SubsetFamily):
    """Member equality implies index equality?  Returns (ok, witness)."""
    idx = sf.index
    for i in idx.elements:
        for j in idx.elements:
            if subset_eq(sf.member(i), sf.member(j)) is not None and not idx.eq(i, j):
                return False, (i, j)
    return True, None


# -- families of complemented subsets -----------------------------------------


@dataclass(frozen=True)
class ComplementedFamily:
    pos: SubsetFamily
    neg: SubsetFamily

    def __post_init__(self):
        if self.pos.index.elements != self.neg.index.elements:
            raise SetoidError("pos and neg sides must share the index")
        for i in self.pos.index.elements:
            self.member(i)  # raises when some pair is not apart

    @property
    def ambient(self) -> Setoid:
        return self.pos.ambient

    @property
    def index(self) -> Setoid:
        return self.pos.index

    def member(self, i) -> Complemented:
        return Complemented(self.ambient, self.pos.member(i), self.neg.member(i))

    @staticmethod
    def of_members(ambient: Setoid, index: Setoid, members: dict) -> "ComplementedFamily":
        pos = SubsetFamily.of_subsets(
            ambient, index, {i: members[i].pos for i in index.elements}
        )
        neg = SubsetFamily.of_subsets(
            ambient, index, {i: members[i].neg for i in index.elements}
        )
        return ComplementedFamily(pos, neg)


def complemented_union(cf: ComplementedFamily, base_index) -> Complemented:
    """(⋃ pos(i), ⋂ neg(i))."""
    return Complemented(
        cf.ambient, interior_union(cf.pos), family_intersection(cf.neg, base_index)
    )


def complemented_intersection(cf: ComplementedFamily, base_index) -> Complemented:
    """(⋂ pos(i), ⋃ neg(i))."""
    return Complemented(
        cf.ambient, family_intersection(cf.pos, base_index), interior_union(cf.neg)
    )


def complemented_family_neg(cf: ComplementedFamily) -> ComplementedFamily:
    return ComplementedFamily(cf.neg, cf.pos)


def complemented_family_preimage(f: SetoidMap, cf: ComplementedFamily) -> ComplementedFamily:
    from .complemented import compl_preimage

    members = {
        i: compl_preimage(f, cf.member(i)) for i in cf.index.elements
    }
    return ComplementedFamily.of_members(f.dom, cf.index, members)


# -- families of partial functions --------------------------------------------


@dataclass(frozen=True)
class PartialFamily:
    """A family of subsets with compatible value maps into a fixed codomain."""

    domains: SubsetFamily
    cod: Setoid
    values: dict = field(compare=False)

    def __post_init__(self):
        for i, j in diagonal(self.domains.index):
            lam = self.domains.family.transport(i, j)
            for x in self.domains.carrier(i).elements:
                if not self.cod.eq(self.values[i](x), self.values[j](lam(x))):
                    raise SetoidError(
                        f"value moduli do not commute with transports at {(i, j, x)!r}"
                    )

    @property
    def index(self) -> Setoid:
        return self.domains.index

    def member(self, i) -> PartialFn:
        return PartialFn(self.domains.ambient, self.domains.member(i), self.values[i])

    @staticmethod
    def of_inclusions(domains: SubsetFamily) -> "PartialFamily":
        """The identity-partials family (values = embeddings)."""
        return PartialFamily(
            domains,
            domains.ambient,
            {i: domains.embed(i) for i in domains.index.elements},
        )


def partials_family_compose(m: PartialFamily, lam: PartialFamily) -> PartialFamily:
    """(M ⊙ Λ): per-index partial composition with paired transports."""
    if lam.cod.elements != m.domains.ambient.elements:
        raise SetoidError("middle ambient mismatch")
    from .subsets import partial_compose

    idx = lam.index
    composed = {i: partial_compose(m.member(i), lam.member(i)) for i in idx.elements}
    carriers = {i: composed[i].dom.part for i in idx.elements}
    transports = {}
    for i, j in diagonal(idx):
        li = lam.domains.family.transport(i, j)
        mi = m.domains.family.transport(i, j)
        transports[(i, j)] = SetoidMap(
            carriers[i],
            carriers[j],
            {(u, w): (li(u), mi(w)) for u, w in carriers[i].elements},
        )
    fam = Family(idx, carriers, transports)
    domains = SubsetFamily(
        lam.domains.ambient, fam, {i: composed[i].dom.embed for i in idx.elements}
    )
    return PartialFamily(
        domains, m.cod, {i: composed[i].val for i in idx.elements}
    )
