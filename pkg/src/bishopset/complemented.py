"""Complemented subsets: pairs (pos, neg) of subsets that are pointwise apart.

Two operation suites are supported and never mixed inside one expression:
``suite1`` (union/inter/neg/diff/times) and ``suite2`` (vee/wedge/ominus/
otimes).  The characteristic function is exposed as a 2-valued partial
function on pos ∪ neg.
"""

from __future__ import annotations

from dataclasses import dataclass

from .setoid import TWO, CapabilityError, Setoid, SetoidError, SetoidMap, product_setoid
from .subsets import (
    PartialFn,
    Subset,
    preimage,
    subset_eq,
    subset_intersection,
    subset_leq,
    subset_product,
    subset_union,
)

SUITE1 = "suite1"
SUITE2 = "suite2"


@dataclass(frozen=True)
class Complemented:
    ambient: Setoid
    pos: Subset
    neg: Subset

    def __post_init__(self):
        ap = self.ambient.require_apartness("complemented subset")
        for a in self.pos.part.elements:
            for b in self.neg.part.elements:
                if not ap(self.pos.embed(a), self.neg.embed(b)):
                    raise SetoidError(
                        f"components are not apart at {(a, b)!r}"
                    )

    @staticmethod
    def of(ambient: Setoid, pos_elements, neg_elements) -> "Complemented":
        return Complemented(
            ambient, Subset.of(ambient, pos_elements), Subset.of(ambient, neg_elements)
        )

    def domain(self) -> Subset:
        return subset_union(self.pos, self.neg)

    def chi(self) -> PartialFn:
        """The indicator: 1 on pos-tagged points, 0 on neg-tagged points."""
        dom = self.domain()
        table = {z: 1 if z[0] == 0 else 0 for z in dom.part.elements}
        val = SetoidMap(dom.part, TWO, table)
        return PartialFn(self.ambient, dom, val)

    def key(self):
        return (self.pos.key(), self.neg.key())

    def member(self, x) -> bool:
        return any(
            self.ambient.eq(self.pos.embed(a), x) for a in self.pos.part.elements
        )

    def non_member(self, x) -> bool:
        return any(
            self.ambient.eq(self.neg.embed(b), x) for b in self.neg.part.elements
        )


def compl_subseteq(a: Complemented, b: Complemented) -> bool:
    """A ⊆ B :⇔ A¹ ⊆ B¹ and B⁰ ⊆ A⁰."""
    return subset_leq(a.pos, b.pos) is not None and subset_leq(b.neg, a.neg) is not None


def compl_eq(a: Complemented, b: Complemented) -> bool:
    return compl_subseteq(a, b) and compl_subseteq(b, a)


def compl_neg(a: Complemented) -> Complemented:
    return Complemented(a.ambient, a.neg, a.pos)


def _triple_union(x: Subset, y: Subset, z: Subset) -> Subset:
    return subset_union(subset_union(x, y), z)


def compl_op1(kind: str, a: Complemented, b: Complemented = None) -> Complemented:
    """First operation suite."""
    if kind == "neg":
        return compl_neg(a)
    if b is None:
        raise SetoidError(f"{kind!r} needs two operands")
    if kind == "union":
        return Complemented(
            a.ambient, subset_union(a.pos, b.pos), subset_intersection(a.neg, b.neg)
        )
    if kind == "inter":
        return Complemented(
            a.ambient, subset_intersection(a.pos, b.pos), subset_union(a.neg, b.neg)
        )
    if kind == "diff":
        return compl_op1("inter", a, compl_neg(b))
    if kind == "times":
        return compl_times(a, b)
    raise SetoidError(f"unknown suite1 operation {kind!r}")


def compl_times(a: Complemented, c: Complemented) -> Complemented:
    """A × C over the product ambient with the disjunctive apartness."""
    amb = product_setoid(a.ambient, c.ambient)
    pos = subset_product(a.pos, c.pos)
    pos = Subset(amb, pos.part, SetoidMap(pos.part, amb, pos.embed.table))
    neg_left = subset_product(a.neg, Subset.whole(c.ambient))
    neg_right = subset_product(Subset.whole(a.ambient), c.neg)
    neg_left = Subset(amb, neg_left.part, SetoidMap(neg_left.part, amb, neg_left.embed.table))
    neg_right = Subset(amb, neg_right.part, SetoidMap(neg_right.part, amb, neg_right.embed.table))
    return Complemented(amb, pos, subset_union(neg_left, neg_right))


def compl_op2(kind: str, a: Complemented, b: Complemented = None) -> Complemented:
    """Second operation suite; meets/joins carve the domain into cases."""
    if kind == "neg":
        return compl_neg(a)
    if b is None:
        raise SetoidError(f"{kind!r} needs two operands")
    pp = subset_intersection(a.pos, b.pos)
    pn = subset_intersection(a.pos, b.neg)
    np_ = subset_intersection(a.neg, b.pos)
    nn = subset_intersection(a.neg, b.neg)
    if kind == "vee":
        return Complemented(a.ambient, _triple_union(pp, pn, np_), nn)
    if kind == "wedge":
        return Complemented(a.ambient, pp, _triple_union(pn, np_, nn))
    if kind == "ominus":
        return compl_op2("wedge", a, compl_neg(b))
    if kind == "otimes":
        amb = product_setoid(a.ambient, b.ambient)

        def lift(p: Subset, q: Subset) -> Subset:
            s = subset_product(p, q)
            return Subset(amb, s.part, SetoidMap(s.part, amb, s.embed.table))

        pos = lift(a.pos, b.pos)
        neg = _triple_union(lift(a.pos, b.neg), lift(a.neg, b.pos), lift(a.neg, b.neg))
        return Complemented(amb, pos, neg)
    raise SetoidError(f"unknown suite2 operation {kind!r}")


def compl_op(suite: str, kind: str, a: Complemented, b: Complemented = None):
    if suite == SUITE1:
        return compl_op1(kind, a, b)
    if suite == SUITE2:
        return compl_op2(kind, a, b)
    raise SetoidError(f"unknown operation suite {suite!r}; refusing to guess")


def compl_preimage(f: SetoidMap, a: Complemented) -> Complemented:
    """(f⁻¹(A¹), f⁻¹(A⁰)); f must be strongly extensional."""
    if f.dom.apart is None:
        raise CapabilityError("preimage of a complemented subset needs apartness on the domain")
    if not f.is_strongly_extensional():
        raise CapabilityError("map is not strongly extensional")
    return Complemented(f.dom, preimage(f, a.pos), preimage(f, a.neg))


def two_valued_apartness(x: Setoid) -> Setoid:
    """X with the inequality induced by its 2-valued function space.

    On a finite carrier a separating 2-valued function exists exactly for
    non-equal points (the indicator of an equality class separates), so this
    is the denial inequality of eq.
    """
    return Setoid(
        x.elements, x.eq, lambda a, b: not x.eq(a, b), name=x.name or "X"
    )


def detachable_pair(f: SetoidMap) -> Complemented:
    """([f=1], [f=0]) as a complemented subset wrt the 2-valued inequality."""
    if f.cod.elements != TWO.elements:
        raise SetoidError("a detachable pair needs a 2-valued function")
    amb = two_valued_apartness(f.dom)
    pos = Subset.of(amb, [x for x in amb.elements if f(x) == 1])
    neg = Subset.of(amb, [x for x in amb.elements if f(x) == 0])
    return Complemented(amb, pos, neg)
