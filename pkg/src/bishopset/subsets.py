"""Subsets as (carrier, embedding) pairs and partial functions between setoids.

A subset of X is any setoid A together with an embedding A ↪ X; inclusion is
decided by searching for the (unique) connecting map over the embeddings.
Unions are tagged sums with the equality pulled back through the case-defined
embedding, intersections are pair carriers — both exactly mirror the textbook
constructions so that the algebraic laws can be replayed verbatim.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .setoid import (
    TWO,
    CapabilityError,
    EqWitness,
    Setoid,
    SetoidError,
    SetoidMap,
    all_operations,
)


@dataclass(frozen=True)
class Subset:
    ambient: Setoid
    part: Setoid
    embed: SetoidMap

    def __post_init__(self):
        if (
            self.embed.dom.elements != self.part.elements
            or self.embed.cod.elements != self.ambient.elements
        ):
            raise SetoidError("embedding must map the part into the ambient setoid")
        if not self.embed.is_embedding():
            raise SetoidError("the structural map is not an embedding")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def of(ambient: Setoid, elements: Iterable, name: str = "") -> "Subset":
        """Sub-carrier with inherited equality and the identity embedding."""
        els = tuple(elements)
        for e in els:
            if e not in ambient.elements:
                raise SetoidError(f"{e!r} is not an ambient element")
        apart = ambient.apart
        part = Setoid(els, ambient.eq, apart, name)
        return Subset(ambient, part, SetoidMap(part, ambient, {e: e for e in els}))

    @staticmethod
    def extensional(ambient: Setoid, pred: Callable, name: str = "") -> "Subset":
        """The subset generated by an extensional property; pre-checks it."""
        for a, b in ambient.pairs():
            if ambient.eq(a, b) and pred(a) != pred(b):
                raise SetoidError(f"property is not extensional at {(a, b)!r}")
        return Subset.of(ambient, [x for x in ambient.elements if pred(x)], name)

    @staticmethod
    def whole(ambient: Setoid) -> "Subset":
        return Subset(ambient, ambient, SetoidMap.identity(ambient))

    @staticmethod
    def empty(ambient: Setoid) -> "Subset":
        return Subset.of(ambient, ())

    # -- structure ----------------------------------------------------------

    def image_elements(self) -> list:
        return [self.embed(a) for a in self.part.elements]

    def key(self) -> frozenset:
        """Canonical identity under =_{P(X)}: the eq-saturated image."""
        sat = self.ambient.saturate(self.image_elements())
        reps = {self.ambient.rep(x) for x in sat}
        return frozenset(reps)

    def is_inhabited(self) -> bool:
        return len(self.part.elements) > 0

    def __len__(self) -> int:
        return len(self.part.elements)


def subset_leq(a: Subset, b: Subset) -> Optional[SetoidMap]:
    """The inclusion witness A ⊆ B if one exists (unique up to equality)."""
    if a.ambient is not b.ambient and a.ambient.elements != b.ambient.elements:
        raise SetoidError("subsets live in different ambient setoids")
    amb = a.ambient
    table = {}
    for u in a.part.elements:
        target = None
        for w in b.part.elements:
            if amb.eq(a.embed(u), b.embed(w)):
                target = w
                break
        if target is None:
            return None
        table[u] = target
    return SetoidMap(a.part, b.part, table)


def subset_eq(a: Subset, b: Subset) -> Optional[EqWitness]:
    """Mutual inclusion; the returned pair is an equality witness in V0."""
    f = subset_leq(a, b)
    if f is None:
        return None
    g = subset_leq(b, a)
    if g is None:
        return None
    return EqWitness(f, g)


def subset_union(a: Subset, b: Subset) -> Subset:
    """Tagged-sum carrier with equality pulled back through the embedding."""
    amb = a.ambient
    els = tuple(itertools.chain(
        ((0, u) for u in a.part.elements), ((1, w) for w in b.part.elements)
    ))

    def emb(z):
        tag, v = z
        return a.embed(v) if tag == 0 else b.embed(v)

    eq = lambda z1, z2: amb.eq(emb(z1), emb(z2))
    apart = None
    if amb.apart is not None:
        aap = amb.apart
        apart = lambda z1, z2: aap(emb(z1), emb(z2))
    part = Setoid(els, eq, apart)
    return Subset(amb, part, SetoidMap(part, amb, {z: emb(z) for z in els}))


def subset_intersection(a: Subset, b: Subset) -> Subset:
    """Pairs (u, w) with equal ambient images; embeds through the left leg."""
    amb = a.ambient
    els = tuple(
        (u, w)
        for u in a.part.elements
        for w in b.part.elements
        if amb.eq(a.embed(u), b.embed(w))
    )
    eq = lambda p, q: amb.eq(a.embed(p[0]), a.embed(q[0]))
    apart = None
    if amb.apart is not None:
        aap = amb.apart
        apart = lambda p, q: aap(a.embed(p[0]), a.embed(q[0]))
    part = Setoid(els, eq, apart)
    return Subset(amb, part, SetoidMap(part, amb, {p: a.embed(p[0]) for p in els}))


def subset_product(a: Subset, c: Subset) -> Subset:
    """A × C inside X × Y with the componentwise embedding."""
    from .setoid import product_setoid

    amb = product_setoid(a.ambient, c.ambient)
    els = tuple(itertools.product(a.part.elements, c.part.elements))
    emb = lambda p: (a.embed(p[0]), c.embed(p[1]))
    eq = lambda p, q: amb.eq(emb(p), emb(q))
    apart = None
    if amb.apart is not None:
        aap = amb.apart
        apart = lambda p, q: aap(emb(p), emb(q))
    part = Setoid(els, eq, apart)
    return Subset(amb, part, SetoidMap(part, amb, {p: emb(p) for p in els}))


def image(f: SetoidMap, a: Subset) -> Subset:
    """f(A): the carrier of A with equality pulled back along f ∘ i_A."""
    if a.ambient.elements != f.dom.elements:
        raise SetoidError("subset does not live in the map's domain")
    cod = f.cod
    emb = lambda u: f(a.embed(u))
    eq = lambda u, w: cod.eq(emb(u), emb(w))
    apart = None
    if cod.apart is not None:
        cap = cod.apart
        apart = lambda u, w: cap(emb(u), emb(w))
    part = Setoid(a.part.elements, eq, apart)
    return Subset(cod, part, SetoidMap(part, cod, {u: emb(u) for u in part.elements}))


def preimage(f: SetoidMap, b: Subset) -> Subset:
    """f⁻¹(B): pairs (x, w) with f(x) = i_B(w), embedded by first projection."""
    if b.ambient.elements != f.cod.elements:
        raise SetoidError("subset does not live in the map's codomain")
    dom = f.dom
    els = tuple(
        (x, w)
        for x in dom.elements
        for w in b.part.elements
        if f.cod.eq(f(x), b.embed(w))
    )
    eq = lambda p, q: dom.eq(p[0], q[0]) and b.part.eq(p[1], q[1])
    apart = None
    if dom.apart is not None:
        dap = dom.apart
        apart = lambda p, q: dap(p[0], q[0])
    part = Setoid(els, eq, apart)
    return Subset(dom, part, SetoidMap(part, dom, {p: p[0] for p in els}))


def fiber(f: SetoidMap, y) -> Subset:
    """The extensional subset {x | f(x) = y} of the domain."""
    if y not in f.cod.elements:
        raise SetoidError(f"{y!r} is not a codomain element")
    return Subset.of(f.dom, [x for x in f.dom.elements if f.cod.eq(f(x), y)])


def cofiber(f: SetoidMap, y) -> Subset:
    """The extensional subset {x | f(x) ≠ y}; needs apartness on the codomain."""
    ap = f.cod.require_apartness("cofiber")
    if y not in f.cod.elements:
        raise SetoidError(f"{y!r} is not a codomain element")
    return Subset.of(f.dom, [x for x in f.dom.elements if ap(f(x), y)])


# -- partial functions -------------------------------------------------------


@dataclass(frozen=True)
class PartialFn:
    """(A, i_A, f_A): a subset of the ambient with a value map off its carrier."""

    ambient: Setoid
    dom: Subset
    val: SetoidMap

    def __post_init__(self):
        if self.dom.ambient.elements != self.ambient.elements:
            raise SetoidError("domain subset lives in a different ambient setoid")
        if self.val.dom.elements != self.dom.part.elements:
            raise SetoidError("value map must be defined on the domain carrier")

    @property
    def cod(self) -> Setoid:
        return self.val.cod

    @staticmethod
    def total(f: SetoidMap) -> "PartialFn":
        whole = Subset.whole(f.dom)
        return PartialFn(f.dom, whole, f)

    @staticmethod
    def inclusion(dom: Subset) -> "PartialFn":
        """(A, i_A, i_A) — the identity partial function on A."""
        return PartialFn(dom.ambient, dom, dom.embed)

    def __call__(self, a):
        return self.val(a)


def partial_leq(f: PartialFn, g: PartialFn) -> Optional[SetoidMap]:
    """f ≤ g: a connecting map commuting with both the embeddings and values."""
    e = subset_leq(f.dom, g.dom)
    if e is None:
        return None
    for a in f.dom.part.elements:
        if not g.cod.eq(g.val(e(a)), f.val(a)):
            return None
    return e


def partial_eq(f: PartialFn, g: PartialFn) -> bool:
    return partial_leq(f, g) is not None and partial_leq(g, f) is not None


def partial_compose(g: PartialFn, f: PartialFn) -> PartialFn:
    """g ⊙ f on the pulled-back domain (f_A)⁻¹(B)."""
    if f.cod.elements != g.ambient.elements:
        raise SetoidError("middle ambient mismatch in partial composition")
    amb = f.ambient
    els = tuple(
        (a, b)
        for a in f.dom.part.elements
        for b in g.dom.part.elements
        if f.cod.eq(f.val(a), g.dom.embed(b))
    )
    emb = lambda p: f.dom.embed(p[0])
    eq = lambda p, q: amb.eq(emb(p), emb(q))
    apart = None
    if amb.apart is not None:
        aap = amb.apart
        apart = lambda p, q: aap(emb(p), emb(q))
    part = Setoid(els, eq, apart)
    dom = Subset(amb, part, SetoidMap(part, amb, {p: emb(p) for p in els}))
    val = SetoidMap(part, g.cod, {p: g.val(p[1]) for p in els})
    return PartialFn(amb, dom, val)


def partial_cap(f: PartialFn, g: PartialFn, side: str) -> PartialFn:
    """Left/right intersection: both live on A ∩ B, values from one side."""
    inter = subset_intersection(f.dom, g.dom)
    if side == "l":
        val = SetoidMap(inter.part, f.cod, {p: f.val(p[0]) for p in inter.part.elements})
    elif side == "r":
        val = SetoidMap(inter.part, g.cod, {p: g.val(p[1]) for p in inter.part.elements})
    else:
        raise SetoidError("side must be 'l' or 'r'")
    return PartialFn(f.ambient, inter, val)


def partial_cup(f: PartialFn, g: PartialFn) -> PartialFn:
    """Union by cases on A ∪ B.

    Construction never fails; when f and g disagree on the overlap the case
    table is only an operation, not a function, and equality claims about the
    result are what break (query with `val.is_extensional()`).
    """
    union = subset_union(f.dom, g.dom)

    def value(z):
        tag, v = z
        return f.val(v) if tag == 0 else g.val(v)

    table = {z: value(z) for z in union.part.elements}
    agrees = all(
        f.cod.eq(f.val(a), g.val(b)) for a, b in subset_intersection(f.dom, g.dom).part.elements
    )
    val = SetoidMap(union.part, f.cod, table, validate=agrees)
    return PartialFn(f.ambient, union, val)


def partial_mult2(f: PartialFn, g: PartialFn) -> PartialFn:
    """Pointwise product of 2-valued partial functions on A ∩ B."""
    if f.cod.elements != TWO.elements or g.cod.elements != TWO.elements:
        raise CapabilityError("mult2 requires 2-valued partial functions")
    inter = subset_intersection(f.dom, g.dom)
    val = SetoidMap(
        inter.part,
        TWO,
        {p: f.val(p[0]) * g.val(p[1]) for p in inter.part.elements},
    )
    return PartialFn(f.ambient, inter, val)


def partial_lattice(kind: str, f: PartialFn, g: PartialFn) -> PartialFn:
    if kind == "cap_l":
        return partial_cap(f, g, "l")
    if kind == "cap_r":
        return partial_cap(f, g, "r")
    if kind == "cup":
        return partial_cup(f, g)
    if kind == "mult2":
        return partial_mult2(f, g)
    raise SetoidError(f"unknown partial-function operation {kind!r}")


def all_subsets(ambient: Setoid) -> list[Subset]:
    """Every sub-carrier subset (identity embeddings), in deterministic order."""
    out = []
    n = len(ambient.elements)
    for mask in range(1 << n):
        els = [ambient.elements[k] for k in range(n) if mask >> k & 1]
        out.append(Subset.of(ambient, els))
    return out
