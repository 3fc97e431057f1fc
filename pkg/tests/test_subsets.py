"""Subset order/algebra and partial-function laws."""

import itertools

import pytest

from bishopset.setoid import TWO, Setoid, SetoidError, SetoidMap
from bishopset.subsets import (
    PartialFn,
    Subset,
    all_subsets,
    cofiber,
    fiber,
    image,
    partial_compose,
    partial_eq,
    partial_lattice,
    partial_leq,
    preimage,
    subset_eq,
    subset_intersection,
    subset_leq,
    subset_union,
)

THREE = Setoid.discrete((0, 1, 2))


def test_inclusion_reflexive_and_searches():
    a = Subset.of(TWO, (0,))
    whole = Subset.whole(TWO)
    assert subset_leq(a, a) is not None
    assert subset_leq(a, whole) is not None
    b = Subset.of(TWO, (1,))
    assert subset_leq(a, b) is None


def test_mutual_inclusion_forms_a_valid_equality_witness():
    ambient = Setoid((0, 1, 2), lambda a, b: (a == b) or {a, b} == {0, 1})
    left = Subset.of(ambient, (0,))
    right = Subset.of(ambient, (1,))
    pair = subset_eq(left, right)
    assert pair is not None and pair.is_valid()


def test_inclusion_pairs_are_subsingletons():
    # any two inclusion maps between the same subsets agree pointwise
    ambient = Setoid((0, 1, 2), lambda a, b: (a == b) or {a, b} == {0, 1})
    a = Subset.of(ambient, (0, 1))
    b = Subset.whole(ambient)
    found = []
    for table in itertools.product(b.part.elements, repeat=len(a.part.elements)):
        candidate = dict(zip(a.part.elements, table))
        if all(
            ambient.eq(b.embed(candidate[u]), a.embed(u)) for u in a.part.elements
        ):
            found.append(candidate)
    assert len(found) >= 2
    one = subset_leq(a, b)
    for cand in found:
        assert all(b.part.eq(cand[u], one(u)) for u in a.part.elements)


def test_extensional_subset_requires_extensional_predicate():
    glued = Setoid(("a", "b"), lambda x, y: True)
    with pytest.raises(SetoidError):
        Subset.extensional(glued, lambda e: e == "a")
    whole = Subset.extensional(glued, lambda e: True)
    assert len(whole) == 2


def test_union_intersection_basic_identities():
    a = Subset.of(THREE, (0, 1))
    b = Subset.of(THREE, (1, 2))
    assert subset_eq(subset_intersection(a, a), a) is not None
    assert subset_leq(a, subset_union(a, b)) is not None
    assert subset_union(a, b).key() == frozenset({0, 1, 2})
    assert subset_intersection(a, b).key() == frozenset({1})


def test_distributivity_exhaustive_on_three_points():
    subs = all_subsets(THREE)
    for a, b, c in itertools.product(subs, repeat=3):
        lhs = subset_intersection(a, subset_union(b, c))
        rhs = subset_union(subset_intersection(a, b), subset_intersection(a, c))
        assert subset_eq(lhs, rhs) is not None


def test_predicate_conjunction_matches_intersection_in_the_universe():
    from bishopset.setoid import find_eq_witness

    p = Subset.extensional(THREE, lambda e: e <= 1)
    q = Subset.extensional(THREE, lambda e: e >= 1)
    conj = Subset.extensional(THREE, lambda e: e == 1)
    inter = subset_intersection(p, q)
    assert find_eq_witness(conj.part, inter.part) is not None


def test_image_preimage_under_identity():
    ident = SetoidMap.identity(THREE)
    a = Subset.of(THREE, (0, 2))
    assert subset_eq(image(ident, a), a) is not None
    assert subset_eq(preimage(ident, a), a) is not None


def test_preimage_commutes_with_union_and_intersection():
    f = SetoidMap(THREE, TWO, {0: 0, 1: 0, 2: 1})
    for c, d in itertools.product(all_subsets(TWO), repeat=2):
        assert subset_eq(
            preimage(f, subset_union(c, d)),
            subset_union(preimage(f, c), preimage(f, d)),
        ) is not None
        assert subset_eq(
            preimage(f, subset_intersection(c, d)),
            subset_intersection(preimage(f, c), preimage(f, d)),
        ) is not None


def test_image_intersection_only_includes():
    # frozen counterexample: a constant map on disjoint subsets
    const = SetoidMap.constant(TWO, Setoid.discrete(("c",)), "c")
    a = Subset.of(TWO, (0,))
    b = Subset.of(TWO, (1,))
    lhs = image(const, subset_intersection(a, b))
    rhs = subset_intersection(image(const, a), image(const, b))
    assert subset_leq(lhs, rhs) is not None
    assert subset_leq(rhs, lhs) is None  # the converse genuinely fails
    assert len(lhs) == 0 and len(rhs) == 1


def test_fiber_and_cofiber():
    ident = SetoidMap.identity(TWO)
    assert fiber(ident, 0).key() == frozenset({0})
    assert cofiber(ident, 0).key() == frozenset({1})
    const = SetoidMap.constant(THREE, TWO, 0)
    assert fiber(const, 0).key() == frozenset({0, 1, 2})
    assert cofiber(const, 1).key() == frozenset({0, 1, 2})


def test_equality_witness_gives_contractible_fibers():
    from bishopset.setoid import EqWitness

    x = Setoid.discrete(("a", "b"))
    f = SetoidMap(x, TWO, {"a": 0, "b": 1})
    g = SetoidMap(TWO, x, {0: "a", 1: "b"})
    assert EqWitness(f, g).is_valid()
    for y in TWO.elements:
        fib = fiber(f, y)
        centre = g(y)
        assert all(fib.part.eq(centre, u) for u in fib.part.elements)


def _total(f: SetoidMap) -> PartialFn:
    return PartialFn.total(f)


def test_partial_composition_unit_laws():
    a = Subset.of(THREE, (0, 1))
    val = SetoidMap(a.part, TWO, {0: 0, 1: 1})
    f = PartialFn(THREE, a, val)
    ident = PartialFn.inclusion(a)
    assert partial_eq(partial_compose(f, ident), f)


def test_partial_composition_associativity_on_a_chain():
    a = Subset.of(THREE, (0, 1))
    f = PartialFn(THREE, a, SetoidMap(a.part, TWO, {0: 0, 1: 1}))
    b = Subset.of(TWO, (0,))
    g = PartialFn(TWO, b, SetoidMap(b.part, THREE, {0: 2}))
    c = Subset.of(THREE, (2,))
    h = PartialFn(THREE, c, SetoidMap(c.part, TWO, {2: 1}))
    left = partial_compose(partial_compose(h, g), f)
    right = partial_compose(h, partial_compose(g, f))
    assert partial_eq(left, right)


def test_composition_with_empty_domain_is_empty():
    empty = Subset.empty(THREE)
    f = PartialFn(THREE, empty, SetoidMap(empty.part, TWO, {}))
    g = _total(SetoidMap.identity(TWO))
    assert len(partial_compose(g, f).dom) == 0


def test_partial_lattice_laws():
    a = Subset.of(THREE, (0, 1))
    b = Subset.of(THREE, (1, 2))
    f = PartialFn(THREE, a, SetoidMap(a.part, TWO, {0: 0, 1: 1}))
    g = PartialFn(THREE, b, SetoidMap(b.part, TWO, {1: 1, 2: 0}))
    assert partial_eq(
        partial_lattice("cap_l", f, f), partial_lattice("cap_r", f, f)
    )
    cup = partial_lattice("cup", f, g)
    assert partial_leq(f, cup) is not None
    assert partial_leq(g, cup) is not None
    capl = partial_lattice("cap_l", f, g)
    assert partial_leq(capl, f) is not None
    capr = partial_lattice("cap_r", f, g)
    assert partial_leq(capr, g) is not None
    # agreement on the overlap makes left and right intersections equal
    assert partial_eq(capl, capr)


def test_mult2_truth_table_on_overlap():
    # oracle: the four-case product table on a 2-point overlap
    amb = Setoid.discrete((0, 1))
    whole = Subset.whole(amb)
    for fa in (0, 1):
        for fb in (0, 1):
            f = PartialFn(amb, whole, SetoidMap(amb, TWO, {0: fa, 1: fb}))
            for ga in (0, 1):
                for gb in (0, 1):
                    g = PartialFn(amb, whole, SetoidMap(amb, TWO, {0: ga, 1: gb}))
                    prod = partial_lattice("mult2", f, g)
                    for (u, w) in prod.dom.part.elements:
                        assert prod((u, w)) == f(u) * g(w)


def test_cup_without_agreement_still_constructs():
    a = Subset.of(TWO, (0,))
    b = Subset.of(Setoid.codiscrete((0, 1)), (1,))
    amb = Setoid.codiscrete((0, 1))
    f = PartialFn(amb, Subset.of(amb, (0,)), SetoidMap(Subset.of(amb, (0,)).part, TWO, {0: 0}))
    g = PartialFn(amb, Subset.of(amb, (1,)), SetoidMap(Subset.of(amb, (1,)).part, TWO, {1: 1}))
    cup = partial_lattice("cup", f, g)
    assert not cup.val.is_extensional()
