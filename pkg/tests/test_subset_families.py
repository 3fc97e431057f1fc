"""Interior unions, intersections, coverings/gluing, semi-distributivity,
special families, and the complemented/partial variants."""

import itertools

import pytest

from bishopset.complemented import Complemented, compl_eq, compl_op1
from bishopset.families import Family, check_family
from bishopset.setoid import (
    TWO,
    Setoid,
    SetoidError,
    SetoidMap,
    all_maps,
    check_setoid,
    find_eq_witness,
)
from bishopset.subset_families import (
    ComplementedFamily,
    PartialFamily,
    SemiDistData,
    SubsetFamily,
    complemented_family_neg,
    complemented_family_preimage,
    complemented_intersection,
    complemented_union,
    compose_with_index_map,
    detachable_complement,
    detachable_family,
    eq_class_family,
    family_intersection,
    fiber_family,
    cofiber_family,
    find_subsets_map,
    glue,
    glue_is_unique,
    interior_union,
    is_covering,
    is_disjoint,
    partials_family_compose,
    semi_distribute,
    special_families,
    subset_family_is_set,
    subsets_map,
)
from bishopset.subsets import (
    PartialFn,
    Subset,
    image,
    preimage,
    subset_eq,
    subset_intersection,
    subset_leq,
    subset_union,
)

FOUR = Setoid.discrete((0, 1, 2, 3))
THREE = Setoid.discrete((0, 1, 2))


def two_member_family(amb, first, second) -> SubsetFamily:
    return SubsetFamily.of_two(Subset.of(amb, first), Subset.of(amb, second))


def test_constant_family_union_and_intersection_recover_the_member():
    idx = Setoid.discrete(("i", "j"))
    a = Subset.of(THREE, (0, 2))
    fam = SubsetFamily.constant(THREE, idx, a)
    assert subset_eq(interior_union(fam), a) is not None
    assert subset_eq(family_intersection(fam, "i"), a) is not None


def test_two_family_union_and_intersection_match_binary_ops():
    a = Subset.of(THREE, (0, 1))
    b = Subset.of(THREE, (1, 2))
    fam = SubsetFamily.of_two(a, b)
    assert subset_eq(interior_union(fam), subset_union(a, b)) is not None
    assert subset_eq(family_intersection(fam, 0), subset_intersection(a, b)) is not None
    # base-index independence
    assert (
        subset_eq(family_intersection(fam, 0), family_intersection(fam, 1))
        is not None
    )


def test_union_and_intersection_commute_with_maps():
    f = SetoidMap(THREE, FOUR, {0: 0, 1: 0, 2: 3})
    a = Subset.of(THREE, (0, 1))
    b = Subset.of(THREE, (2,))
    fam = SubsetFamily.of_two(a, b)
    lhs = image(f, interior_union(fam))
    rhs = interior_union(SubsetFamily.of_two(image(f, a), image(f, b)))
    assert subset_eq(lhs, rhs) is not None

    c = Subset.of(FOUR, (0, 1))
    d = Subset.of(FOUR, (0, 3))
    gfam = SubsetFamily.of_two(c, d)
    lhs = preimage(f, family_intersection(gfam, 0))
    rhs = family_intersection(
        SubsetFamily.of_two(preimage(f, c), preimage(f, d)), 0
    )
    assert subset_eq(lhs, rhs) is not None


def test_sigma_vs_union_equality_directions():
    from bishopset.families import sigma_setoid

    # disjoint members over a tight index: the union map is an embedding
    a = Subset.of(FOUR, (0, 1))
    b = Subset.of(FOUR, (2, 3))
    fam = SubsetFamily.of_two(a, b)
    sig = sigma_setoid(fam.family, with_apartness=False)
    union = interior_union(fam)
    for p, q in itertools.product(sig.elements, repeat=2):
        if sig.eq(p, q):
            assert union.part.eq(p, q)  # Σ-equality implies ∪-equality
        if union.part.eq(p, q):
            assert sig.eq(p, q)  # disjointness turns the converse on

    # overlapping members: the converse fails somewhere
    fam2 = SubsetFamily.of_two(Subset.of(FOUR, (0, 1)), Subset.of(FOUR, (1, 2)))
    sig2 = sigma_setoid(fam2.family, with_apartness=False)
    union2 = interior_union(fam2)
    broken = [
        (p, q)
        for p, q in itertools.product(sig2.elements, repeat=2)
        if union2.part.eq(p, q) and not sig2.eq(p, q)
    ]
    assert broken


def test_any_two_subsets_maps_agree():
    a = Subset.of(THREE, (0,))
    b = Subset.of(THREE, (0, 1))
    src = SubsetFamily.of_two(a, a)
    dst = SubsetFamily.of_two(b, b)
    found = find_subsets_map(src, dst)
    assert found is not None
    # exhaustive: every valid subsets-map equals the found one
    for t0 in all_maps(src.carrier(0), dst.carrier(0)):
        for t1 in all_maps(src.carrier(1), dst.carrier(1)):
            try:
                cand = subsets_map(src, dst, {0: t0, 1: t1})
            except SetoidError:
                continue
            assert cand.eq_to(found)


def test_intersection_membership_matches_pi_membership():
    from bishopset.families import pi_setoid

    a = Subset.of(THREE, (0, 1))
    fam = SubsetFamily.of_two(a, a)
    inter = family_intersection(fam, 0)
    pi = pi_setoid(fam.family)
    inter_keys = {t for t in inter.part.elements}
    pi_keys = {t for t in pi.elements}
    assert inter_keys <= pi_keys


def test_union_and_intersection_maps_are_embeddings():
    from bishopset.subset_families import interior_union

    a = Subset.of(THREE, (0,))
    b = Subset.of(THREE, (0, 1))
    src = SubsetFamily.of_two(a, a)
    dst = SubsetFamily.of_two(b, b)
    fmap = find_subsets_map(src, dst)
    src_union, dst_union = interior_union(src), interior_union(dst)
    table = {
        (i, x): (i, fmap.component(i)(x)) for i, x in src_union.part.elements
    }
    lifted = SetoidMap(src_union.part, dst_union.part, table)
    assert lifted.is_embedding()
    src_int = family_intersection(src, 0)
    dst_int = family_intersection(dst, 0)
    itable = {
        t: tuple(fmap.component(i)(v) for i, v in zip((0, 1), t))
        for t in src_int.part.elements
    }
    ilifted = SetoidMap(src_int.part, dst_int.part, itable)
    assert ilifted.is_embedding()


# -- coverings and gluing -----------------------------------------------------------


def test_even_odd_partition_of_four():
    evens = Subset.of(FOUR, (0, 2))
    odds = Subset.of(FOUR, (1, 3))
    fam = SubsetFamily.of_two(evens, odds)
    assert is_covering(fam)
    assert is_disjoint(fam) is None


def test_overlapping_doubletons_cover_but_do_not_partition():
    fam = two_member_family(THREE, (0, 1), (1, 2))
    assert is_covering(fam)
    assert is_disjoint(fam) is not None


def test_constant_singleton_family_is_not_a_covering():
    idx = Setoid.discrete(("i", "j"))
    fam = SubsetFamily.constant(THREE, idx, Subset.of(THREE, (0,)))
    assert not is_covering(fam)


def test_glue_on_the_three_point_covering():
    amb = Setoid.discrete((1, 2, 3))
    fam = two_member_family(amb, (1, 2), (2, 3))
    pieces = {
        0: SetoidMap(fam.carrier(0), TWO, {1: 0, 2: 1}),
        1: SetoidMap(fam.carrier(1), TWO, {2: 1, 3: 1}),
    }
    glued = glue(fam, pieces, TWO)
    assert glued.table == {1: 0, 2: 1, 3: 1}
    assert glue_is_unique(fam, pieces, TWO, glued)


def test_glue_rejects_overlap_disagreement_with_the_witness():
    amb = Setoid.discrete((1, 2, 3))
    fam = two_member_family(amb, (1, 2), (2, 3))
    pieces = {
        0: SetoidMap(fam.carrier(0), TWO, {1: 0, 2: 1}),
        1: SetoidMap(fam.carrier(1), TWO, {2: 0, 3: 1}),
    }
    with pytest.raises(SetoidError) as err:
        glue(fam, pieces, TWO)
    assert "2" in str(err.value)


def test_glue_single_member_covering():
    fam = SubsetFamily.of_two(Subset.whole(THREE), Subset.whole(THREE))
    pieces = {
        0: SetoidMap(fam.carrier(0), TWO, {0: 1, 1: 0, 2: 1}),
        1: SetoidMap(fam.carrier(1), TWO, {0: 1, 1: 0, 2: 1}),
    }
    glued = glue(fam, pieces, TWO)
    assert glued.eq_to(pieces[0])


def test_glue_on_partitions_has_vacuous_overlap():
    evens = Subset.of(FOUR, (0, 2))
    odds = Subset.of(FOUR, (1, 3))
    fam = SubsetFamily.of_two(evens, odds)
    pieces = {
        0: SetoidMap(fam.carrier(0), TWO, {0: 0, 2: 1}),
        1: SetoidMap(fam.carrier(1), TWO, {1: 1, 3: 0}),
    }
    glued = glue(fam, pieces, TWO)
    assert glued.table == {0: 0, 1: 1, 2: 1, 3: 0}
    assert glue_is_unique(fam, pieces, TWO, glued)


def test_missing_covering_is_reported_with_the_point():
    fam = two_member_family(THREE, (0,), (1,))
    pieces = {
        0: SetoidMap(fam.carrier(0), TWO, {0: 0}),
        1: SetoidMap(fam.carrier(1), TWO, {1: 0}),
    }
    with pytest.raises(SetoidError) as err:
        glue(fam, pieces, TWO)
    assert "2" in str(err.value)


# -- semi-distributivity --------------------------------------------------------------


def _semi_data(lam_members, p_members, amb, index_elements):
    i_setoid = Setoid.discrete(tuple(index_elements))
    lam = SubsetFamily.of_subsets(
        amb,
        i_setoid,
        {i: Subset.of(amb, els) for i, els in lam_members.items()},
    )
    k_setoid = Setoid.discrete(tuple(sorted(p_members)))
    pfam = SubsetFamily.of_subsets(
        i_setoid,
        k_setoid,
        {k: Subset.of(i_setoid, els) for k, els in p_members.items()},
    )
    return SemiDistData(lam, k_setoid, pfam, sorted(p_members)[0])


def test_semi_distributivity_single_factor_is_an_isomorphism():
    data = _semi_data(
        {"i0": (0,), "i1": (1, 2)},
        {"k": ("i0", "i1")},
        THREE,
        ("i0", "i1"),
    )
    rep, v, w, theta = semi_distribute(data)
    assert rep.ok
    assert theta is not None
    assert subset_eq(v, w) is not None


def test_semi_distributivity_grid_is_an_inclusion():
    amb = FOUR
    data = _semi_data(
        {"i0": (0,), "i1": (1,), "i2": (2,), "i3": (3,)},
        {"k0": ("i0", "i1"), "k1": ("i0", "i2")},
        amb,
        ("i0", "i1", "i2", "i3"),
    )
    rep, v, w, theta = semi_distribute(data)
    assert rep.ok
    assert theta.is_embedding()
    # oracle: V = members reachable by a common selector = λ(i0) = {0};
    # W = (λi0 ∪ λi1) ∩ (λi0 ∪ λi2) = {0,1} ∩ {0,2} = {0}
    assert v.key() == frozenset({0})
    assert w.key() == frozenset({0})


def test_semi_distributivity_reports_empty_selector_set():
    data = _semi_data(
        {"i0": (0,), "i1": (1,)},
        {"k0": ("i0",), "k1": ("i1",)},
        THREE,
        ("i0", "i1"),
    )
    rep, v, w, theta = semi_distribute(data)
    assert theta is None
    assert any(
        e.name == "selector-set-inhabited" and e.status == "fail"
        for e in rep.entries
    )


# -- special families -----------------------------------------------------------------


def test_equality_class_family_on_discrete_three():
    fam = special_families("eql", THREE)
    assert len(fam.index.elements) == 3
    for i in THREE.elements:
        assert fam.member(i).key() == frozenset({i})
    ok, _ = subset_family_is_set(fam)
    assert ok


def test_fiber_family_of_a_surjection_is_a_set():
    f = SetoidMap(THREE, TWO, {0: 0, 1: 0, 2: 1})
    fam = fiber_family(f)
    ok, _ = subset_family_is_set(fam)
    assert ok


def test_cofiber_family_and_tightness():
    f = SetoidMap(THREE, TWO, {0: 0, 1: 0, 2: 1})
    fam = cofiber_family(f)
    ok, _ = subset_family_is_set(fam)
    assert ok  # denial inequality on 2 is tight


def test_fiber_family_of_nonsurjection_need_not_be_a_set():
    cod = Setoid.discrete((0, 1, 2))
    f = SetoidMap.constant(THREE, cod, 0)
    fam = fiber_family(f)
    ok, witness = subset_family_is_set(fam)
    assert not ok and witness == (1, 2)


def test_detachable_family_complement_involution_and_de_morgan():
    fam = detachable_family(TWO)
    for t in fam.index.elements:
        assert detachable_complement(detachable_complement(t)) == t
        comp_member = fam.member(detachable_complement(t))
        # complement member carries [f = 0]
        expected = frozenset(
            e for e, v in zip(TWO.elements, t) if v == 0
        )
        assert comp_member.key() == TWO.saturate(expected) or comp_member.key() == expected
    for s, t in itertools.product(fam.index.elements, repeat=2):
        meet = tuple(a * b for a, b in zip(s, t))
        join = tuple(a + b - a * b for a, b in zip(s, t))
        assert detachable_complement(meet) == tuple(
            1 - a * b for a, b in zip(s, t)
        )
        lhs = subset_intersection(fam.member(s), fam.member(t))
        assert subset_eq(lhs, fam.member(meet)) is not None
        rhs = subset_union(fam.member(s), fam.member(t))
        assert subset_eq(rhs, fam.member(join)) is not None


# -- complemented families ---------------------------------------------------------


def _compl_family():
    members = {
        "i": Complemented.of(THREE, (0,), (1,)),
        "j": Complemented.of(THREE, (0, 2), (1,)),
    }
    idx = Setoid.discrete(("i", "j"))
    return ComplementedFamily.of_members(THREE, idx, members)


def test_complemented_union_de_morgan():
    cf = _compl_family()
    base = "i"
    lhs = compl_op1("neg", complemented_union(cf, base))
    rhs = complemented_intersection(complemented_family_neg(cf), base)
    assert compl_eq(lhs, rhs)
    lhs = compl_op1("neg", complemented_intersection(cf, base))
    rhs = complemented_union(complemented_family_neg(cf), base)
    assert compl_eq(lhs, rhs)


def test_singleton_complemented_family_collapses():
    idx = Setoid.discrete(("only",))
    member = Complemented.of(THREE, (2,), (0, 1))
    cf = ComplementedFamily.of_members(THREE, idx, {"only": member})
    assert compl_eq(complemented_union(cf, "only"), member)
    assert compl_eq(complemented_intersection(cf, "only"), member)


def test_member_below_union_and_preimage_commutes():
    cf = _compl_family()
    from bishopset.complemented import compl_subseteq

    union = complemented_union(cf, "i")
    for i in cf.index.elements:
        assert compl_subseteq(cf.member(i), union)
    f = SetoidMap(THREE, THREE, {0: 0, 1: 1, 2: 0})
    back = complemented_family_preimage(f, cf)
    lhs = complemented_union(back, "i")
    rhs_members = {
        i: Complemented(
            THREE, preimage(f, cf.member(i).pos), preimage(f, cf.member(i).neg)
        )
        for i in cf.index.elements
    }
    from bishopset.complemented import compl_preimage

    rhs = compl_preimage(f, complemented_union(cf, "i"))
    assert compl_eq(lhs, rhs)


def test_product_with_fixed_complemented_distributes():
    cf = _compl_family()
    a = Complemented.of(TWO, (0,), (1,))
    lhs = compl_op1("times", a, complemented_union(cf, "i"))
    parts = {
        i: compl_op1("times", a, cf.member(i)) for i in cf.index.elements
    }
    prod_amb = parts["i"].ambient
    prod_fam = ComplementedFamily.of_members(
        prod_amb, cf.index, parts
    )
    rhs = complemented_union(prod_fam, "i")
    assert compl_eq(lhs, rhs)


# -- partial-function families -------------------------------------------------------


def _partial_family(values):
    a = Subset.of(THREE, (0, 1))
    fam = SubsetFamily.of_two(a, a)
    return PartialFamily(
        fam,
        TWO,
        {
             i: SetoidMap(fam.carrier(i), TWO, dict(values))
            for i in fam.index.elements
        },
    )


def test_partials_compose_with_identity_family():
    lam = _partial_family({0: 0, 1: 1})
    ident = PartialFamily.of_inclusions(
        SubsetFamily.of_two(Subset.whole(TWO), Subset.whole(TWO))
    )
    composed = partials_family_compose(ident, lam)
    for i in lam.index.elements:
        from bishopset.subsets import partial_eq

        assert partial_eq(composed.member(i), lam.member(i))


def test_empty_domain_component_propagates():
    a = Subset.empty(THREE)
    fam = SubsetFamily.of_two(a, a)
    lam = PartialFamily(
        fam, TWO, {i: SetoidMap(fam.carrier(i), TWO, {}) for i in (0, 1)}
    )
    m = _partial_family({0: 0, 1: 1})
    target = PartialFamily.of_inclusions(
        SubsetFamily.of_two(Subset.whole(TWO), Subset.whole(TWO))
    )
    composed = partials_family_compose(target, lam)
    for i in (0, 1):
        assert len(composed.member(i).dom) == 0


def test_two_index_compose_transports_are_paired():
    # transports carry (u, w) ↦ (λ(u), μ(w)) componentwise
    amb = THREE
    a = Subset.of(amb, (0, 1))
    dom_fam = SubsetFamily.of_two(a, a)
    lam = PartialFamily(
        dom_fam,
        TWO,
        {i: SetoidMap(dom_fam.carrier(i), TWO, {0: 0, 1: 1}) for i in (0, 1)},
    )
    m_dom = SubsetFamily.of_two(Subset.of(TWO, (0, 1)), Subset.of(TWO, (0, 1)))
    m = PartialFamily(
        m_dom,
        THREE,
        {i: SetoidMap(m_dom.carrier(i), THREE, {0: 2, 1: 0}) for i in (0, 1)},
    )
    composed = partials_family_compose(m, lam)
    fam = composed.domains.family
    for (i, j) in ((0, 0), (1, 1)):
        t = fam.transport(i, j)
        for (u, w) in fam.carrier(i).elements:
            assert t((u, w)) == (u, w)
    assert check_family(fam).ok
