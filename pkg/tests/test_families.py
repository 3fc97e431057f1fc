"""Family laws, Σ/Π constructions, distributivity, sets of sets, direct
families."""

import itertools

import pytest

from bishopset.families import (
    DirectedIndex,
    DirectFamily,
    Family,
    FamilyMap,
    ac_distribute,
    check_directed,
    check_direct_family,
    check_family,
    check_family_map_raw,
    diagonal,
    direct_pi,
    direct_sigma,
    direct_sigma_first_projection_table,
    direct_sigma_map,
    family_compose,
    family_coproduct,
    family_funspace,
    family_product,
    is_set_of_sets,
    lift_through_carriers,
    pi_map,
    pi_projection,
    pi_setoid,
    set_of_sets_setoid,
    setoid_coproduct,
    sigma_injection,
    sigma_map,
    sigma_setoid,
    sigma_surjectivity_modulus,
)
from bishopset.setoid import (
    TWO,
    CapabilityError,
    EqWitness,
    Setoid,
    SetoidError,
    SetoidMap,
    check_setoid,
    find_eq_witness,
    function_space,
    product_setoid,
    swap_two,
)

A = Setoid.discrete(("a", "b"))
B = Setoid.discrete(("c",))


def test_constant_and_two_family_pass_laws():
    idx = Setoid.discrete((0, 1, 2))
    assert check_family(Family.constant(idx, A)).ok
    assert check_family(Family.of_two(A, B)).ok


def test_broken_triangle_reports_a_witness():
    # a 3-chain index where the long transport disagrees with the composite
    idx = Setoid.codiscrete((0, 1, 2))
    x = Setoid.discrete(("u", "v"))
    ident = SetoidMap.identity(x)
    sw = SetoidMap(x, x, {"u": "v", "v": "u"})
    transports = {}
    for i, j in diagonal(idx):
        transports[(i, j)] = ident
    transports[(0, 1)] = sw
    transports[(1, 0)] = sw
    transports[(1, 2)] = sw
    transports[(2, 1)] = sw
    # leaving (0,2) as the identity breaks the triangle sw ∘ sw ≠ id ... it
    # equals id, so break it the other way: (0,2) as sw
    transports[(0, 2)] = sw
    transports[(2, 0)] = sw
    fam = Family(idx, {i: x for i in idx.elements}, transports)
    rep = check_family(fam)
    assert not rep.ok
    assert rep.failures()[0].name == "transport-triangle"


def test_sigma_of_two_disjoint_discretes_has_three_classes():
    fam = Family.of_two(A, B)
    sig = sigma_setoid(fam)
    assert len(sig.elements) == 3
    assert len(sig.classes()) == 3
    assert check_setoid(sig).ok
    assert sig.is_discrete() and sig.is_tight()


def test_sigma_over_codiscrete_constant_family_collapses_to_the_value():
    idx = Setoid.codiscrete((0, 1, 2))
    fam = Family.constant(idx, A)
    sig = sigma_setoid(fam)
    # oracle: quotient size equals |A| (indices are all identified)
    assert len(sig.classes()) == len(A.elements)
    assert find_eq_witness(sig, A) is not None


def test_sigma_distributes_over_coproducts():
    idx = Setoid.discrete((0, 1))
    lam = Family.over_discrete(idx, {0: A, 1: B})
    mu = Family.over_discrete(idx, {0: B, 1: B})
    lhs = sigma_setoid(family_coproduct(lam, mu), with_apartness=False)
    rhs = setoid_coproduct(
        sigma_setoid(lam, with_apartness=False),
        sigma_setoid(mu, with_apartness=False),
    )
    witness = find_eq_witness(lhs, rhs)
    assert witness is not None and witness.is_valid()


def test_pi_of_two_family_is_the_product():
    fam = Family.of_two(A, B)
    pi = pi_setoid(fam)
    prod = product_setoid(A, B)
    assert len(pi.elements) == len(A.elements) * len(B.elements)
    witness = find_eq_witness(pi, prod)
    assert witness is not None and witness.is_valid()


def test_pi_can_be_empty_and_is_reported():
    idx = Setoid.codiscrete((0, 1))
    x = Setoid.discrete(("u", "v"))
    collapse = SetoidMap(x, x, {"u": "u", "v": "u"})
    # a non-invertible transport over equal indices breaks the witness law
    broken = Family(idx, {0: x, 1: x}, {
        (0, 0): SetoidMap.identity(x), (1, 1): SetoidMap.identity(x),
        (0, 1): collapse, (1, 0): collapse,
    })
    rep = check_family(broken)
    assert not rep.ok
    # its table setoid thins down to the fixed point of the collapse
    assert len(pi_setoid(broken).elements) == 1
    # over a direct family the collapse is a legitimate modulus
    d = DirectedIndex.chain((0, 1))
    fam = DirectFamily(d, {0: x, 1: x}, {
        (0, 0): SetoidMap.identity(x), (1, 1): SetoidMap.identity(x),
        (0, 1): collapse,
    })
    tables = direct_pi(fam)
    # oracle: the second coordinate is forced to "u", the first is free
    assert len(tables.elements) == 2


def test_constant_pi_is_the_function_space():
    # explicit mutually inverse pair: tables are value tuples on both sides
    idx = Setoid.discrete((0, 1, 2))
    fam = Family.constant(idx, A)
    pi = pi_setoid(fam)
    fs = function_space(idx, A)
    fwd = SetoidMap(pi, fs, {t: t for t in pi.elements})
    bwd = SetoidMap(fs, pi, {t: t for t in fs.elements})
    assert EqWitness(fwd, bwd).is_valid()


def test_family_map_naturality_and_sigma_pi_actions():
    idx = Setoid.discrete((0, 1))
    lam = Family.over_discrete(idx, {0: A, 1: A})
    mu = Family.over_discrete(idx, {0: TWO, 1: TWO})
    comp = {
        0: SetoidMap(A, TWO, {"a": 0, "b": 1}),
        1: SetoidMap(A, TWO, {"a": 1, "b": 0}),
    }
    fmap = FamilyMap(lam, mu, comp)
    smap = sigma_map(fmap)
    assert smap.is_embedding()  # both components are embeddings
    pmap = pi_map(fmap)
    assert pmap.is_embedding()

    ident = FamilyMap.identity(lam)
    assert sigma_map(ident).eq_to(SetoidMap.identity(sigma_setoid(lam)))
    assert pi_map(ident).eq_to(SetoidMap.identity(pi_setoid(lam)))


def test_sigma_injections_commute_and_embed():
    fam = Family.of_two(A, B)
    sig = sigma_setoid(fam)
    for i in (0, 1):
        inj = sigma_injection(fam, i, sig)
        assert inj.is_embedding()


def test_surjectivity_modulus_transfers_to_sigma():
    idx = Setoid.discrete((0,))
    big = Setoid.discrete(("x", "y"))
    small = Setoid.discrete(("s",))
    onto = SetoidMap(big, small, {"x": "s", "y": "s"})
    back = SetoidMap(small, big, {"s": "x"})
    lam = Family.over_discrete(idx, {0: big})
    mu = Family.over_discrete(idx, {0: small})
    fmap = FamilyMap(lam, mu, {0: onto})
    modulus = FamilyMap(mu, lam, {0: back})
    smap = sigma_map(fmap)
    sigma_mod = sigma_surjectivity_modulus(fmap, modulus)
    assert all(
        smap.cod.eq(smap(sigma_mod(p)), p) for p in smap.cod.elements
    )


def test_product_and_funspace_of_constant_families_are_constant():
    idx = Setoid.discrete((0, 1))
    cx = Family.constant(idx, A)
    cy = Family.constant(idx, B)
    prod = family_product(cx, cy)
    target = Family.constant(idx, product_setoid(A, B))
    # explicit mutually inverse family-maps exist index-wise
    for i in idx.elements:
        assert find_eq_witness(prod.carrier(i), target.carrier(i)) is not None
    fun = family_funspace(cx, cy)
    ftarget = Family.constant(idx, function_space(A, B))
    for i in idx.elements:
        assert find_eq_witness(fun.carrier(i), ftarget.carrier(i)) is not None
    assert check_family(prod).ok and check_family(fun).ok


def test_compose_with_identity_is_definitional():
    idx = Setoid.discrete((0, 1))
    fam = Family.over_discrete(idx, {0: A, 1: B})
    composed = family_compose(fam, SetoidMap.identity(idx))
    assert composed.carriers == fam.carriers
    for key in fam.transports:
        assert composed.transports[key] is fam.transports[key]


def test_map_space_equals_pi_of_function_space_family():
    idx = Setoid.discrete((0, 1))
    lam = Family.over_discrete(idx, {0: A, 1: B})
    mu = Family.over_discrete(idx, {0: TWO, 1: TWO})
    fs_fam = family_funspace(lam, mu)
    pi = pi_setoid(fs_fam)
    # oracle: family-maps are exactly pairs of component maps (discrete index)
    from bishopset.setoid import all_maps

    count = len(list(all_maps(A, TWO))) * len(list(all_maps(B, TWO)))
    assert len(pi.elements) == count


# -- distributivity ---------------------------------------------------------------


def brute_force_sides(r, xs, ys):
    """Independent enumeration of both sides of the choice equivalence."""
    from bishopset.families import (
        graph_family,
        sigma_over_first,
        x_component,
    )
    from bishopset.setoid import all_maps, tuple_to_map

    first = sigma_over_first(r, xs, ys)
    lhs = pi_setoid(first)
    rhs_count = 0
    fs = function_space(xs, ys)
    for t in fs.elements:
        f = tuple_to_map(t, xs, ys)
        graph = graph_family(r, xs, ys, f)
        rhs_count += len(pi_setoid(graph).elements)
    return lhs, rhs_count


@pytest.mark.parametrize("sizes", [
    (1, 1, 1, 1),
    (1, 2, 1, 2),
    (2, 1, 2, 1),
    (1, 1, 2, 2),
    (2, 2, 1, 1),
    (2, 2, 2, 2),
    (2, 1, 1, 2),
])
def test_choice_map_is_a_bijection(sizes):
    xs = Setoid.discrete(tuple(f"x{k}" for k in range(2)))
    ys = Setoid.discrete(tuple(f"y{k}" for k in range(2)))
    prod = product_setoid(xs, ys)
    carriers = {
        cell: Setoid.discrete(tuple(f"r{cell}{n}" for n in range(size)))
        for cell, size in zip(prod.elements, sizes)
    }
    r = Family.over_discrete(prod, carriers)
    ac, lhs, rhs, sel = ac_distribute(r, xs, ys)
    assert check_family(sel).ok
    oracle_lhs, oracle_rhs_count = brute_force_sides(r, xs, ys)
    assert len(lhs.elements) == len(oracle_lhs.elements)
    assert len(rhs.elements) == oracle_rhs_count
    # injective plus equal finite cardinalities makes the map a bijection
    assert ac.is_embedding()
    assert len(lhs.elements) == len(rhs.elements)
    assert ac.is_surjective()


def test_singleton_fibers_reduce_both_sides_to_the_function_space():
    xs = Setoid.discrete(("x0", "x1"))
    ys = Setoid.discrete(("y0", "y1"))
    prod = product_setoid(xs, ys)
    r = Family.over_discrete(
        prod, {cell: Setoid.discrete((f"s{cell}",)) for cell in prod.elements}
    )
    ac, lhs, rhs, _ = ac_distribute(r, xs, ys)
    # oracle: singleton fibers leave exactly one choice per function
    expected = len(function_space(xs, ys).elements)
    assert len(lhs.elements) == expected
    assert len(rhs.elements) == expected
    assert ac.is_embedding() and ac.is_surjective()


# -- sets of sets -----------------------------------------------------------------


def test_two_family_of_nonisomorphic_sets_is_a_set_of_sets():
    fam = Family.of_two(A, B)  # |A| = 2, |B| = 1: no witness exists
    ok, _ = is_set_of_sets(fam)
    assert ok


def test_constant_family_over_two_unequal_indices_is_not():
    idx = Setoid.discrete((0, 1))
    fam = Family.constant(idx, A)
    ok, witness = is_set_of_sets(fam)
    assert not ok and witness == (0, 1)


def test_lift_requires_set_of_sets_with_counterexample():
    idx = Setoid.discrete((0, 1))
    fam = Family.constant(idx, A)
    f = SetoidMap(idx, TWO, {0: 0, 1: 1})
    with pytest.raises(CapabilityError):
        lift_through_carriers(fam, f)


def test_lift_of_identity_commutes():
    fam = Family.of_two(A, B)
    f = SetoidMap(TWO, TWO, {0: 0, 1: 1})
    lifted = lift_through_carriers(fam, f)
    classes = set_of_sets_setoid(fam)
    for i in classes.elements:
        assert TWO.eq(lifted(i), f(i))


# -- directed families --------------------------------------------------------------


def test_modulus_laws_on_a_chain():
    d = DirectedIndex.chain((0, 1, 2, 3))
    assert check_directed(d).ok


def test_delta_violation_is_an_input_error():
    s = Setoid.discrete((0, 1))
    with pytest.raises(SetoidError):
        DirectedIndex(s, lambda a, b: a <= b, lambda a, b: 0)


def test_chain_collapse_has_one_class():
    d = DirectedIndex.chain((1, 2))
    x1 = Setoid.discrete(("a", "b"))
    x2 = Setoid.discrete(("c",))
    fam = DirectFamily(
        d,
        {1: x1, 2: x2},
        {
            (1, 1): SetoidMap.identity(x1),
            (2, 2): SetoidMap.identity(x2),
            (1, 2): SetoidMap.constant(x1, x2, "c"),
        },
    )
    assert check_direct_family(fam).ok
    sig = direct_sigma(fam)
    assert len(sig.classes()) == 1
    assert check_setoid(sig).ok


def test_constant_direct_family_recovers_the_value():
    d = DirectedIndex.chain((0, 1, 2))
    fam = DirectFamily.constant(d, A)
    sig = direct_sigma(fam)
    assert len(sig.classes()) == len(A.elements)
    assert find_eq_witness(sig, A) is not None


def test_direct_sigma_map_embeds_when_components_do():
    d = DirectedIndex.chain((0, 1))
    src = DirectFamily.constant(d, A)
    big = Setoid.discrete(("a", "b", "z"))
    inc = SetoidMap(A, big, {"a": "a", "b": "b"})
    dst = DirectFamily.constant(d, big)
    smap = direct_sigma_map(src, dst, {0: inc, 1: inc})
    assert smap.is_embedding()


def test_first_projection_is_raw_only():
    d = DirectedIndex.chain((1, 2))
    x1 = Setoid.discrete(("a", "b"))
    x2 = Setoid.discrete(("c",))
    fam = DirectFamily(
        d,
        {1: x1, 2: x2},
        {
            (1, 1): SetoidMap.identity(x1),
            (2, 2): SetoidMap.identity(x2),
            (1, 2): SetoidMap.constant(x1, x2, "c"),
        },
    )
    table = direct_sigma_first_projection_table(fam)
    sig = direct_sigma(fam)
    # the table does not respect the Σ-equality: equal pairs, unequal indices
    assert sig.eq((1, "a"), (2, "c")) and table[(1, "a")] != table[(2, "c")]
