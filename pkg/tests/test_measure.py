"""Basic families, closure engines, separation, measures, sums."""

import itertools
from fractions import Fraction as Q

import pytest

from bishopset.complemented import Complemented
from bishopset.measure import (
    all_valid_keys,
    basic_families,
    borel_closure,
    borel_baire_equality,
    borel_of_cache,
    cache_apartness,
    closure_complement_check,
    cm3_witness_confirms,
    complemented_key,
    completeness_check,
    dirac_premeasure,
    is_strongly_separated,
    key_intersection,
    key_negation,
    key_union,
    lift,
    measure_check,
    open_pair,
    open_separation_witness,
    partial_sum,
    premeasure_check,
    saturate_cache,
    stabilizing_level,
    sum_is_strongly_extensional,
    urysohn_backward,
    urysohn_forward,
    whole_lattice_closure_oracle,
    zero_pair,
)
from bishopset.setoid import Setoid, SetoidMap, all_maps, TWO
from bishopset.subsets import Subset
from bishopset.topology import RFn

X3 = Setoid.discrete(("a", "b", "c"))


def rf(table) -> RFn:
    return RFn.of(X3, table)


def test_basic_open_pairs_and_their_lattice_identities():
    f = rf({"a": 1, "b": 0, "c": -1})
    g = rf({"a": -2, "b": 2, "c": 0})
    assert open_pair(f.vee(g)) == key_union(open_pair(f), open_pair(g))
    assert zero_pair(f.abs().vee(g.abs())) == key_intersection(
        zero_pair(f), zero_pair(g)
    )
    # normalizations do not move the pairs
    assert open_pair(f) == open_pair(f.vee(0).wedge(1))
    assert zero_pair(f) == zero_pair(f.abs().wedge(1))


def test_open_family_members_are_separated_by_their_function():
    f = rf({"a": 1, "b": 0, "c": -1})
    fam = basic_families("open", X3, [f])
    member = fam.member(0)
    assert open_separation_witness(f)
    assert complemented_key(member) == open_pair(f)


def test_series_union_and_intersection_schemes():
    fns = [rf({"a": 1, "b": 0, "c": 0}), rf({"a": 0, "b": Q(1, 2), "c": 0})]
    total = rf({"a": 0, "b": 0, "c": 0})
    acc = key_negation((frozenset(), frozenset((0, 1, 2))))  # start: (all, none)? built below
    # f := Σ (f_n ∨ 0) ∧ 2^{-n}: its open pair is the union of the open pairs
    f = rf({"a": 0, "b": 0, "c": 0})
    for n, fn in enumerate(fns, start=1):
        f = f + fn.vee(0).wedge(Q(1, 2 ** n))
    expected = open_pair(fns[0])
    for fn in fns[1:]:
        expected = key_union(expected, open_pair(fn))
    assert open_pair(f) == expected
    # ζ-analogue: ζ(Σ |f_n| ∧ 2^{-n}) = ⋂ ζ(f_n)
    g = rf({"a": 0, "b": 0, "c": 0})
    for n, fn in enumerate(fns, start=1):
        g = g + fn.abs().wedge(Q(1, 2 ** n))
    zexpected = zero_pair(fns[0])
    for fn in fns[1:]:
        zexpected = key_intersection(zexpected, zero_pair(fn))
    assert zero_pair(g) == zexpected


def test_stabilizing_level_is_sharp():
    f = rf({"a": Q(1, 3), "b": 0, "c": 5})
    n = stabilizing_level(f)
    assert Q(1, n) < Q(1, 3) <= Q(1, n - 1)


def test_closure_engine_matches_oracle_on_small_carriers():
    for table in (
        {"a": 1, "b": 0, "c": 0},
        {"a": 1, "b": -1, "c": 0},
        {"a": Q(1, 2), "b": Q(1, 3), "c": 0},
    ):
        f = rf(table)
        uni = borel_of_cache(X3, [f], "open")
        amb = cache_apartness(X3, saturate_cache([f]))
        oracle = whole_lattice_closure_oracle(amb, uni.seeds)
        assert uni.closure == oracle


def test_closure_traces_rebuild_members():
    f = rf({"a": 1, "b": -1, "c": 0})
    uni = borel_of_cache(X3, [f], "open")
    for key, trace in uni.traces.items():
        if trace[0] == "seed":
            assert key in uni.seeds
        else:
            op, a, b = trace
            combined = key_union(a, b) if op == "union" else key_intersection(a, b)
            assert combined == key


def test_empty_subbase_yields_empty_closures():
    uni = borel_closure(cache_apartness(X3, []), [])
    assert uni.closure == set()


def test_borel_baire_four_way_equality():
    for cache in (
        [rf({"a": 1, "b": 0, "c": 0})],
        [rf({"a": 1, "b": -2, "c": Q(1, 2)}), rf({"a": 0, "b": 1, "c": 1})],
    ):
        rep = borel_baire_equality(X3, cache)
        assert rep.ok, rep.failures()


def test_two_valued_subbase_borel_equals_baire_with_witnesses():
    cache = [
        rf({"a": 1, "b": 0, "c": 0}),
        rf({"a": 0, "b": 1, "c": 0}),
    ]
    rep = borel_baire_equality(X3, cache)
    assert rep.ok
    # the 2-valued translation: −o(f) = o(1−f) = ζ(f)
    for f in cache:
        flipped = RFn.constant(X3, 1) - f
        assert key_negation(open_pair(f)) == open_pair(flipped) == zero_pair(f)


def test_closure_is_complement_closed():
    rep = closure_complement_check(X3, [rf({"a": 1, "b": -1, "c": 0})])
    assert rep.ok


def test_urysohn_round_trip_on_strongly_separated_pairs():
    h = rf({"a": 1, "b": 0, "c": 0})
    cache = saturate_cache([h])
    amb = cache_apartness(X3, cache)
    comp = Complemented.of(amb, ("a",), ("b", "c"))
    found = is_strongly_separated(comp, cache)
    assert found is not None
    rep, (f, g, c) = urysohn_forward(cache, comp, found)
    assert rep.ok
    rep2, h2 = urysohn_backward(comp, f, g, c)
    assert rep2.ok
    assert h2.eq_to(found)


def test_urysohn_vacuous_on_empty_components():
    amb = cache_apartness(X3, [rf({"a": 1, "b": 0, "c": 0})])
    comp = Complemented.of(amb, (), ())
    h = RFn.constant(X3, 1)
    rep, triple = urysohn_forward([], comp, h)
    assert rep.ok
    rep2, _ = urysohn_backward(comp, *triple)
    assert rep2.ok


def test_urysohn_backward_rejects_bad_constants():
    amb = cache_apartness(X3, [rf({"a": 1, "b": 0, "c": 0})])
    comp = Complemented.of(amb, ("a",), ("b",))
    f = rf({"a": 0, "b": Q(1, 4), "c": 0})
    g = rf({"a": 1, "b": 0, "c": 0})
    from bishopset.setoid import SetoidError

    with pytest.raises(SetoidError):
        urysohn_backward(comp, f, g, 1)


def test_normalized_strong_separation_dominates_the_open_pair():
    # a strongly separated pair sits below the open pair of the separator
    h = rf({"a": 1, "b": 0, "c": 0})
    amb = cache_apartness(X3, [h])
    comp = Complemented.of(amb, ("a",), ("b", "c"))
    g = h.vee(0).wedge(1)
    from bishopset.measure import key_leq, key_of_pair

    ckey = complemented_key(comp)
    assert key_leq(ckey, open_pair(g))


# -- Dirac pre-measure ----------------------------------------------------------------


def test_dirac_premeasure_laws_up_to_four_points():
    for n in (1, 2, 3, 4):
        x = Setoid.discrete(tuple(range(n)))
        pm, maps = dirac_premeasure(x, 0)
        rep = premeasure_check(pm)
        assert rep.ok, (n, rep.failures())


def test_dirac_measure_normalisation_витness():
    x = Setoid.discrete((0, 1, 2))
    pm, maps = dirac_premeasure(x, 0)
    ones = [k for k in pm.index.elements if pm.mu[k] == 1]
    # μ(1̄) = 1 certifies positivity
    const1 = next(
        k for k in pm.index.elements if all(maps[k](e) == 1 for e in x.elements)
    )
    assert pm.mu[const1] == 1


def test_dirac_lifting_and_completeness_profile():
    x = Setoid.discrete((0, 1, 2))
    pm, maps = dirac_premeasure(x, 0)
    space = lift(pm)
    assert measure_check(space).ok
    rep = completeness_check(space)
    status = {e.name.split("-")[0]: e.status for e in rep.entries}
    assert status["CM1"] == "pass"
    assert status["CM2"] == "pass"
    assert status["CM3"] == "fail"


def test_cm3_reproduces_the_stated_witness():
    x = Setoid.discrete((0, 1, 2))
    pm, maps = dirac_premeasure(x, 0)
    space = lift(pm)
    f_idx = next(
        k
        for k in pm.index.elements
        if [maps[k](e) for e in x.elements] == [1, 0, 0]
    )
    g_idx = next(
        k
        for k in pm.index.elements
        if [maps[k](e) for e in x.elements] == [1, 1, 1]
    )
    assert cm3_witness_confirms(space, f_idx, g_idx, (0,), (1,))


def test_lift_refused_without_set_condition():
    # two distinct indices with the same complemented pair
    from bishopset.measure import PreMeasure
    from bishopset.subset_families import ComplementedFamily
    from bishopset.setoid import SetoidError

    amb = Setoid.discrete((0, 1))
    idx = Setoid.discrete(("i", "j"))
    member = Complemented.of(amb, (0,), (1,))
    fam = ComplementedFamily.of_members(amb, idx, {"i": member, "j": member})
    pm = PreMeasure(
        fam,
        vee=lambda a, b: a,
        wedge=lambda a, b: a,
        tilde=lambda a: a,
        mu={"i": Q(1), "j": Q(1)},
    )
    rep = premeasure_check(pm)
    assert not rep.ok
    from bishopset.measure import lift as do_lift
    from bishopset.setoid import CapabilityError

    with pytest.raises(CapabilityError):
        do_lift(pm)


# -- partial sums ----------------------------------------------------------------------


def test_single_term_sum_restricts_the_component():
    dom = Subset.of(X3, ("a", "b"))
    value = RFn.of(dom.part, {"a": Q(1, 2), "b": 3})
    out_dom, out_val = partial_sum([(dom, value)])
    for t in out_dom.part.elements:
        assert out_val(t) == value(t[0])


def test_two_term_sum_on_the_overlap():
    d1 = Subset.of(X3, ("a", "b"))
    d2 = Subset.of(X3, ("b", "c"))
    v1 = RFn.of(d1.part, {"a": 1, "b": 2})
    v2 = RFn.of(d2.part, {"b": Q(1, 3), "c": 5})
    out_dom, out_val = partial_sum([(d1, v1), (d2, v2)])
    assert len(out_dom.part.elements) == 1  # only "b" is shared
    assert out_val(out_dom.part.elements[0]) == 2 + Q(1, 3)


def test_sum_restriction_must_be_included():
    d1 = Subset.of(X3, ("a", "b"))
    v1 = RFn.of(d1.part, {"a": 1, "b": 2})
    smaller = Subset.of(X3, ("a",))
    out_dom, out_val = partial_sum([(d1, v1)], restriction=smaller)
    assert out_dom is smaller
    assert out_val("a") == 1
    from bishopset.setoid import SetoidError

    with pytest.raises(SetoidError):
        partial_sum([(d1, v1)], restriction=Subset.of(X3, ("c",)))


def test_sum_strong_extensionality_on_discrete_fixture():
    d1 = Subset.of(X3, ("a", "b", "c"))
    v1 = RFn.of(d1.part, {"a": 1, "b": 2, "c": 1})
    out_dom, out_val = partial_sum([(d1, v1)])
    assert sum_is_strongly_extensional(out_dom, out_val)
