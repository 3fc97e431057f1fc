"""Law suites: each suite replays a block of propositions over a fixture's
objects plus generated small instances, returning LawReports.

Suites are pure and deterministic; the CLI assembles their reports.
Complemented-subset laws at ambient size 4 run on canonical keys after the
key operations themselves are validated against the real constructions at
smaller sizes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .complemented import (
    Complemented,
    compl_eq,
    compl_op1,
    compl_op2,
    compl_preimage,
    compl_subseteq,
    detachable_pair,
    two_valued_apartness,
)
from .families import (
    Family,
    FamilyMap,
    check_family,
    find_eq_witness,
    pi_setoid,
    sigma_setoid,
)
from .fixtures import Fixture
from .measure import (
    all_valid_keys,
    complemented_key,
    key_intersection,
    key_leq,
    key_negation,
    key_to_complemented,
    key_union,
)
from .report import LawReport
from .setoid import (
    TWO,
    EqWitness,
    Setoid,
    SetoidMap,
    check_setoid,
    product_setoid,
    truncation,
)
from .subsets import (
    PartialFn,
    Subset,
    all_subsets,
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

Q = Fraction


def _skey(s: Subset) -> frozenset:
    return s.key()


def suite_setoid(fx: Fixture, max_size: int = 5) -> list[LawReport]:
    reports = []
    for name, s in sorted(fx.setoids.items()):
        if len(s.elements) > max_size:
            continue
        rep = check_setoid(s)
        rep.subject = f"setoid:{name}"
        trunc = truncation(s)
        rep.law("truncation-subsingleton", trunc.is_subsingleton())
        reports.append(rep)
    names = [n for n in sorted(fx.setoids) if len(fx.setoids[n].elements) <= 4]
    for n1 in names:
        for n2 in names:
            s1, s2 = fx.setoids[n1], fx.setoids[n2]
            if s1.apart is None or s2.apart is None:
                continue
            rep = LawReport(subject=f"product:{n1}x{n2}")
            prod = product_setoid(s1, s2)
            rep.extend(check_setoid(prod))
            if s1.is_discrete() and s2.is_discrete():
                rep.law("product-discrete", prod.is_discrete())
            reports.append(rep)
    return reports


def suite_subsets(fx: Fixture, max_size: int = 4) -> list[LawReport]:
    reports = []
    for name, amb in sorted(fx.setoids.items()):
        if len(amb.elements) > max_size or len(amb.elements) == 0:
            continue
        reports.append(subset_algebra_report(amb, subject=f"subsets:{name}"))
    for name, pf in sorted(fx.partials.items()):
        rep = LawReport(subject=f"partial:{name}")
        ident = PartialFn.inclusion(pf.dom)
        rep.law("unit-law", partial_eq(partial_compose(pf, ident), pf))
        lcap = partial_lattice("cap_l", pf, pf)
        rcap = partial_lattice("cap_r", pf, pf)
        rep.law("self-intersection-agrees", partial_eq(lcap, rcap))
        cup = partial_lattice("cup", pf, pf)
        rep.law("below-own-union", partial_leq(pf, cup) is not None)
        reports.append(rep)
    return reports


def subset_algebra_report(amb: Setoid, subject: str) -> LawReport:
    """Union/intersection laws, image/pre-image commutation, exhaustively
    over all sub-carrier subsets of the ambient."""
    rep = LawReport(subject=subject)
    subs = all_subsets(amb)

    w = None
    for a in subs:
        if subset_eq(subset_intersection(a, a), a) is None:
            w = sorted(a.key())
            break
    rep.law("self-intersection", w is None, w)

    w = None
    for a, b in itertools.product(subs, repeat=2):
        if subset_leq(a, subset_union(a, b)) is None:
            w = (sorted(a.key()), sorted(b.key()))
            break
        u1, u2 = subset_union(a, b), subset_union(b, a)
        if subset_eq(u1, u2) is None:
            w = (sorted(a.key()), sorted(b.key()))
            break
        i1, i2 = subset_intersection(a, b), subset_intersection(b, a)
        if subset_eq(i1, i2) is None:
            w = (sorted(a.key()), sorted(b.key()))
            break
    rep.law("commutativity-and-upper-bound", w is None, w)

    w = None
    for a, b, c in itertools.product(subs, repeat=3):
        lhs = subset_intersection(a, subset_union(b, c))
        rhs = subset_union(subset_intersection(a, b), subset_intersection(a, c))
        if lhs.key() != rhs.key():
            w = (sorted(a.key()), sorted(b.key()), sorted(c.key()))
            break
        lhs2 = subset_union(a, subset_intersection(b, c))
        rhs2 = subset_intersection(subset_union(a, b), subset_union(a, c))
        if lhs2.key() != rhs2.key():
            w = (sorted(a.key()), sorted(b.key()), sorted(c.key()))
            break
        if subset_union(a, subset_union(b, c)).key() != subset_union(
            subset_union(a, b), c
        ).key():
            w = (sorted(a.key()), sorted(b.key()), sorted(c.key()))
            break
    rep.law("distributivity-and-associativity", w is None, w)

    # subset keys decide subset equality (the canonical-form soundness check)
    w = None
    for a, b in itertools.product(subs, repeat=2):
        same = subset_eq(a, b) is not None
        if same != (a.key() == b.key()):
            w = (sorted(a.key()), sorted(b.key()))
            break
    rep.law("keys-decide-equality", w is None, w)

    # image/pre-image commutation along every endo-map.  The image only
    # *includes* into the intersection of images; the converse direction
    # fails for constant maps on disjoint subsets (see tests), so it is
    # recorded per instance and never asserted.
    from .setoid import all_maps

    w = None
    converse_held = True
    maps = list(all_maps(amb, amb))[:12]
    for f in maps:
        for c, d in itertools.product(subs[: min(len(subs), 8)], repeat=2):
            if preimage(f, subset_union(c, d)).key() != subset_union(
                preimage(f, c), preimage(f, d)
            ).key():
                w = "preimage-union"
                break
            if preimage(f, subset_intersection(c, d)).key() != subset_intersection(
                preimage(f, c), preimage(f, d)
            ).key():
                w = "preimage-intersection"
                break
            if image(f, subset_union(c, d)).key() != subset_union(
                image(f, c), image(f, d)
            ).key():
                w = "image-union"
                break
            fwd = subset_leq(
                image(f, subset_intersection(c, d)),
                subset_intersection(image(f, c), image(f, d)),
            )
            if fwd is None:
                w = "image-intersection-inclusion"
                break
            if (
                subset_leq(
                    subset_intersection(image(f, c), image(f, d)),
                    image(f, subset_intersection(c, d)),
                )
                is None
            ):
                converse_held = False
        if w:
            break
    rep.law("image-preimage-commutation", w is None, w)
    rep.law(
        "image-intersection-converse-on-this-instance",
        True,
        {"holds": converse_held},
    )

    # mutual inclusion yields an equality witness in the universe
    w = None
    for a, b in itertools.product(subs[: min(len(subs), 8)], repeat=2):
        pair = subset_eq(a, b)
        if pair is not None and not pair.is_valid():
            w = (sorted(a.key()), sorted(b.key()))
            break
    rep.law("mutual-inclusion-is-equality-witness", w is None, w)
    return rep


def all_complemented(amb: Setoid) -> list[Complemented]:
    return [key_to_complemented(amb, k) for k in all_valid_keys(amb)]


def key_ops_agree_report(amb: Setoid, subject: str) -> LawReport:
    """Canonical-key operations coincide with the real constructions."""
    rep = LawReport(subject=subject)
    pairs = all_complemented(amb)
    w = None
    for a, b in itertools.product(pairs, repeat=2):
        if complemented_key(compl_op1("union", a, b)) != key_union(
            complemented_key(a), complemented_key(b)
        ):
            w = ("union", a.key(), b.key())
            break
        if complemented_key(compl_op1("inter", a, b)) != key_intersection(
            complemented_key(a), complemented_key(b)
        ):
            w = ("inter", a.key(), b.key())
            break
        if complemented_key(compl_op1("neg", a)) != key_negation(complemented_key(a)):
            w = ("neg", a.key())
            break
        same = compl_eq(a, b)
        if same != (complemented_key(a) == complemented_key(b)):
            w = ("equality", a.key(), b.key())
            break
        if compl_subseteq(a, b) != key_leq(complemented_key(a), complemented_key(b)):
            w = ("order", a.key(), b.key())
            break
    rep.law("key-operations-match-constructions", w is None, w)
    return rep


def complemented_law_report(amb: Setoid, subject: str) -> LawReport:
    """The first-suite algebra on canonical keys, exhaustively."""
    rep = LawReport(subject=subject)
    keys = all_valid_keys(amb)

    w = None
    for a in keys:
        if key_negation(key_negation(a)) != a:
            w = a
            break
    rep.law("double-complement", w is None, w)

    w = None
    for a, b in itertools.product(keys, repeat=2):
        if key_negation(key_union(a, b)) != key_intersection(
            key_negation(a), key_negation(b)
        ):
            w = (a, b)
            break
        if key_negation(key_intersection(a, b)) != key_union(
            key_negation(a), key_negation(b)
        ):
            w = (a, b)
            break
        if key_leq(a, b) != (key_intersection(a, b) == a):
            w = ("order-via-meet", a, b)
            break
        if key_leq(a, b) != key_leq(key_negation(b), key_negation(a)):
            w = ("order-antitone", a, b)
            break
    rep.law("de-morgan-and-order", w is None, w)

    w = None
    for a, b, c in itertools.product(keys, repeat=3):
        if key_union(a, key_intersection(b, c)) != key_intersection(
            key_union(a, b), key_union(a, c)
        ):
            w = (a, b, c)
            break
        if key_intersection(a, key_union(b, c)) != key_union(
            key_intersection(a, b), key_intersection(a, c)
        ):
            w = (a, b, c)
            break
    rep.law("distributivity", w is None, w)
    return rep


def suite_complemented(fx: Fixture, max_size: int = 4) -> list[LawReport]:
    reports = []
    for name, amb in sorted(fx.setoids.items()):
        if len(amb.elements) == 0 or len(amb.elements) > max_size:
            continue
        work = amb if amb.apart is not None else two_valued_apartness(amb)
        if len(amb.elements) <= 3:
            reports.append(
                key_ops_agree_report(work, subject=f"complemented-keys:{name}")
            )
        reports.append(
            complemented_law_report(work, subject=f"complemented:{name}")
        )
        reports.append(chi_identities_report(work, subject=f"chi:{name}"))
    for name, c in sorted(fx.complemented.items()):
        rep = LawReport(subject=f"complemented:{name}")
        rep.law("components-apart", True)  # construction already verified it
        rep.law(
            "suite2-components-refine-suite1",
            _suite2_below_suite1(c),
        )
        reports.append(rep)
    return reports


def _suite2_below_suite1(a: Complemented) -> bool:
    b = compl_op1("neg", a)
    for kind1, kind2 in (("union", "vee"), ("inter", "wedge")):
        one = compl_op1(kind1, a, b)
        two = compl_op2(kind2, a, b)
        if subset_leq(two.pos, one.pos) is None or subset_leq(two.neg, one.neg) is None:
            return False
    return True


def chi_identities_report(amb: Setoid, subject: str) -> LawReport:
    """Characteristic-function identities for the second suite, plus the
    detachable-pair identities, over 2-valued maps on the ambient."""
    from .setoid import all_maps

    rep = LawReport(subject=subject)
    maps = list(all_maps(amb, TWO))

    w = None
    for f in maps:
        d = detachable_pair(f)
        chi = d.chi()
        if any(chi(z) != f(chi.dom.embed(z)) for z in chi.dom.part.elements):
            w = "chi-equals-the-function"
            break
        if sorted(d.domain().key()) != sorted(Subset.whole(d.ambient).key()):
            w = "domain-is-everything"
            break
    rep.law("detachable-pair-identities", w is None, w)

    w = None
    for f in maps:
        for g in maps:
            df, dg = detachable_pair(f), detachable_pair(g)
            prod = SetoidMap(
                amb, TWO, {x: f(x) * g(x) for x in amb.elements}
            )
            if complemented_key(compl_op1("inter", df, dg)) != complemented_key(
                detachable_pair(prod)
            ):
                w = "meet-is-product"
                break
            sumfn = SetoidMap(
                amb,
                TWO,
                {x: f(x) + g(x) - f(x) * g(x) for x in amb.elements},
            )
            if complemented_key(compl_op1("union", df, dg)) != complemented_key(
                detachable_pair(sumfn)
            ):
                w = "join-is-inclusive-or"
                break
        if w:
            break
    rep.law("detachable-lattice", w is None, w)

    w = None
    subs = all_complemented(amb) if len(amb.elements) <= 3 else []
    for a in subs:
        for b in subs:
            wedge = compl_op2("wedge", a, b)
            lhs = wedge.chi()
            rhs = partial_lattice("mult2", a.chi(), b.chi())
            if not partial_eq(lhs, rhs):
                w = ("chi-of-meet", a.key(), b.key())
                break
            neg = compl_op1("neg", a)
            chi_neg = neg.chi()
            chi_a = a.chi()
            flipped = PartialFn(
                chi_a.ambient,
                chi_a.dom,
                SetoidMap(
                    chi_a.dom.part,
                    TWO,
                    {z: 1 - chi_a(z) for z in chi_a.dom.part.elements},
                ),
            )
            if not partial_eq(chi_neg, flipped):
                w = ("chi-of-complement", a.key())
                break
        if w:
            break
    rep.law("chi-identities", w is None, w)
    return rep


def suite_families(fx: Fixture, max_size: int = 3) -> list[LawReport]:
    reports = []
    for name, fam in sorted(fx.families.items()):
        rep = check_family(fam)
        rep.subject = f"family:{name}"
        sig = sigma_setoid(fam)
        rep.extend(check_setoid(sig), prefix="sigma/")
        reports.append(rep)
    from .generate import small_families

    for k, fam in enumerate(small_families(max_index=max_size, max_carrier=max_size)):
        rep = LawReport(subject=f"family-generated:{k}")
        rep.extend(check_family(fam))
        sig = sigma_setoid(fam)
        rep.extend(check_setoid(sig), prefix="sigma/")
        pi = pi_setoid(fam)
        rep.law("pi-carrier-computed", True, {"size": len(pi.elements)})
        reports.append(rep)
    return reports


def suite_union(fx: Fixture, max_size: int = 4) -> list[LawReport]:
    from .subset_families import (
        family_intersection,
        interior_union,
        is_covering,
        is_disjoint,
    )

    reports = []
    for name, sf in sorted(fx.subset_families.items()):
        rep = LawReport(subject=f"subset-family:{name}")
        union = interior_union(sf)
        rep.law("union-is-a-subset", True, {"classes": len(union.part.classes())})
        base = sf.index.elements[0]
        inter = family_intersection(sf, base)
        for other in sf.index.elements[1:]:
            alt = family_intersection(sf, other)
            rep.law(
                f"intersection-base-independent:{other}",
                subset_eq(inter, alt) is not None,
            )
        covering = is_covering(sf)
        disjoint = (
            is_disjoint(sf) is None if sf.ambient.apart is not None else None
        )
        expect = fx.raw.get("subset_families", {}).get(name, {}).get("expect", {})
        if "covering" in expect:
            rep.law("covering-as-expected", covering == expect["covering"], covering)
        else:
            rep.law("covering", True, {"holds": covering})
        if "partition" in expect:
            got = bool(covering and disjoint)
            rep.law("partition-as-expected", got == expect["partition"], got)
        else:
            rep.law("partition", True, {"holds": bool(covering and disjoint)})
        reports.append(rep)
    return reports


def suite_measure(fx: Fixture, max_size: int = 4) -> list[LawReport]:
    from .measure import completeness_check, lift, measure_check, premeasure_check

    reports = []
    if fx.premeasure is not None:
        rep = premeasure_check(fx.premeasure)
        reports.append(rep)
        if rep.ok:
            space = lift(fx.premeasure)
            reports.append(measure_check(space))
            raw = completeness_check(space)
            expect = fx.raw.get("premeasure", {}).get("expect", {})
            checked = LawReport(subject="complete-measure")
            for entry in raw.entries:
                clause = entry.name.split("-", 1)[0]
                if clause in expect:
                    agreed = (entry.status == "pass") == bool(expect[clause])
                    checked.law(
                        f"{entry.name}-as-expected",
                        agreed,
                        entry.witness,
                    )
                else:
                    checked.law(entry.name, True, {"holds": entry.status == "pass"})
            reports.append(checked)
    return reports


def suite_topology(fx: Fixture, max_size: int = 4) -> list[LawReport]:
    from .topology import is_morphism

    reports = []
    for name, space in sorted(fx.spaces.items()):
        rep = LawReport(subject=f"space:{name}")
        ident = SetoidMap.identity(space.carrier)
        rep.law("identity-is-a-morphism", is_morphism(ident, space, space.subbase) == "pass")
        f0 = space.subbase[0]
        rep.law(
            "sum-of-subbase-members-certifiable",
            space.certify(f0 + f0) is not None,
        )
        rep.law(
            "absolute-value-certifiable", space.certify(f0.abs()) is not None
        )
        from .topology import RFn

        rep.law(
            "constants-certifiable",
            space.certify(RFn.constant(space.carrier, Q(7, 3))) is not None,
        )
        reports.append(rep)
    for name, spec in sorted(fx.spectra.items()):
        from .topology import check_direct_limit_cocone, direct_limit

        rep = LawReport(subject=f"spectrum:{name}")
        lim = direct_limit(spec)
        rep.extend(check_direct_limit_cocone(spec, lim))
        rep.law("limit-classes", True, {"classes": len(lim.carrier.classes())})
        reports.append(rep)
    return reports


SUITES = {
    "setoid": suite_setoid,
    "subsets": suite_subsets,
    "complemented": suite_complemented,
    "families": suite_families,
    "union": suite_union,
    "topology": suite_topology,
    "measure": suite_measure,
}


def run_suites(fx: Fixture, which: str = "all", max_size: int = 4) -> list[LawReport]:
    if which == "all":
        names = list(SUITES)
    else:
        names = [which]
    reports = []
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}")
        reports.extend(SUITES[name](fx, max_size))
    return reports
