"""Command-line verifier.

    bishopset verify  FIXTURE [--suite NAME]
    bishopset sigma   FIXTURE [--family NAME]
    bishopset pi      FIXTURE [--family NAME]
    bishopset union   FIXTURE [--subset-family NAME]
    bishopset glue    FIXTURE [--subset-family NAME]
    bishopset limit   FIXTURE [--spectrum NAME]
    bishopset borel   FIXTURE [--space NAME]
    bishopset urysohn FIXTURE
    bishopset measure FIXTURE [--complete]
    bishopset integrate FIXTURE

Exit codes: 0 all laws pass, 1 some law fails, 2 inconclusive only
(certification budget), 3 input error.  Reports are deterministic: the JSON
document never contains wall-clock data (a `checks` counter stands in), so
two runs over one fixture are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .fixtures import Fixture, FixtureError, fixture_root, load_fixture_file
from .report import FAIL, INCONCLUSIVE, LawReport
from .setoid import CapabilityError, Setoid, SetoidError, check_setoid
from .suites import SUITES, run_suites

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3

REPORT_FORMAT_VERSION = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bishopset",
        description="Replay constructive set-theory laws over finite JSON fixtures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("fixture", help="path to a JSON fixture (or a name under the fixture root)")
        p.add_argument("--cert-depth", type=int, default=8, dest="cert_depth")
        p.add_argument("--max-size", type=int, default=4, dest="max_size")
        p.add_argument("--json-out", dest="json_out", default=None)
        p.add_argument("--seed", type=int, default=0)
        return p

    p = common(sub.add_parser("verify", help="run law suites over the fixture"))
    p.add_argument("--suite", default="all", choices=["all"] + sorted(SUITES))

    p = common(sub.add_parser("sigma", help="build and check the disjoint-union setoid"))
    p.add_argument("--family", default=None)

    p = common(sub.add_parser("pi", help="build and check the dependent-function setoid"))
    p.add_argument("--family", default=None)

    p = common(sub.add_parser("union", help="interior union / intersection checks"))
    p.add_argument("--subset-family", dest="subset_family", default=None)

    p = common(sub.add_parser("glue", help="extension theorem over a covering"))
    p.add_argument("--subset-family", dest="subset_family", default=None)

    p = common(sub.add_parser("limit", help="direct-limit construction and cocone checks"))
    p.add_argument("--spectrum", default=None)

    p = common(sub.add_parser("borel", help="closure engines over a space's subbase"))
    p.add_argument("--space", default=None)

    common(sub.add_parser("urysohn", help="zero-pair separation round trips"))

    p = common(sub.add_parser("measure", help="pre-measure and lifted measure laws"))
    p.add_argument("--complete", action="store_true")

    common(sub.add_parser("integrate", help="simple-function integration laws"))
    return parser


def resolve_fixture_path(arg: str) -> str:
    if os.path.exists(arg):
        return arg
    candidate = os.path.join(fixture_root(), arg)
    if os.path.exists(candidate):
        return candidate
    candidate += ".json"
    if os.path.exists(candidate):
        return candidate
    raise FixtureError(f"fixture not found: {arg!r}")


def _first(section: dict, requested, what: str):
    if requested is not None:
        if requested not in section:
            raise FixtureError(f"unresolved {what} reference {requested!r}")
        return requested, section[requested]
    for name in sorted(section):
        return name, section[name]
    raise FixtureError(f"fixture declares no {what}")


# -- subcommand bodies -----------------------------------------------------------


def cmd_verify(fx: Fixture, args) -> list[LawReport]:
    reports = run_suites(fx, args.suite, max_size=args.max_size)
    shrunk = []
    for rep in reports:
        shrunk.append(shrink_report(fx, rep))
    return shrunk


def cmd_sigma(fx: Fixture, args) -> list[LawReport]:
    from .families import check_family, sigma_setoid

    name, fam = _first(fx.families, args.family, "family")
    rep = check_family(fam)
    rep.subject = f"sigma:{name}"
    sig = sigma_setoid(fam)
    rep.extend(check_setoid(sig), prefix="sigma-equality/")
    rep.law("classes", True, {"count": len(sig.classes())})
    return [rep]


def cmd_pi(fx: Fixture, args) -> list[LawReport]:
    from .families import check_family, pi_setoid

    name, fam = _first(fx.families, args.family, "family")
    rep = check_family(fam)
    rep.subject = f"pi:{name}"
    pi = pi_setoid(fam)
    rep.law("members", True, {"count": len(pi.elements)})
    rep.law("inhabited", len(pi.elements) > 0, "dependent-function setoid is empty")
    return [rep]


def cmd_union(fx: Fixture, args) -> list[LawReport]:
    from .subset_families import (
        covering_partition,
        family_intersection,
        interior_union,
    )
    from .subsets import subset_eq

    name, sf = _first(fx.subset_families, args.subset_family, "subset family")
    rep = LawReport(subject=f"union:{name}")
    union = interior_union(sf)
    rep.law("union-classes", True, {"count": len(union.part.classes())})
    base = sf.index.elements[0]
    inter = family_intersection(sf, base)
    rep.law("intersection-classes", True, {"count": len(inter.part.classes())})
    for other in sf.index.elements[1:]:
        rep.law(
            f"intersection-base-independent:{other}",
            subset_eq(inter, family_intersection(sf, other)) is not None,
        )
    rep.extend(covering_partition(sf))
    return [rep]


def cmd_glue(fx: Fixture, args) -> list[LawReport]:
    from .subset_families import glue, glue_is_unique

    name, sf = _first(fx.subset_families, args.subset_family, "subset family")
    rep = LawReport(subject=f"glue:{name}")
    doc = fx.raw.get("glue")
    if not doc:
        rep.law("glue-data-present", False, "fixture carries no glue section")
        return [rep]
    cod = fx.setoids[doc["cod"]]
    pieces = {}
    for key, table in doc["pieces"].items():
        from .fixtures import _coerce

        i = _coerce(key, sf.index)
        part = sf.carrier(i)
        from .setoid import SetoidMap

        pieces[i] = SetoidMap(part, cod, {_coerce(k, part): v for k, v in table.items()})
    try:
        glued = glue(sf, pieces, cod)
    except SetoidError as err:
        rep.law("glued-map-exists", False, str(err))
        return [rep]
    rep.law("glued-map-exists", True)
    rep.law(
        "restricts-to-pieces",
        all(
            glued.compose(sf.embed(i)).eq_to(pieces[i]) for i in sf.index.elements
        ),
    )
    rep.law("unique", glue_is_unique(sf, pieces, cod, glued))
    return [rep]


def cmd_limit(fx: Fixture, args) -> list[LawReport]:
    from .topology import check_direct_limit_cocone, direct_limit

    name, spec = _first(fx.spectra, args.spectrum, "spectrum")
    rep = LawReport(subject=f"limit:{name}")
    lim = direct_limit(spec)
    rep.law("limit-classes", True, {"count": len(lim.carrier.classes())})
    rep.extend(check_direct_limit_cocone(spec, lim))
    return [rep]


def cmd_borel(fx: Fixture, args) -> list[LawReport]:
    from .measure import (
        borel_baire_equality,
        borel_of_cache,
        cache_apartness,
        saturate_cache,
        whole_lattice_closure_oracle,
    )

    name, space = _first(fx.spaces, args.space, "space")
    carrier = space.carrier
    cache = space.subbase
    rep = LawReport(subject=f"borel:{name}")
    uni = borel_of_cache(carrier, cache, "open")
    rep.law("closure-size", True, {"count": len(uni.closure)})
    if len(carrier.elements) <= 3:
        amb = cache_apartness(carrier, saturate_cache(cache))
        oracle = whole_lattice_closure_oracle(amb, uni.seeds)
        rep.law("engine-matches-oracle", uni.closure == oracle)
    rep.extend(borel_baire_equality(carrier, cache))
    return [rep]


def cmd_urysohn(fx: Fixture, args) -> list[LawReport]:
    from .measure import (
        cache_apartness,
        is_strongly_separated,
        urysohn_backward,
        urysohn_forward,
    )

    reports = []
    for sname, space in sorted(fx.spaces.items()):
        carrier = space.carrier
        cache = space.members()
        amb = cache_apartness(carrier, cache)
        for cname, comp in sorted(fx.complemented.items()):
            rep = LawReport(subject=f"urysohn:{sname}:{cname}")
            from .complemented import Complemented

            lifted = Complemented.of(
                amb,
                [comp.pos.embed(a) for a in comp.pos.part.elements],
                [comp.neg.embed(b) for b in comp.neg.part.elements],
            )
            h = is_strongly_separated(lifted, cache)
            if h is None:
                rep.inconclusive("separating-member", "no strong separation in the cache")
                reports.append(rep)
                continue
            fwd, (f, g, c) = urysohn_forward(cache, lifted, h)
            rep.extend(fwd, prefix="forward/")
            bwd, h2 = urysohn_backward(lifted, f, g, c)
            rep.extend(bwd, prefix="backward/")
            rep.law("round-trip-recovers-separator", h2.eq_to(h))
            reports.append(rep)
    if not reports:
        rep = LawReport(subject="urysohn")
        rep.law("fixture-has-spaces-and-complemented", False)
        reports.append(rep)
    return reports


def cmd_measure(fx: Fixture, args) -> list[LawReport]:
    from .measure import completeness_check, lift, measure_check, premeasure_check

    if fx.premeasure is None:
        rep = LawReport(subject="measure")
        rep.law("premeasure-present", False)
        return [rep]
    reports = [premeasure_check(fx.premeasure)]
    if reports[0].ok:
        space = lift(fx.premeasure)
        reports.append(measure_check(space))
        if getattr(args, "complete", False):
            reports.append(completeness_check(space))
    return reports


def cmd_integrate(fx: Fixture, args) -> list[LawReport]:
    from .measure import SimpleSpace, generated_simple_batch, integration_check

    if fx.premeasure is None:
        rep = LawReport(subject="integration")
        rep.law("premeasure-present", False)
        return [rep]
    space = SimpleSpace(fx.premeasure)
    batch = generated_simple_batch(space)
    return [integration_check(space, batch)]


COMMANDS = {
    "verify": cmd_verify,
    "sigma": cmd_sigma,
    "pi": cmd_pi,
    "union": cmd_union,
    "glue": cmd_glue,
    "limit": cmd_limit,
    "borel": cmd_borel,
    "urysohn": cmd_urysohn,
    "measure": cmd_measure,
    "integrate": cmd_integrate,
}


# -- counterexample shrinking ------------------------------------------------------


def shrink_report(fx: Fixture, rep: LawReport) -> LawReport:
    """Attach minimal carriers to failing setoid-law entries by deleting
    elements while the law still fails."""
    if rep.ok or not rep.subject.startswith("setoid:"):
        return rep
    name = rep.subject.split(":", 1)[1]
    setoid = fx.setoids.get(name)
    if setoid is None:
        return rep
    for entry in rep.entries:
        if entry.status != FAIL:
            continue
        minimal = shrink_setoid_failure(setoid, entry.name)
        if minimal is not None:
            entry.witness = {
                "witness": entry.witness,
                "minimal-carrier": list(minimal),
            }
    return rep


def shrink_setoid_failure(setoid: Setoid, law: str):
    """Greedy deletion: remove elements while the named law still fails."""

    def still_fails(elements) -> bool:
        trial = Setoid(tuple(elements), setoid.eq, setoid.apart)
        rep = check_setoid(trial)
        return any(e.name == law and e.status == FAIL for e in rep.entries)

    if not still_fails(setoid.elements):
        return None
    current = list(setoid.elements)
    changed = True
    while changed:
        changed = False
        for e in list(current):
            trial = [x for x in current if x != e]
            if trial and still_fails(trial):
                current = trial
                changed = True
    return current


# -- report assembly ---------------------------------------------------------------


def overall_status(reports: list[LawReport]) -> str:
    if any(rep.status() == FAIL for rep in reports):
        return FAIL
    if any(rep.status() == INCONCLUSIVE for rep in reports):
        return INCONCLUSIVE
    return "pass"


def exit_code(status: str) -> int:
    return {"pass": EXIT_PASS, FAIL: EXIT_FAIL, INCONCLUSIVE: EXIT_INCONCLUSIVE}[status]


def assemble_json(fixture_name: str, command: str, args, reports: list[LawReport]) -> dict:
    return {
        "format": REPORT_FORMAT_VERSION,
        "fixture": fixture_name,
        "command": command,
        "options": {
            "cert_depth": args.cert_depth,
            "max_size": args.max_size,
            "seed": args.seed,
            "suite": getattr(args, "suite", None),
        },
        "status": overall_status(reports),
        "checks": sum(len(rep.entries) for rep in reports),
        "reports": [rep.to_json() for rep in reports],
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.time()
    try:
        path = resolve_fixture_path(args.fixture)
        fx = load_fixture_file(path, cert_depth=args.cert_depth)
        reports = COMMANDS[args.command](fx, args)
    except (FixtureError, SetoidError, CapabilityError, KeyError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_INPUT

    doc = assemble_json(fx.name, args.command, args, reports)
    payload = json.dumps(doc, indent=2, sort_keys=True)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    for rep in reports:
        for line in rep.summary_lines():
            print(line)
    status = overall_status(reports)
    elapsed = time.time() - started
    print(f"-- {doc['checks']} checks, status {status} ({elapsed:.2f}s wall)")
    if not args.json_out:
        print(payload)
    return exit_code(status)


if __name__ == "__main__":
    sys.exit(main())
