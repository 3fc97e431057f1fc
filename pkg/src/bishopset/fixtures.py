"""JSON fixture loading: named bundles of setoids, maps, subsets, families,
spectra, and measure data, with cross-references resolved by name.

Schema sketch (all sections optional):

    {"name": "...", "provenance": {...},
     "setoids": {"X": {"elements": [...], "eq": "identity"|"all"|[[a,b],...],
                        "apart": "denial"|[[a,b],...]}},
     "maps": {"f": {"dom": "X", "cod": "Y", "table": {...}}},
     "subsets": {"A": {"ambient": "X", "elements": [...],
                        "embedding": {...}?}},
     "partials": {"p": {"ambient": "X", "dom": "A", "cod": "Y",
                         "table": {...}}},
     "complemented": {"C": {"ambient": "X", "pos": [...], "neg": [...]}},
     "families": {"L": {"index": "I", "carriers": {"i": "X"},
                         "transports": {"i,j": {...}}}},
     "subset_families": {"S": {"ambient": "X", "index": "I",
                                "members": {"i": [...]}}},
     "directed": {"D": {"index": "I", "leq": [[i,j],...], "delta": {"i,j": k}}},
     "direct_families": {...}, "spaces": {...}, "spectra": {...},
     "cofinal": {...}, "premeasure": {...}}

Element identifiers are strings or integers; rationals are "p/q" strings or
integers.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .complemented import Complemented
from .families import DirectedIndex, DirectFamily, Family, diagonal
from .setoid import Setoid, SetoidError, SetoidMap
from .subset_families import ComplementedFamily, SubsetFamily
from .subsets import PartialFn, Subset
from .topology import BishopSpace, ContravariantSpectrum, DirectSpectrum, RFn, Spectrum, least_space
from .measure import PreMeasure


class FixtureError(SetoidError):
    """Unresolvable reference or malformed fixture document."""


def _pairs_of(raw, elements) -> set:
    pairs = set()
    for entry in raw:
        if not isinstance(entry, list) or len(entry) != 2:
            raise FixtureError(f"relation entries must be pairs, got {entry!r}")
        a, b = entry
        if a not in elements or b not in elements:
            raise FixtureError(f"relation mentions unknown element in {entry!r}")
        pairs.add((a, b))
    return pairs


def load_setoid(doc: dict, name: str = "") -> Setoid:
    elements = tuple(doc["elements"])
    eq_spec = doc.get("eq", "identity")
    if eq_spec == "identity":
        eq = lambda a, b: a == b
    elif eq_spec == "all":
        eq = lambda a, b: True
    else:
        closure = _eq_closure(elements, _pairs_of(eq_spec, elements))
        eq = lambda a, b: b in closure[a]
    apart_spec = doc.get("apart")
    apart = None
    if apart_spec == "denial":
        apart = lambda a, b: not eq(a, b)
    elif apart_spec is not None:
        pairs = _pairs_of(apart_spec, elements)
        sym = pairs | {(b, a) for a, b in pairs}
        apart = lambda a, b: (a, b) in sym
    return Setoid(elements, eq, apart, name=name or doc.get("name", ""))


def _eq_closure(elements, pairs: set) -> dict:
    """Reflexive-symmetric-transitive closure as per-element classes."""
    parent = {e: e for e in elements}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    classes: dict = {}
    for e in elements:
        classes.setdefault(find(e), set()).add(e)
    return {e: classes[find(e)] for e in elements}


def load_map(doc: dict, setoids: dict) -> SetoidMap:
    dom = _ref(setoids, doc["dom"], "setoid")
    cod = _ref(setoids, doc["cod"], "setoid")
    table = {_coerce(k, dom): v for k, v in doc["table"].items()}
    return SetoidMap(dom, cod, table)


def _coerce(key, setoid: Setoid):
    """JSON object keys are strings; match integer carriers when needed."""
    if key in setoid.elements:
        return key
    try:
        as_int = int(key)
    except (TypeError, ValueError):
        return key
    return as_int if as_int in setoid.elements else key


def _ref(section: dict, name: str, kind: str):
    if name not in section:
        raise FixtureError(f"unresolved {kind} reference {name!r}")
    return section[name]


def load_subset(doc: dict, setoids: dict) -> Subset:
    ambient = _ref(setoids, doc["ambient"], "setoid")
    if "embedding" in doc:
        part = load_setoid(doc["part"], name=doc.get("name", ""))
        table = {_coerce(k, part): v for k, v in doc["embedding"].items()}
        return Subset(ambient, part, SetoidMap(part, ambient, table))
    return Subset.of(ambient, doc["elements"])


def load_partial(doc: dict, setoids: dict, subsets: dict) -> PartialFn:
    ambient = _ref(setoids, doc["ambient"], "setoid")
    dom = _ref(subsets, doc["dom"], "subset")
    cod = _ref(setoids, doc["cod"], "setoid")
    table = {_coerce(k, dom.part): v for k, v in doc["table"].items()}
    return PartialFn(ambient, dom, SetoidMap(dom.part, cod, table))


def load_complemented(doc: dict, setoids: dict) -> Complemented:
    ambient = _ref(setoids, doc["ambient"], "setoid")
    return Complemented.of(ambient, doc["pos"], doc["neg"])


def load_family(doc: dict, setoids: dict) -> Family:
    index = _ref(setoids, doc["index"], "setoid")
    carriers = {}
    for key, ref in doc["carriers"].items():
        i = _coerce(key, index)
        carriers[i] = (
            _ref(setoids, ref, "setoid") if isinstance(ref, str) else load_setoid(ref)
        )
    transports = {}
    for key, table in doc.get("transports", {}).items():
        i_raw, j_raw = key.split(",")
        i, j = _coerce(i_raw.strip(), index), _coerce(j_raw.strip(), index)
        src, dst = carriers[i], carriers[j]
        transports[(i, j)] = SetoidMap(
            src, dst, {_coerce(k, src): v for k, v in table.items()}
        )
    for i, j in diagonal(index):
        if (i, j) not in transports:
            if i == j or carriers[i].elements == carriers[j].elements:
                transports[(i, j)] = SetoidMap.identity(carriers[i])
            else:
                raise FixtureError(f"missing transport {i},{j}")
    return Family(index, carriers, transports)


def load_subset_family(doc: dict, setoids: dict) -> SubsetFamily:
    ambient = _ref(setoids, doc["ambient"], "setoid")
    index = _ref(setoids, doc["index"], "setoid")
    members = {}
    for key, els in doc["members"].items():
        i = _coerce(key, index)
        members[i] = Subset.of(ambient, els)
    return SubsetFamily.of_subsets(ambient, index, members)


def load_complemented_family(doc: dict, setoids: dict) -> ComplementedFamily:
    ambient = _ref(setoids, doc["ambient"], "setoid")
    index = _ref(setoids, doc["index"], "setoid")
    members = {}
    for key, pair in doc["members"].items():
        i = _coerce(key, index)
        members[i] = Complemented.of(ambient, pair["pos"], pair["neg"])
    return ComplementedFamily.of_members(ambient, index, members)


def load_directed(doc: dict, setoids: dict) -> DirectedIndex:
    index = _ref(setoids, doc["index"], "setoid")
    pairs = _pairs_of(doc["leq"], index.elements)
    refl = pairs | {(e, e) for e in index.elements}
    delta_doc = {k: v for k, v in doc["delta"].items()}

    def delta(a, b):
        key = f"{a},{b}"
        if key in delta_doc:
            return delta_doc[key]
        alt = f"{b},{a}"
        if alt in delta_doc:
            return delta_doc[alt]
        raise FixtureError(f"delta not defined at {key!r}")

    return DirectedIndex(index, lambda a, b: (a, b) in refl, delta)


def load_direct_family(doc: dict, setoids: dict, directeds: dict) -> DirectFamily:
    directed = _ref(directeds, doc["directed"], "directed index")
    carriers = {}
    for key, ref in doc["carriers"].items():
        i = _coerce(key, directed.setoid)
        carriers[i] = (
            _ref(setoids, ref, "setoid") if isinstance(ref, str) else load_setoid(ref)
        )
    transports = {}
    for key, table in doc.get("transports", {}).items():
        i_raw, j_raw = key.split(",")
        i = _coerce(i_raw.strip(), directed.setoid)
        j = _coerce(j_raw.strip(), directed.setoid)
        src = carriers[i]
        transports[(i, j)] = SetoidMap(
            src, carriers[j], {_coerce(k, src): v for k, v in table.items()}
        )
    for i, j in directed.order_pairs():
        if (i, j) not in transports:
            if carriers[i].elements == carriers[j].elements:
                transports[(i, j)] = SetoidMap.identity(carriers[i])
            else:
                raise FixtureError(f"missing transport {i},{j}")
    return DirectFamily(directed, carriers, transports)


def load_rfn(doc: dict, carrier: Setoid) -> RFn:
    return RFn.of(carrier, {_coerce(k, carrier): v for k, v in doc.items()})


def load_space(doc: dict, setoids: dict, cert_depth: int = 8) -> BishopSpace:
    carrier = _ref(setoids, doc["setoid"], "setoid")
    subbase = [load_rfn(f, carrier) for f in doc["subbase"]]
    return least_space(carrier, subbase, cert_depth=cert_depth)


def load_direct_spectrum(
    doc: dict, setoids: dict, directeds: dict, families: dict, cert_depth: int = 8
) -> DirectSpectrum:
    fam = _ref(families, doc["family"], "direct family")
    spaces = {}
    for key, space_doc in doc["topologies"].items():
        i = _coerce(key, fam.directed.setoid)
        carrier = fam.carrier(i)
        subbase = [load_rfn(f, carrier) for f in space_doc["subbase"]]
        spaces[i] = least_space(carrier, subbase, cert_depth=cert_depth)
    return DirectSpectrum(fam, spaces)


def load_premeasure(doc: dict, setoids: dict) -> PreMeasure:
    if "dirac" in doc:
        from .measure import dirac_premeasure

        spec = doc["dirac"]
        carrier = _ref(setoids, spec["setoid"], "setoid")
        point = _coerce(spec["point"], carrier)
        pm, _maps = dirac_premeasure(carrier, point)
        return pm
    family = load_complemented_family(doc["family"], setoids)
    index = family.index
    ops = doc["index_ops"]

    def binary(table):
        def op(a, b):
            key = f"{a},{b}"
            if key not in table:
                raise FixtureError(f"index operation missing entry {key!r}")
            return table[key]

        return op

    def unary(table):
        def op(a):
            key = str(a)
            if key not in table:
                raise FixtureError(f"index operation missing entry {key!r}")
            return table[key]

        return op

    mu = {
        _coerce(k, index): Fraction(str(v)) for k, v in doc["mu"].items()
    }
    return PreMeasure(
        family, binary(ops["vee"]), binary(ops["wedge"]), unary(ops["tilde"]), mu
    )


@dataclass
class Fixture:
    """A resolved bundle; every section maps names to live objects."""

    name: str
    provenance: dict = field(default_factory=dict)
    setoids: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    subsets: dict = field(default_factory=dict)
    partials: dict = field(default_factory=dict)
    complemented: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    subset_families: dict = field(default_factory=dict)
    complemented_families: dict = field(default_factory=dict)
    directed: dict = field(default_factory=dict)
    direct_families: dict = field(default_factory=dict)
    spaces: dict = field(default_factory=dict)
    spectra: dict = field(default_factory=dict)
    premeasure: Optional[PreMeasure] = None
    raw: dict = field(default_factory=dict)


def load_fixture(doc: dict, cert_depth: int = 8) -> Fixture:
    fx = Fixture(name=doc.get("name", "fixture"), provenance=doc.get("provenance", {}))
    fx.raw = doc
    for name, sdoc in doc.get("setoids", {}).items():
        fx.setoids[name] = load_setoid(sdoc, name=name)
    for name, mdoc in doc.get("maps", {}).items():
        fx.maps[name] = load_map(mdoc, fx.setoids)
    for name, sdoc in doc.get("subsets", {}).items():
        fx.subsets[name] = load_subset(sdoc, fx.setoids)
    for name, pdoc in doc.get("partials", {}).items():
        fx.partials[name] = load_partial(pdoc, fx.setoids, fx.subsets)
    for name, cdoc in doc.get("complemented", {}).items():
        fx.complemented[name] = load_complemented(cdoc, fx.setoids)
    for name, fdoc in doc.get("families", {}).items():
        fx.families[name] = load_family(fdoc, fx.setoids)
    for name, fdoc in doc.get("subset_families", {}).items():
        fx.subset_families[name] = load_subset_family(fdoc, fx.setoids)
    for name, fdoc in doc.get("complemented_families", {}).items():
        fx.complemented_families[name] = load_complemented_family(fdoc, fx.setoids)
    for name, ddoc in doc.get("directed", {}).items():
        fx.directed[name] = load_directed(ddoc, fx.setoids)
    for name, fdoc in doc.get("direct_families", {}).items():
        fx.direct_families[name] = load_direct_family(fdoc, fx.setoids, fx.directed)
    for name, sdoc in doc.get("spaces", {}).items():
        fx.spaces[name] = load_space(sdoc, fx.setoids, cert_depth=cert_depth)
    for name, sdoc in doc.get("spectra", {}).items():
        fx.spectra[name] = load_direct_spectrum(
            sdoc, fx.setoids, fx.directed, fx.direct_families, cert_depth=cert_depth
        )
    if "premeasure" in doc:
        fx.premeasure = load_premeasure(doc["premeasure"], fx.setoids)
    return fx


def load_fixture_file(path: str, cert_depth: int = 8) -> Fixture:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as err:
        raise FixtureError(
            f"parse error in {path} at line {err.lineno}, column {err.colno}: {err.msg}"
        ) from err
    fx = load_fixture(doc, cert_depth=cert_depth)
    if fx.name == "fixture":
        fx.name = os.path.splitext(os.path.basename(path))[0]
    return fx


def fixture_root(default: str = "fixtures") -> str:
    return os.environ.get("BISHOPSET_FIXTURES", default)
