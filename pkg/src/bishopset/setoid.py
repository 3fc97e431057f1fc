"""Finite setoids: carriers with explicit equality and optional apartness.

Everything downstream (subsets, families, spectra, measures) is built on the
three types defined here: `Setoid`, `SetoidMap`, and `EqWitness`.  Carriers are
finite ordered lists of hashable values, so every law is decided by exhaustive
scan and every reported failure carries a concrete witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Optional

from .report import LawReport


class SetoidError(ValueError):
    """Malformed input: broken law, non-total table, mismatched carriers."""


class CapabilityError(SetoidError):
    """A required capability (e.g. an apartness relation) is missing."""


Element = Any
Relation = Callable[[Element, Element], bool]


@dataclass(frozen=True)
class Setoid:
    """A finite carrier with an equality relation and optional apartness.

    The constructor does not check the laws; `check_setoid` does, reporting a
    counterexample pair per violated law.  `Setoid.checked(...)` builds and
    validates in one step.
    """

    elements: tuple
    eq: Relation
    apart: Optional[Relation] = None
    name: str = ""

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise SetoidError("carrier elements must be pairwise distinct values")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def discrete(elements: Iterable[Element], name: str = "") -> "Setoid":
        """Identity equality with denial apartness."""
        els = tuple(elements)
        return Setoid(els, lambda a, b: a == b, lambda a, b: a != b, name)

    @staticmethod
    def codiscrete(elements: Iterable[Element], name: str = "") -> "Setoid":
        """All elements equal; no apartness can coexist with it."""
        return Setoid(tuple(elements), lambda a, b: True, None, name)

    @staticmethod
    def from_pairs(elements, eq_pairs, apart_pairs=None, name: str = "") -> "Setoid":
        """Relations given as explicit pair tables (fixture form)."""
        els = tuple(elements)
        eqs = frozenset(map(tuple, eq_pairs))
        eq = lambda a, b: a == b or (a, b) in eqs
        apart = None
        if apart_pairs is not None:
            aps = frozenset(map(tuple, apart_pairs))
            apart = lambda a, b: (a, b) in aps
        return Setoid(els, eq, apart, name)

    @staticmethod
    def checked(elements, eq, apart=None, name: str = "") -> "Setoid":
        s = Setoid(tuple(elements), eq, apart, name)
        rep = check_setoid(s)
        if not rep.ok:
            raise SetoidError(f"setoid laws fail: {rep.failures()}")
        return s

    # -- basic structure ----------------------------------------------------

    @property
    def has_apartness(self) -> bool:
        return self.apart is not None

    def require_apartness(self, what: str = "operation") -> Relation:
        if self.apart is None:
            raise CapabilityError(f"{what} requires an apartness relation")
        return self.apart

    def pairs(self) -> Iterator[tuple]:
        return itertools.product(self.elements, repeat=2)

    def rep(self, x: Element) -> Element:
        """Canonical representative: first carrier element equal to x."""
        for y in self.elements:
            if self.eq(x, y):
                return y
        raise SetoidError(f"{x!r} is not equal to any carrier element")

    def classes(self) -> list[tuple]:
        """Equality classes in carrier order."""
        out: list[list] = []
        for x in self.elements:
            for cls in out:
                if self.eq(x, cls[0]):
                    cls.append(x)
                    break
            else:
                out.append([x])
        return [tuple(c) for c in out]

    def saturate(self, xs: Iterable[Element]) -> frozenset:
        """All carrier elements equal to some member of xs."""
        xs = list(xs)
        return frozenset(y for y in self.elements if any(self.eq(y, x) for x in xs))

    def is_inhabited(self) -> bool:
        return len(self.elements) > 0

    def is_discrete(self) -> bool:
        if self.apart is None:
            return False
        return all(self.eq(a, b) or self.apart(a, b) for a, b in self.pairs())

    def is_tight(self) -> bool:
        if self.apart is None:
            return False
        return all(self.eq(a, b) for a, b in self.pairs() if not self.apart(a, b))

    def is_subsingleton(self) -> bool:
        return all(self.eq(a, b) for a, b in self.pairs())

    def centre(self) -> Optional[Element]:
        """A centre of contraction, if one exists."""
        for c in self.elements:
            if all(self.eq(c, x) for x in self.elements):
                return c
        return None

    def is_contractible(self) -> bool:
        return self.centre() is not None

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        tag = self.name or f"{len(self.elements)} elements"
        return f"Setoid({tag})"


TWO = Setoid.discrete((0, 1), name="2")
ONE = Setoid.discrete((0,), name="1")


def truncation(s: Setoid) -> Setoid:
    """Same carrier with all elements identified (a subsingleton)."""
    return Setoid(s.elements, lambda a, b: True, None, name=f"||{s.name or 'X'}||")


def product_setoid(x: Setoid, y: Setoid, name: str = "") -> Setoid:
    """Componentwise equality; disjunctive apartness when both factors have one."""
    els = tuple(itertools.product(x.elements, y.elements))
    eq = lambda a, b: x.eq(a[0], b[0]) and y.eq(a[1], b[1])
    apart = None
    if x.apart is not None and y.apart is not None:
        xap, yap = x.apart, y.apart
        apart = lambda a, b: xap(a[0], b[0]) or yap(a[1], b[1])
    return Setoid(els, eq, apart, name or f"({x.name}x{y.name})")


def check_setoid(s: Setoid) -> LawReport:
    """Exhaustively check the equivalence laws and, if present, Ap1–Ap3."""
    rep = LawReport(subject=s.name or "setoid")
    els = s.elements

    w = next((x for x in els if not s.eq(x, x)), None)
    rep.law("eq-reflexive", w is None, w)

    w = next(((a, b) for a, b in s.pairs() if s.eq(a, b) and not s.eq(b, a)), None)
    rep.law("eq-symmetric", w is None, w)

    w = next(
        (
            (a, b, c)
            for a, b, c in itertools.product(els, repeat=3)
            if s.eq(a, b) and s.eq(b, c) and not s.eq(a, c)
        ),
        None,
    )
    rep.law("eq-transitive", w is None, w)

    if s.apart is not None:
        ap = s.apart
        w = next(((a, b) for a, b in s.pairs() if s.eq(a, b) and ap(a, b)), None)
        rep.law("apart-Ap1", w is None, w)

        w = next(((a, b) for a, b in s.pairs() if ap(a, b) and not ap(b, a)), None)
        rep.law("apart-Ap2", w is None, w)

        w = next(
            (
                (a, b, c)
                for a, b in s.pairs()
                if ap(a, b)
                for c in els
                if not (ap(c, a) or ap(c, b))
            ),
            None,
        )
        rep.law("apart-Ap3-cotransitive", w is None, w)
    return rep


def is_function(table: dict, dom: Setoid, cod: Setoid):
    """Does the raw table respect equality?  Returns (ok, witness-pair).

    Raises SetoidError if the table is not total on the domain carrier or
    takes values outside the codomain carrier.
    """
    for x in dom.elements:
        if x not in table:
            raise SetoidError(f"table not total: missing {x!r}")
        if table[x] not in cod.elements:
            raise SetoidError(f"table value {table[x]!r} outside codomain")
    for a, b in dom.pairs():
        if dom.eq(a, b) and not cod.eq(table[a], table[b]):
            return False, (a, b)
    return True, None


@dataclass(frozen=True)
class SetoidMap:
    """A total table between carriers together with checked extensionality.

    `validate=False` builds a bare operation (totality still required); used
    only where a construction is defined before knowing it is a function.
    """

    dom: Setoid
    cod: Setoid
    table: dict = field(compare=False)
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.validate:
            ok, witness = is_function(self.table, self.dom, self.cod)
            if not ok:
                raise SetoidError(f"table does not respect equality at {witness!r}")
        else:
            for x in self.dom.elements:
                if x not in self.table:
                    raise SetoidError(f"table not total: missing {x!r}")

    def is_extensional(self) -> bool:
        return is_function(self.table, self.dom, self.cod)[0]

    @staticmethod
    def identity(s: Setoid) -> "SetoidMap":
        return SetoidMap(s, s, {x: x for x in s.elements})

    @staticmethod
    def constant(dom: Setoid, cod: Setoid, value) -> "SetoidMap":
        return SetoidMap(dom, cod, {x: value for x in dom.elements})

    @staticmethod
    def from_rule(dom: Setoid, cod: Setoid, rule: Callable) -> "SetoidMap":
        return SetoidMap(dom, cod, {x: rule(x) for x in dom.elements})

    def __call__(self, x):
        if x in self.table:
            return self.table[x]
        # representative lookup keeps composite carriers usable
        return self.table[self.dom.rep(x)]

    def compose(self, other: "SetoidMap") -> "SetoidMap":
        """self ∘ other (apply other first)."""
        return SetoidMap(
            other.dom, self.cod, {x: self(other(x)) for x in other.dom.elements}
        )

    def eq_to(self, other: "SetoidMap") -> bool:
        """Pointwise equality in F(dom, cod)."""
        return all(self.cod.eq(self(x), other(x)) for x in self.dom.elements)

    def is_identity_like(self) -> bool:
        return self.dom is self.cod or tuple(self.dom.elements) == tuple(
            self.cod.elements
        )

    def is_embedding(self) -> bool:
        return all(
            self.dom.eq(a, b)
            for a, b in self.dom.pairs()
            if self.cod.eq(self(a), self(b))
        )

    def is_strongly_extensional(self) -> bool:
        dom_ap = self.dom.require_apartness("strong extensionality")
        cod_ap = self.cod.require_apartness("strong extensionality")
        return all(
            dom_ap(a, b)
            for a, b in self.dom.pairs()
            if cod_ap(self(a), self(b))
        )

    def is_surjective(self) -> bool:
        return all(
            any(self.cod.eq(self(x), y) for x in self.dom.elements)
            for y in self.cod.elements
        )

    def is_surjectivity_modulus_for(self, f: "SetoidMap") -> bool:
        """self: cod(f) → dom(f) with f ∘ self = id."""
        return all(
            f.cod.eq(f(self(y)), y) for y in f.cod.elements
        )

    def induced_apartness(self) -> Relation:
        """x ≠^f y :⇔ f(x) ≠ f(y); an apartness on the domain."""
        ap = self.cod.require_apartness("induced inequality")
        return lambda a, b: ap(self(a), self(b))

    def __repr__(self) -> str:
        return f"SetoidMap({self.dom!r} -> {self.cod!r})"


def all_operations(dom: Setoid, cod: Setoid) -> Iterator[dict]:
    """All total tables dom → cod, in deterministic order."""
    for values in itertools.product(cod.elements, repeat=len(dom.elements)):
        yield dict(zip(dom.elements, values))


def all_maps(dom: Setoid, cod: Setoid) -> Iterator[SetoidMap]:
    """All extensional maps dom → cod."""
    for table in all_operations(dom, cod):
        if is_function(table, dom, cod)[0]:
            yield SetoidMap(dom, cod, table)


def swap_two() -> SetoidMap:
    """The 0↔1 swap on the canonical two-element setoid."""
    return SetoidMap(TWO, TWO, {0: 1, 1: 0})


@dataclass(frozen=True)
class EqWitness:
    """A pair (fwd, bwd) realising an equality of setoids in the universe."""

    fwd: SetoidMap
    bwd: SetoidMap

    @property
    def src(self) -> Setoid:
        return self.fwd.dom

    @property
    def dst(self) -> Setoid:
        return self.fwd.cod

    def is_valid(self) -> bool:
        back = all(
            self.src.eq(self.bwd(self.fwd(x)), x) for x in self.src.elements
        )
        forth = all(
            self.dst.eq(self.fwd(self.bwd(y)), y) for y in self.dst.elements
        )
        return back and forth

    @staticmethod
    def refl(s: Setoid) -> "EqWitness":
        i = SetoidMap.identity(s)
        return EqWitness(i, i)

    def inverse(self) -> "EqWitness":
        return EqWitness(self.bwd, self.fwd)

    def star(self, other: "EqWitness") -> "EqWitness":
        """Composition of witnesses: self : X=Y, other : Y=Z gives X=Z."""
        if self.dst.elements != other.src.elements:
            raise SetoidError("witnesses are not composable")
        return EqWitness(
            other.fwd.compose(self.fwd), self.bwd.compose(other.bwd)
        )

    def eq_to(self, other: "EqWitness") -> bool:
        return self.fwd.eq_to(other.fwd) and self.bwd.eq_to(other.bwd)


def find_eq_witness(x: Setoid, y: Setoid) -> Optional[EqWitness]:
    """Exhaustive search for a witness x = y in the universe; None if absent.

    For each forward map a greedy section is attempted; if any witness
    exists, some forward map admits one (sections of a class-bijection agree
    up to equality), so the search is still complete.
    """
    if len(x.classes()) != len(y.classes()):
        return None
    for f in all_maps(x, y):
        table = {}
        total = True
        for yv in y.elements:
            pick = next((xv for xv in x.elements if y.eq(f(xv), yv)), None)
            if pick is None:
                total = False
                break
            table[yv] = pick
        if not total:
            continue
        ok, _ = is_function(table, y, x)
        if not ok:
            continue
        w = EqWitness(f, SetoidMap(y, x, table))
        if w.is_valid():
            return w
    return None


# -- function-space setoids and currying ------------------------------------


def map_to_tuple(f: SetoidMap) -> tuple:
    return tuple(f(x) for x in f.dom.elements)


def tuple_to_map(t: tuple, dom: Setoid, cod: Setoid) -> SetoidMap:
    return SetoidMap(dom, cod, dict(zip(dom.elements, t)))


def function_space(dom: Setoid, cod: Setoid, name: str = "") -> Setoid:
    """F(dom, cod) as a setoid: carriers are value tuples, equality pointwise.

    Inequality is the canonical one when the codomain has apartness.
    """
    els = tuple(
        map_to_tuple(f) for f in all_maps(dom, cod)
    )
    eq = lambda s, t: all(cod.eq(a, b) for a, b in zip(s, t))
    apart = None
    if cod.apart is not None:
        cap = cod.apart
        apart = lambda s, t: any(cap(a, b) for a, b in zip(s, t))
    return Setoid(els, eq, apart, name or f"F({dom.name},{cod.name})")


def evaluation(fs: Setoid, dom: Setoid, cod: Setoid) -> Callable:
    """ev(f, x) over a function-space setoid built by `function_space`."""
    index = {x: k for k, x in enumerate(dom.elements)}

    def ev(ftuple, x):
        return ftuple[index[dom.rep(x)]]

    return ev


def curry(h: SetoidMap, z: Setoid, x: Setoid) -> SetoidMap:
    """The unique ĥ : Z → F(X, Y) with ev(ĥ(z), x) = h(z, x).

    `h` must be a map on the product setoid Z×X.
    """
    y = h.cod
    fs = function_space(x, y)

    table = {
        zv: tuple(h((zv, xv)) for xv in x.elements) for zv in z.elements
    }
    return SetoidMap(z, fs, table)


def curry_is_unique(h: SetoidMap, z: Setoid, x: Setoid, candidate: SetoidMap) -> bool:
    """Exhaustive uniqueness: any map agreeing with h under ev equals curry(h)."""
    canonical = curry(h, z, x)
    ev = evaluation(candidate.cod, x, h.cod)
    agrees = all(
        h.cod.eq(ev(candidate(zv), xv), h((zv, xv)))
        for zv in z.elements
        for xv in x.elements
    )
    if not agrees:
        return True  # not a competitor
    return all(
        candidate.cod.eq(candidate(zv), canonical(zv)) for zv in z.elements
    )
