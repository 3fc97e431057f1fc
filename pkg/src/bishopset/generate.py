"""Deterministic small-instance generators for the exhaustive law suites.

Everything is enumerated in a fixed order (no sampling), so two runs over the
same sizes visit identical instances.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .families import DirectedIndex, DirectFamily, Family, diagonal
from .setoid import Setoid, SetoidMap, all_maps
from .topology import RFn, least_space

Q = Fraction


def partitions(items: tuple):
    """All set partitions, in a deterministic refinement order."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in partitions(tuple(rest)):
        for k in range(len(sub)):
            yield sub[:k] + [[first] + sub[k]] + sub[k + 1 :]
        yield [[first]] + sub


def partition_setoid(blocks: list, name: str = "") -> Setoid:
    """A setoid whose equality identifies exactly the elements of each block,
    with the denial apartness."""
    lookup = {}
    for k, block in enumerate(blocks):
        for e in block:
            lookup[e] = k
    elements = tuple(sorted(lookup, key=str))
    eq = lambda a, b: lookup[a] == lookup[b]
    return Setoid(elements, eq, lambda a, b: lookup[a] != lookup[b], name=name)


def setoids_up_to(max_size: int, with_apartness: bool = True) -> list[Setoid]:
    """Every partition setoid on carriers of size 1..max_size."""
    out = []
    for n in range(1, max_size + 1):
        items = tuple(f"e{k}" for k in range(n))
        for p, blocks in enumerate(partitions(items)):
            s = partition_setoid(blocks, name=f"P{n}.{p}")
            if not with_apartness:
                s = Setoid(s.elements, s.eq, None, name=s.name)
            out.append(s)
    return out


def discrete_range(n: int, prefix: str = "x") -> Setoid:
    return Setoid.discrete(tuple(f"{prefix}{k}" for k in range(n)), name=f"{prefix}{n}")


def small_families(max_index: int = 3, max_carrier: int = 3) -> list[Family]:
    """A deterministic spread of families: constants, two-set families,
    twisted transports over a codiscrete pair, and a discrete three-chain."""
    out = []
    a = discrete_range(2, "a")
    b = discrete_range(3, "b")
    c = discrete_range(1, "c")
    for idx_size in range(1, max_index + 1):
        idx = discrete_range(idx_size, "i")
        out.append(Family.constant(idx, a))
    out.append(Family.of_two(a, b))
    out.append(Family.of_two(b, c))
    out.append(Family.of_two(a, a))

    # codiscrete index with a non-identity transport (a swap of a 2-carrier)
    cod = Setoid.codiscrete(("u", "v"), name="cod2")
    swap = SetoidMap(a, a, {"a0": "a1", "a1": "a0"})
    ident = SetoidMap.identity(a)
    out.append(
        Family(
            cod,
            {"u": a, "v": a},
            {
                ("u", "u"): ident,
                ("v", "v"): ident,
                ("u", "v"): swap,
                ("v", "u"): swap,
            },
        )
    )

    # a partition index: {0,1} glued, 2 separate
    glued = partition_setoid([["j0", "j1"], ["j2"]], name="glued3")
    out.append(
        Family(
            glued,
            {"j0": a, "j1": a, "j2": b},
            {
                ("j0", "j0"): ident,
                ("j1", "j1"): ident,
                ("j2", "j2"): SetoidMap.identity(b),
                ("j0", "j1"): swap,
                ("j1", "j0"): swap,
            },
        )
    )
    return [f for f in out if len(f.index.elements) <= max_index]


def product_families(x_size: int, y_size: int, fiber_sizes) -> list[Family]:
    """Families over a discrete product index with all fiber-size patterns."""
    from .setoid import product_setoid

    xs = discrete_range(x_size, "x")
    ys = discrete_range(y_size, "y")
    prod = product_setoid(xs, ys)
    cells = list(prod.elements)
    out = []
    for sizes in itertools.product(fiber_sizes, repeat=len(cells)):
        carriers = {
            cell: discrete_range(size, f"r{k}.")
            for k, (cell, size) in enumerate(zip(cells, sizes))
        }
        out.append(Family.over_discrete(prod, carriers))
    return out


def chain_direct_family(carrier_sizes: list[int], collapse: bool = False) -> DirectFamily:
    """A chain-indexed direct family; `collapse` sends everything to the
    first element of the next carrier, otherwise uses cyclic inclusion-ish
    tables (total maps picked deterministically)."""
    d = DirectedIndex.chain(tuple(range(len(carrier_sizes))))
    carriers = {
        i: discrete_range(carrier_sizes[i], f"c{i}.") for i in d.elements
    }
    transports = {}
    for i, j in d.order_pairs():
        if i == j:
            transports[(i, j)] = SetoidMap.identity(carriers[i])
            continue
        src, dst = carriers[i], carriers[j]
        if collapse:
            table = {x: dst.elements[0] for x in src.elements}
        else:
            table = {
                x: dst.elements[k % len(dst.elements)]
                for k, x in enumerate(src.elements)
            }
        transports[(i, j)] = SetoidMap(src, dst, table)
    return DirectFamily(d, carriers, transports)


def small_direct_spectra(max_index: int = 3):
    """Direct spectra over chains with small point-separating subbases."""
    from .topology import DirectSpectrum

    out = []
    for sizes, collapse in (
        ([2, 1], True),
        ([2, 2], False),
        ([1, 2, 2], False),
        ([2, 2, 1], True),
    ):
        if len(sizes) > max_index:
            continue
        fam = chain_direct_family(sizes, collapse=collapse)
        from .families import check_direct_family

        if not check_direct_family(fam).ok:
            continue
        spaces = {}
        for i in fam.directed.elements:
            carrier = fam.carrier(i)
            fn = RFn.of(
                carrier, {x: Q(k) for k, x in enumerate(carrier.elements)}
            )
            spaces[i] = least_space(carrier, [fn])
        out.append(DirectSpectrum(fam, spaces))
    return out


def even_prefix_cofinal(limit: int = 6):
    """The even numbers inside the prefix 0..limit (limit even, so the evens
    stay cofinal), with the round-up modulus of cofinality n ↦ n or n+1."""
    from .topology import CofinalSubset

    if limit % 2 != 0:
        raise ValueError("the prefix must end at an even number")
    parent = DirectedIndex.chain(tuple(range(limit + 1)))
    evens = tuple(k for k in range(limit + 1) if k % 2 == 0)
    sub = DirectedIndex.chain(evens)
    embed = SetoidMap(sub.setoid, parent.setoid, {e: e for e in evens})
    cof = SetoidMap(
        parent.setoid,
        sub.setoid,
        {n: (n if n % 2 == 0 else n + 1) for n in parent.elements},
    )
    return CofinalSubset(sub, parent, embed, cof)


def seeded_cofinal_fixture(seed: int, limit: int = 5):
    """A deterministic pseudo-random cofinal subset of a chain."""
    import random

    from .topology import CofinalSubset

    rng = random.Random(seed)
    members = sorted(set(rng.sample(range(limit - 1), k=max(1, limit // 2))) | {limit - 1})
    parent = DirectedIndex.chain(tuple(range(limit)))
    sub = DirectedIndex.chain(tuple(members))
    embed = SetoidMap(sub.setoid, parent.setoid, {e: e for e in members})

    def up(n: int) -> int:
        return next(m for m in members if m >= n)

    cof = SetoidMap(parent.setoid, sub.setoid, {n: up(n) for n in parent.elements})
    return CofinalSubset(sub, parent, embed, cof)


def spectrum_on_chain(length: int, size: int = 2):
    """A constant-carrier direct spectrum over a chain of the given length."""
    from .topology import DirectSpectrum

    fam = chain_direct_family([size] * length, collapse=False)
    spaces = {}
    for i in fam.directed.elements:
        carrier = fam.carrier(i)
        fn = RFn.of(carrier, {x: Q(k) for k, x in enumerate(carrier.elements)})
        spaces[i] = least_space(carrier, [fn])
    return DirectSpectrum(fam, spaces)
