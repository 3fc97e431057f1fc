"""An executable kernel for finite Bishop-style set theory.

Setoids with explicit equality and apartness, extensional maps with equality
witnesses, subsets and partial functions, complemented subsets with two
operation suites, set-indexed families with Σ/Π constructions, families of
subsets with interior unions and the gluing theorem, finite Bishop spaces
with certificate-based least topologies, direct/inverse limits of spectra,
and predicative measure/integration structures — every proposition is
replayed as a machine-checked law over finite instances.
"""

from .setoid import (
    CapabilityError,
    EqWitness,
    Setoid,
    SetoidError,
    SetoidMap,
    TWO,
    check_setoid,
    is_function,
    product_setoid,
    truncation,
)
from .subsets import PartialFn, Subset, subset_eq, subset_leq
from .complemented import Complemented, compl_op, detachable_pair
from .families import (
    DirectedIndex,
    DirectFamily,
    Family,
    FamilyMap,
    check_family,
    pi_setoid,
    sigma_setoid,
)
from .subset_families import SubsetFamily, interior_union, family_intersection
from .topology import BishopSpace, RFn, least_space
from .report import LawReport

__all__ = [
    "CapabilityError",
    "Complemented",
    "DirectedIndex",
    "DirectFamily",
    "EqWitness",
    "Family",
    "FamilyMap",
    "LawReport",
    "PartialFn",
    "RFn",
    "BishopSpace",
    "Setoid",
    "SetoidError",
    "SetoidMap",
    "Subset",
    "SubsetFamily",
    "TWO",
    "check_family",
    "check_setoid",
    "compl_op",
    "detachable_pair",
    "family_intersection",
    "interior_union",
    "is_function",
    "least_space",
    "pi_setoid",
    "product_setoid",
    "sigma_setoid",
    "subset_eq",
    "subset_leq",
    "truncation",
]

__version__ = "0.1.0"
