"""ordbench: Cantor-normal-form ordinal arithmetic and forcing-condition
combinatorics over finitely presented toy universes."""

from .generic import CanonicalSequence
from .magidor import Block, ExtensionType, MagidorCondition
from .ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    add,
    classify,
    cnf_difference,
    compare,
    format_ordinal,
    limit_order,
    omega_power,
    parse_ordinal,
)
from .oset import OrdinalSet, format_set, parse_set
from .projection import ICondition, IndexSet
from .universe import ToyUniverse

__all__ = [
    "Ordinal",
    "ZERO",
    "ONE",
    "OMEGA",
    "add",
    "compare",
    "omega_power",
    "cnf_difference",
    "limit_order",
    "classify",
    "parse_ordinal",
    "format_ordinal",
    "OrdinalSet",
    "parse_set",
    "format_set",
    "ToyUniverse",
    "Block",
    "MagidorCondition",
    "ExtensionType",
    "IndexSet",
    "ICondition",
    "CanonicalSequence",
]
