"""Normalisers of permutation groups in the symmetric group."""

from .perm import Permutation, compose, conjugate, inverse, perm_from_cycles
from .group import (
    Group,
    StabilizerChain,
    conjugate_group,
    derived_subgroup,
    group_order,
    is_normal_in,
    parse_group_file,
    symmetric_group,
    trivial_group,
)

__version__ = "0.1.0"

__all__ = [
    "Permutation", "compose", "conjugate", "inverse", "perm_from_cycles",
    "Group", "StabilizerChain", "conjugate_group", "derived_subgroup",
    "group_order", "is_normal_in", "parse_group_file", "symmetric_group",
    "trivial_group", "normaliser", "__version__",
]


def normaliser(group, config=None):
    """Normaliser of `group` in the full symmetric group on its domain."""
    from .driver import symmetric_normaliser

    result, _trace = symmetric_normaliser(group, config=config)
    return result
