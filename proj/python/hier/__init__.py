"""Difference hierarchies on finite posets and effectively presented spaces."""

from ._hier import (
    ModelError,
    Ordinal,
    Poset,
    ResourceLimit,
    alt_chain,
    alt_levels,
    ambiguity_audit,
    baire,
    classify,
    eval_borel,
    eval_diff,
    eval_hausdorff,
    first_one_transform,
    level_bruteforce,
    play,
    residues,
)

__all__ = [
    "ModelError",
    "Ordinal",
    "Poset",
    "ResourceLimit",
    "alt_chain",
    "alt_levels",
    "ambiguity_audit",
    "baire",
    "classify",
    "eval_borel",
    "eval_diff",
    "eval_hausdorff",
    "first_one_transform",
    "level_bruteforce",
    "play",
    "residues",
]
