"""Leaf-removal distances and consensus trees for rooted binary phylogenies."""

from .approx import SolveReport, approx_consensus
from .distance import (
    LeafDisagreement,
    d_lr,
    disagreement_to_supertree,
    mast,
    min_label_disagreement,
    supertree_to_disagreement,
)
from .fpt_d import candidate_trees, disagreement_kernel, join_trees, location_restriction, solve_d
from .fpt_q import min_q, solve_q
from .generate import expected_distance_experiment, minrti_reduction, random_tree
from .newick import NewickError, parse_newick, read_trees, to_newick
from .tree import (
    ABOVE_ROOT,
    LprMove,
    Tree,
    apply_lpr,
    corresponding_node,
    graft,
    lca,
    remove_leaves,
    restrict,
)
from .triplets import (
    Triplet,
    build_supertree,
    conflicts,
    find_dense_conflict,
    is_compatible,
    is_hitting_set,
    triplets,
)

__version__ = "0.1.0"

__all__ = [
    "ABOVE_ROOT",
    "LeafDisagreement",
    "LprMove",
    "NewickError",
    "SolveReport",
    "Tree",
    "Triplet",
    "apply_lpr",
    "approx_consensus",
    "build_supertree",
    "candidate_trees",
    "conflicts",
    "corresponding_node",
    "d_lr",
    "disagreement_kernel",
    "disagreement_to_supertree",
    "expected_distance_experiment",
    "find_dense_conflict",
    "graft",
    "is_compatible",
    "is_hitting_set",
    "join_trees",
    "lca",
    "location_restriction",
    "mast",
    "min_label_disagreement",
    "min_q",
    "minrti_reduction",
    "parse_newick",
    "random_tree",
    "read_trees",
    "remove_leaves",
    "restrict",
    "solve_d",
    "solve_q",
    "supertree_to_disagreement",
    "to_newick",
    "triplets",
]
