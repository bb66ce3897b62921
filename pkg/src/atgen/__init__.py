"""Synthesis of optimally-labelled SAND attack trees from sets of attacks.

Attacks are series-parallel graphs (:mod:`atgen.sp`), trees and their
semantics live in :mod:`atgen.tree`, goal relations in :mod:`atgen.goals`,
sum-of-products factorisation in :mod:`atgen.factor`, the generation
pipeline in :mod:`atgen.synth`, and the transition-system front end in
:mod:`atgen.kripke`.
"""

from .factor import Factorisation, SopExpression, exp_factorise, expand, parse_expression, sop
from .goals import (
    GoalRelation,
    NoCommonGoalError,
    TableRelation,
    find_optimal_label,
    is_correctly_labelled,
    is_optimally_labelled,
)
from .kripke import (
    KripkeSystem,
    Predicate,
    StepDelta,
    TransitionRule,
    enumerate_paths,
    lts_goal_relation,
    lts_optimal_label,
    path_to_spgraph,
)
from .pipeline import check_tree, generate_from_system
from .sp import Leaf, Par, Seq, SPGraph, par_compose, seq_compose
from .synth import build_tree, flat_tree, partition, tree_factorisation, tree_generation
from .tree import AttackTree, Op, leaf, node, semantically_equal, semantics, size

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
