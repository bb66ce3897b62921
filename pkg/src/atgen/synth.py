"""Attack-tree synthesis from a set of SP graphs and a goal relation.

Entry point is :func:`tree_generation`.  A homogeneous input set (all
sequential or all parallel, simple graphs fitting either) is encoded as a
sum-of-products expression whose atoms are the maximal factors of each
graph, factorised with :func:`atgen.factor.exp_factorise`, and decoded back
into AND/SAND/OR nodes.  Mixed sets are first split greedily into
homogeneous blocks that each have a common goal.

Every node label comes from the relation's optimal-label procedure, except
leaves, which are labelled with their edge label so that a leaf denotes
exactly its own edge.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .factor import Factorisation, SopExpression, SplitStrategy, exp_factorise, multiply
from .goals import GoalRelation
from .sp import Kind, Leaf, SPGraph, canonical, compose, composition_kind, decompose, is_homogeneous
from .tree import AttackTree, Op, leaf, node, size

__all__ = [
    "partition",
    "tree_generation",
    "tree_factorisation",
    "build_tree",
    "flat_tree",
    "encode",
    "decode",
]


def partition(rel: GoalRelation, graphs: Iterable[SPGraph]) -> list[frozenset[SPGraph]]:
    """Greedy split into homogeneous blocks that each share a goal.

    Graphs are visited in canonical order; a block grows while it stays
    homogeneous and keeps a common goal.
    """
    remaining = canonical(graphs)
    if not remaining:
        raise ValueError("empty attack set")
    blocks = []
    while remaining:
        block: list[SPGraph] = []
        rest = []
        for g in remaining:
            cand = block + [g]
            if is_homogeneous(cand) and rel.has_common_goal(cand):
                block = cand
            else:
                rest.append(g)
        blocks.append(frozenset(block))
        remaining = rest
    return blocks


def build_tree(rel: GoalRelation, g: SPGraph) -> AttackTree:
    """Tree with semantics ``{g}``: AND for ``∥``, SAND for ``·``."""
    kind, parts = decompose(g)
    if kind is Kind.SIMPLE:
        return leaf(g.label)
    op = Op.AND if kind is Kind.PAR else Op.SAND
    return node(rel.find_optimal_label([g]), op, [build_tree(rel, p) for p in parts])


def flat_tree(rel: GoalRelation, graphs: Iterable[SPGraph]) -> AttackTree:
    graphs = canonical(graphs)
    if len(graphs) == 1:
        return build_tree(rel, graphs[0])
    label = rel.find_optimal_label(graphs)
    return node(label, Op.OR, [build_tree(rel, g) for g in graphs])


def encode(graphs: Iterable[SPGraph], kind: Kind) -> SopExpression:
    """SoP form of a homogeneous set; atoms are maximal ``kind``-factors."""
    cubes = []
    for g in graphs:
        cubes.append(tuple(g.children) if g.kind is kind else (g,))
    return SopExpression(frozenset(cubes), commutative=kind is Kind.PAR)


def decode(f: SopExpression, kind: Kind) -> frozenset[SPGraph]:
    return frozenset(compose(kind, list(c)) for c in f.cubes)


def _splice_or(trees: list[AttackTree]) -> list[AttackTree]:
    """Lift the children of OR-rooted trees into the enclosing OR."""
    out = []
    for t in trees:
        out.extend(t.children if t.op is Op.OR else [t])
    return out


def tree_generation(
    rel: GoalRelation, graphs: Iterable[SPGraph], strategy: SplitStrategy = "full"
) -> AttackTree:
    """Optimally-labelled tree whose semantics is exactly ``graphs``.

    Never larger than :func:`flat_tree` on the same input.

    Raises :class:`atgen.goals.NoCommonGoalError` if the graphs share no goal.
    """
    graphs = frozenset(graphs)
    if not graphs:
        raise ValueError("empty attack set")
    label = rel.find_optimal_label(graphs)
    if is_homogeneous(graphs):
        tree = tree_factorisation(rel, graphs, strategy)
    else:
        children = [tree_generation(rel, block, strategy) for block in partition(rel, graphs)]
        tree = node(label, Op.OR, _splice_or(children))
    # factoring out a short shared part can cost more nodes than it saves
    flat = flat_tree(rel, graphs)
    return flat if size(flat) < size(tree) else tree


def tree_factorisation(
    rel: GoalRelation, graphs: Iterable[SPGraph], strategy: SplitStrategy = "full"
) -> AttackTree:
    graphs = frozenset(graphs)
    if not graphs:
        raise ValueError("empty attack set")
    if not is_homogeneous(graphs):
        raise ValueError("tree_factorisation needs a homogeneous set")
    label = rel.find_optimal_label(graphs)
    if len(graphs) == 1:
        return build_tree(rel, next(iter(graphs)))

    kind = composition_kind(graphs)
    fac = exp_factorise(encode(graphs, kind), strategy)
    if fac.is_trivial:
        return flat_tree(rel, graphs)
    factor_sets = [decode(f, kind) for f in fac.factors]
    rest = decode(fac.remainder, kind) if fac.remainder is not None else None
    product = decode(multiply(fac.factors), kind) if rest is not None else graphs
    blocks = factor_sets + ([rest, product] if rest is not None else [])
    if not all(rel.has_common_goal(b) for b in blocks):
        return flat_tree(rel, graphs)

    if rest is None:
        op = Op.AND if kind is Kind.PAR else Op.SAND
        return node(label, op, [tree_generation(rel, s, strategy) for s in factor_sets])

    left = tree_generation(rel, product, strategy)
    right = tree_generation(rel, rest, strategy)
    return node(label, Op.OR, _splice_or([left, right]))
