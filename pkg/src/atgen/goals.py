"""Goal relations between attacks (SP graphs) and goals (tree labels).

A relation fixes a finite universe of attacks so that ``attacks(goal)`` and
the number of missed attacks of a label are computable.  Two relations are
provided: :class:`TableRelation`, given extensionally as (graph, goal)
pairs, and the transition-system relation in :mod:`atgen.kripke`, which
computes optimal labels in closed form.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections import defaultdict
from typing import Hashable, Iterable, Optional, Sequence

from .sp import Kind, SPGraph, label_key, set_lift_compose
from .tree import AttackTree, Op, semantics, subtrees

__all__ = [
    "GoalError",
    "NoCommonGoalError",
    "UnknownGoalError",
    "GoalRelation",
    "TableRelation",
    "attacks",
    "labelling_violations",
    "is_correctly_labelled",
    "missed_attacks",
    "optimality_violations",
    "is_optimally_labelled",
    "find_optimal_label",
]


class GoalError(ValueError):
    pass


class NoCommonGoalError(GoalError):
    def __init__(self, graphs: Iterable[SPGraph] = ()):
        graphs = sorted(graphs)
        shown = ", ".join(str(g) for g in graphs[:4])
        more = ", ..." if len(graphs) > 4 else ""
        super().__init__(f"no common goal for {{{shown}{more}}}")


class UnknownGoalError(GoalError, KeyError):
    def __str__(self):
        return f"unknown goal {self.args[0]!r}"


class GoalRelation(ABC):
    """Interface consumed by the checkers and the synthesis pipeline."""

    @property
    @abstractmethod
    def universe(self) -> frozenset[SPGraph]:
        """The finite set of attacks over which ``attacks`` is computed."""

    @abstractmethod
    def sat(self, g: SPGraph, goal: Hashable) -> bool:
        """Whether attack ``g`` achieves ``goal``."""

    def attacks(self, goal: Hashable) -> frozenset[SPGraph]:
        return frozenset(u for u in self.universe if self.sat(u, goal))

    @abstractmethod
    def find_optimal_label(self, graphs: Iterable[SPGraph]) -> Hashable:
        """A goal common to ``graphs`` with the fewest attacks.

        Raises :class:`NoCommonGoalError` when no such goal exists.
        """

    def has_common_goal(self, graphs: Iterable[SPGraph]) -> bool:
        try:
            self.find_optimal_label(graphs)
        except NoCommonGoalError:
            return False
        return True


class TableRelation(GoalRelation):
    """Relation given by an explicit goal alphabet and (attack, goal) pairs.

    Attacks outside the universe satisfy no goal.  Ties between optimal
    labels go to the smallest goal.
    """

    def __init__(
        self,
        goals: Sequence[Hashable],
        universe: Iterable[SPGraph],
        pairs: Iterable[tuple[SPGraph, Hashable]],
    ):
        self.goals = tuple(sorted(set(goals), key=label_key))
        self._universe = frozenset(universe)
        table: dict[Hashable, set[SPGraph]] = {goal: set() for goal in self.goals}
        for g, goal in pairs:
            if goal not in table:
                raise UnknownGoalError(goal)
            if g not in self._universe:
                raise GoalError(f"attack {g} is not in the universe")
            table[goal].add(g)
        self._attacks = {goal: frozenset(gs) for goal, gs in table.items()}
        self._goals_of: dict[SPGraph, set[Hashable]] = defaultdict(set)
        for goal, gs in self._attacks.items():
            for g in gs:
                self._goals_of[g].add(goal)

    @property
    def universe(self) -> frozenset[SPGraph]:
        return self._universe

    def sat(self, g: SPGraph, goal: Hashable) -> bool:
        return goal in self._goals_of.get(g, ())

    def attacks(self, goal: Hashable) -> frozenset[SPGraph]:
        try:
            return self._attacks[goal]
        except KeyError:
            raise UnknownGoalError(goal) from None

    def pairs(self) -> list[tuple[SPGraph, Hashable]]:
        return [(g, goal) for goal in self.goals for g in sorted(self._attacks[goal])]

    def is_total(self) -> bool:
        return all(self._goals_of.get(g) for g in self._universe)

    def common_goals(self, graphs: Iterable[SPGraph]) -> list[Hashable]:
        graphs = set(graphs)
        return [goal for goal in self.goals if graphs <= self._attacks[goal]]

    def find_optimal_label(self, graphs: Iterable[SPGraph]) -> Hashable:
        graphs = frozenset(graphs)
        candidates = self.common_goals(graphs)
        if not candidates:
            raise NoCommonGoalError(graphs)
        # self.goals is sorted, so min() keeps the smallest goal among ties
        return min(candidates, key=lambda goal: len(self._attacks[goal]))


def attacks(rel: GoalRelation, goal: Hashable) -> frozenset[SPGraph]:
    return rel.attacks(goal)


def find_optimal_label(rel: GoalRelation, graphs: Iterable[SPGraph]) -> Hashable:
    return rel.find_optimal_label(graphs)


def _with_semantics(t: AttackTree) -> list[tuple[AttackTree, frozenset[SPGraph]]]:
    out: list[tuple[AttackTree, frozenset[SPGraph]]] = []
    cache: dict[int, frozenset[SPGraph]] = {}

    def visit(s: AttackTree) -> frozenset[SPGraph]:
        if id(s) not in cache:
            for c in s.children:
                visit(c)
            cache[id(s)] = semantics(s) if s.is_leaf else _combine(s, cache)
        return cache[id(s)]

    visit(t)
    for s in subtrees(t):
        out.append((s, cache[id(s)]))
    return out


def _combine(s: AttackTree, cache: dict[int, frozenset[SPGraph]]) -> frozenset[SPGraph]:
    parts = [cache[id(c)] for c in s.children]
    if s.op is Op.OR:
        return frozenset().union(*parts)
    return set_lift_compose(Kind.PAR if s.op is Op.AND else Kind.SEQ, parts)


def labelling_violations(
    t: AttackTree, rel: GoalRelation
) -> list[tuple[AttackTree, SPGraph]]:
    """(subtree, attack) pairs where the attack misses the subtree's label."""
    bad = []
    for s, sem in _with_semantics(t):
        for g in sorted(sem):
            if not rel.sat(g, s.label):
                bad.append((s, g))
    return bad


def is_correctly_labelled(t: AttackTree, rel: GoalRelation) -> bool:
    return not labelling_violations(t, rel)


def missed_attacks(t: AttackTree, rel: GoalRelation, sem: Optional[frozenset] = None) -> int:
    """Number of attacks hinted at by the root label that ``t`` does not contain."""
    if sem is None:
        sem = semantics(t)
    return len(rel.attacks(t.label) - sem)


def optimality_violations(
    t: AttackTree, rel: GoalRelation
) -> list[tuple[AttackTree, Hashable]]:
    """(subtree, better label) pairs for inner nodes whose label is not optimal.

    Only the root label of each inner subtree is varied, its children stay
    fixed.  Raises :class:`GoalError` if ``t`` is not correctly labelled.
    """
    bad_labels = labelling_violations(t, rel)
    if bad_labels:
        s, g = bad_labels[0]
        raise GoalError(f"tree is not correctly labelled: {g} does not achieve {s.label!r}")
    out = []
    for s, sem in _with_semantics(t):
        if s.is_leaf:
            continue
        best = rel.find_optimal_label(sem)
        if len(rel.attacks(best) - sem) < missed_attacks(s, rel, sem):
            out.append((s, best))
    return out


def is_optimally_labelled(t: AttackTree, rel: GoalRelation) -> bool:
    return not optimality_violations(t, rel)
