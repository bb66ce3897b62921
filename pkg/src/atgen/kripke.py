"""Mixed Kripke structures: predicate states, guarded rules, breach paths.

States are sets of ground predicates.  A rule fires for every instantiation
of its variables (over the declared sorts, or by matching premises against
the state) whose premises are all present; it removes and adds predicates.
Paths run from the initial state to the first state meeting the breach
condition.

Each transition ``s -> s'`` becomes a one-edge SP graph labelled with the
step delta ``(s \\ s', s' \\ s)``, and a path becomes the sequential
composition of its steps.  Deltas double as goals: a graph achieves goal
``(P-, P+)`` when ``P-`` was removed and ``P+`` added between its first and
last state.  The optimal common goal of a set of graphs is then the
intersection of their deltas, with no search involved.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .goals import GoalRelation
from .sp import Leaf, SPGraph, Seq, seq_compose

__all__ = [
    "Predicate",
    "State",
    "StepDelta",
    "TransitionRule",
    "KripkeSystem",
    "Step",
    "Path",
    "KripkeError",
    "is_var",
    "parse_term",
    "apply_rules",
    "breaches",
    "enumerate_paths",
    "minimal_paths",
    "path_to_spgraph",
    "subpath_graphs",
    "graph_delta",
    "lts_satisfies",
    "lts_optimal_label",
    "LTSRelation",
    "lts_goal_relation",
]


class KripkeError(ValueError):
    pass


def is_var(term: str) -> bool:
    return term.startswith("?")


@dataclass(frozen=True, order=True)
class Predicate:
    name: str
    args: tuple[str, ...] = ()

    def __str__(self):
        return f"{self.name}({','.join(self.args)})"

    def substitute(self, binding: Mapping[str, str]) -> Predicate:
        return Predicate(self.name, tuple(binding.get(a, a) for a in self.args))

    def variables(self) -> set[str]:
        return {a for a in self.args if is_var(a)}


State = frozenset  # frozenset[Predicate]

_TERM = re.compile(r"^\s*([^\s(),]+)\s*(?:\((.*)\))?\s*$")


def parse_term(text: str) -> Predicate:
    """Parse ``name(arg, ...)`` or a bare constant ``name``."""
    m = _TERM.match(text)
    if not m:
        raise KripkeError(f"malformed term {text!r}")
    name, args = m.group(1), m.group(2)
    if args is None or not args.strip():
        return Predicate(name)
    return Predicate(name, tuple(a.strip() for a in args.split(",")))


def _fmt_preds(preds: Iterable[Predicate]) -> str:
    preds = sorted(preds)
    return "{" + ", ".join(str(p) for p in preds) + "}" if preds else "∅"


@dataclass(frozen=True)
class StepDelta:
    """Predicates removed and added, ``(P-, P+)``; also used as a goal."""

    removed: frozenset[Predicate] = frozenset()
    added: frozenset[Predicate] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "removed", frozenset(self.removed))
        object.__setattr__(self, "added", frozenset(self.added))
        if self.removed & self.added:
            raise KripkeError("a delta cannot remove and add the same predicate")

    def sort_key(self) -> tuple:
        return (len(self.removed) + len(self.added), tuple(sorted(self.removed)), tuple(sorted(self.added)))

    def __lt__(self, other: StepDelta) -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return f"({_fmt_preds(self.removed)}, {_fmt_preds(self.added)})"

    @classmethod
    def between(cls, before: frozenset, after: frozenset) -> StepDelta:
        return cls(before - after, after - before)


@dataclass(frozen=True)
class TransitionRule:
    name: str
    sorts: Mapping[str, str]
    premises: tuple[Predicate, ...]
    action: Predicate
    additions: tuple[Predicate, ...] = ()
    removals: tuple[Predicate, ...] = ()

    def __post_init__(self):
        bound = set(self.sorts) | {v for p in self.premises for v in p.variables()}
        used = self.action.variables()
        for p in self.additions + self.removals:
            used |= p.variables()
        free = used - bound
        if free:
            raise KripkeError(f"rule {self.name}: unbound variables {sorted(free)}")


@dataclass(frozen=True)
class KripkeSystem:
    sorts: Mapping[str, tuple[str, ...]]
    rules: tuple[TransitionRule, ...]
    initial: frozenset
    breach: tuple[Predicate, ...]

    def __post_init__(self):
        constants = {c for cs in self.sorts.values() for c in cs}
        for p in self.initial:
            if p.variables():
                raise KripkeError(f"initial state predicate {p} is not ground")
            bad = [a for a in p.args if a not in constants]
            if bad:
                raise KripkeError(f"initial state predicate {p} uses undeclared constants {bad}")
        for r in self.rules:
            for var, sort in r.sorts.items():
                if sort not in self.sorts:
                    raise KripkeError(f"rule {r.name}: unknown sort {sort!r} for {var}")


@dataclass(frozen=True)
class Step:
    action: str
    delta: StepDelta
    rule: str = ""
    binding: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class Path:
    states: tuple[frozenset, ...]
    steps: tuple[Step, ...] = field(default=())

    def __len__(self):
        return len(self.steps)

    @property
    def actions(self) -> list[str]:
        return [s.action for s in self.steps]


def _match(
    patterns: Sequence[Predicate], state: frozenset, binding: dict[str, str]
) -> Iterable[dict[str, str]]:
    if not patterns:
        yield binding
        return
    first, rest = patterns[0], patterns[1:]
    for p in sorted(state):
        if p.name != first.name or len(p.args) != len(first.args):
            continue
        b = dict(binding)
        ok = True
        for pat, val in zip(first.args, p.args):
            if is_var(pat):
                if b.setdefault(pat, val) != val:
                    ok = False
                    break
            elif pat != val:
                ok = False
                break
        if ok:
            yield from _match(rest, state, b)


def _bindings(sys: KripkeSystem, rule: TransitionRule, state: frozenset):
    for b in _match(list(rule.premises), state, {}):
        if any(var in b and b[var] not in sys.sorts[sort] for var, sort in rule.sorts.items()):
            continue
        open_vars = sorted(v for v in rule.sorts if v not in b)
        for values in itertools.product(*(sys.sorts[rule.sorts[v]] for v in open_vars)):
            yield {**b, **dict(zip(open_vars, values))}


def _fire(rule: TransitionRule, binding: Mapping[str, str], state: frozenset) -> frozenset:
    removed = {p.substitute(binding) for p in rule.removals}
    added = {p.substitute(binding) for p in rule.additions}
    return frozenset((state - removed) | added)


def _enabled(rule: TransitionRule, binding: Mapping[str, str], state: frozenset) -> bool:
    return all(p.substitute(binding) in state for p in rule.premises)


def apply_rules(sys: KripkeSystem, state: frozenset) -> list[tuple[str, frozenset, Step]]:
    """Successors of ``state`` as ``(action, next_state, step)``, self-loops dropped.

    Ordered by action text, then by the successor state.
    """
    seen = {}
    for rule in sys.rules:
        for b in _bindings(sys, rule, state):
            nxt = _fire(rule, b, state)
            if nxt == state:
                continue
            action = str(rule.action.substitute(b))
            key = (action, tuple(sorted(nxt)))
            if key not in seen:
                step = Step(action, StepDelta.between(state, nxt), rule.name, tuple(sorted(b.items())))
                seen[key] = (action, nxt, step)
    return [seen[k] for k in sorted(seen)]


def breaches(sys: KripkeSystem, state: frozenset) -> bool:
    return next(iter(_match(list(sys.breach), state, {})), None) is not None


def enumerate_paths(sys: KripkeSystem, max_depth: int, max_paths: int = 10_000) -> list[Path]:
    """Breadth-first paths from the initial state to a breach state.

    A path stops at its first breach state and never revisits a state.
    """
    start = Path((sys.initial,))
    if breaches(sys, sys.initial):
        return [start]
    results: list[Path] = []
    frontier = [start]
    for _ in range(max_depth):
        nxt_frontier = []
        for path in frontier:
            here = path.states[-1]
            for _, nxt, step in apply_rules(sys, here):
                if nxt in path.states:
                    continue
                ext = Path(path.states + (nxt,), path.steps + (step,))
                if breaches(sys, nxt):
                    results.append(ext)
                    if len(results) >= max_paths:
                        return results
                else:
                    nxt_frontier.append(ext)
        frontier = nxt_frontier
        if not frontier:
            break
    return results


def _replays_to_breach(sys: KripkeSystem, steps: Sequence[Step]) -> bool:
    rules = {r.name: r for r in sys.rules}
    state = sys.initial
    for step in steps:
        rule = rules[step.rule]
        binding = dict(step.binding)
        if not _enabled(rule, binding, state):
            return False
        state = _fire(rule, binding, state)
        if breaches(sys, state):
            return True
    return False


def minimal_paths(sys: KripkeSystem, paths: Iterable[Path]) -> list[Path]:
    """Paths with no redundant step.

    A path is dropped when some proper subsequence of its rule instances,
    replayed from the initial state, already reaches a breach.
    """
    out = []
    for path in paths:
        n = len(path.steps)
        redundant = any(
            _replays_to_breach(sys, sub)
            for k in range(1, n)
            for sub in itertools.combinations(path.steps, k)
        )
        if not redundant:
            out.append(path)
    return out


def _step_leaves(path: Path) -> list[Leaf]:
    return [
        Leaf(step.delta, endpoints=(path.states[i], path.states[i + 1]))
        for i, step in enumerate(path.steps)
    ]


def path_to_spgraph(path: Path) -> SPGraph:
    if not path.steps:
        raise KripkeError("empty path")
    return seq_compose(_step_leaves(path))


def subpath_graphs(path: Path) -> list[SPGraph]:
    """Graphs of all contiguous subpaths with at least one step."""
    leaves = _step_leaves(path)
    n = len(leaves)
    return [seq_compose(leaves[i:j]) for i in range(n) for j in range(i + 1, n + 1)]


def graph_delta(g: SPGraph) -> StepDelta:
    """Net change between the first and last state of ``g``.

    Taken from the endpoint states when present; otherwise replayed from
    the step deltas labelling a purely sequential graph.
    """
    if g.endpoints is not None:
        return StepDelta.between(*g.endpoints)
    steps = [g] if isinstance(g, Leaf) else list(g.children) if isinstance(g, Seq) else None
    if not steps or not all(isinstance(s, Leaf) and isinstance(s.label, StepDelta) for s in steps):
        raise KripkeError(f"graph {g} has no endpoints")
    first: dict[Predicate, bool] = {}
    last: dict[Predicate, bool] = {}
    for s in steps:
        d = s.label
        for p in d.removed:
            first.setdefault(p, True)
            last[p] = False
        for p in d.added:
            first.setdefault(p, False)
            last[p] = True
    return StepDelta(
        {p for p in first if first[p] and not last[p]},
        {p for p in first if not first[p] and last[p]},
    )


def lts_satisfies(g: SPGraph, goal: StepDelta) -> bool:
    d = graph_delta(g)
    return goal.removed <= d.removed and goal.added <= d.added


def lts_optimal_label(graphs: Iterable[SPGraph]) -> StepDelta:
    """Intersection of the graphs' deltas: the optimal common goal."""
    deltas = [graph_delta(g) for g in graphs]
    if not deltas:
        raise KripkeError("no graphs")
    removed = frozenset.intersection(*(d.removed for d in deltas))
    added = frozenset.intersection(*(d.added for d in deltas))
    return StepDelta(removed, added)


class LTSRelation(GoalRelation):
    """Delta-goal relation over all subpaths of a set of paths."""

    def __init__(self, paths: Iterable[Path]):
        self.paths = tuple(paths)
        universe = {}
        for p in self.paths:
            for g in subpath_graphs(p):
                universe.setdefault(g, g)
        self._universe = frozenset(universe.values())
        self._delta = {g: graph_delta(g) for g in self._universe}

    @property
    def universe(self) -> frozenset[SPGraph]:
        return self._universe

    def sat(self, g: SPGraph, goal: StepDelta) -> bool:
        if not isinstance(goal, StepDelta):
            return False
        d = self._delta.get(g) or graph_delta(g)
        return goal.removed <= d.removed and goal.added <= d.added

    def find_optimal_label(self, graphs: Iterable[SPGraph]) -> StepDelta:
        return lts_optimal_label(graphs)

    def has_common_goal(self, graphs: Iterable[SPGraph]) -> bool:
        # the empty goal is achieved by every graph
        return True


def lts_goal_relation(sys: Optional[KripkeSystem], paths: Sequence[Path]) -> LTSRelation:
    paths = [p for p in paths if p.steps]
    if not paths:
        raise KripkeError("no non-empty paths")
    return LTSRelation(paths)
