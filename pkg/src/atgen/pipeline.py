"""End-to-end helpers: system spec to tree, and tree checking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .factor import SplitStrategy
from .goals import GoalRelation, labelling_violations, optimality_violations
from .kripke import (
    KripkeSystem,
    LTSRelation,
    Path,
    enumerate_paths,
    lts_goal_relation,
    minimal_paths,
    path_to_spgraph,
)
from .sp import SPGraph
from .synth import tree_generation
from .tree import AttackTree, semantics

__all__ = ["system_attacks", "generate_from_system", "CheckReport", "check_tree"]


def system_attacks(
    sys: KripkeSystem, max_depth: int = 3, max_paths: int = 10_000, minimal: bool = True
) -> tuple[list[Path], LTSRelation, frozenset[SPGraph]]:
    """Breach paths of ``sys``, the delta-goal relation over them, and their graphs.

    With ``minimal`` (the default) paths containing a redundant step are
    dropped before anything else is computed.
    """
    paths = [p for p in enumerate_paths(sys, max_depth, max_paths) if p.steps]
    if minimal:
        paths = minimal_paths(sys, paths)
    if not paths:
        return paths, None, frozenset()
    rel = lts_goal_relation(sys, paths)
    return paths, rel, frozenset(path_to_spgraph(p) for p in paths)


def generate_from_system(
    sys: KripkeSystem,
    max_depth: int = 3,
    max_paths: int = 10_000,
    minimal: bool = True,
    strategy: SplitStrategy = "full",
) -> tuple[AttackTree, LTSRelation, frozenset[SPGraph]]:
    paths, rel, graphs = system_attacks(sys, max_depth, max_paths, minimal)
    if not graphs:
        raise ValueError("no attack reaches the breach condition within the bounds")
    return tree_generation(rel, graphs, strategy), rel, graphs


@dataclass
class CheckReport:
    sound: bool
    missing: list[SPGraph] = field(default_factory=list)
    extra: list[SPGraph] = field(default_factory=list)
    label_violations: list = field(default_factory=list)
    optimality: Optional[list] = None

    @property
    def correctly_labelled(self) -> bool:
        return not self.label_violations

    @property
    def optimally_labelled(self) -> bool:
        return self.optimality is not None and not self.optimality

    @property
    def ok(self) -> bool:
        return self.sound and self.correctly_labelled and self.optimally_labelled

    def lines(self) -> list[str]:
        out = []
        if self.sound:
            out.append("soundness: PASS")
        elif self.extra:
            out.append(f"soundness: FAIL unsound, tree contains {self.extra[0]} outside the attack set")
        else:
            out.append(f"soundness: FAIL incomplete, tree misses {self.missing[0]}")
        if self.correctly_labelled:
            out.append("correct labelling: PASS")
        else:
            sub, g = self.label_violations[0]
            out.append(f"correct labelling: FAIL, {g} does not achieve {sub.label}")
        if self.optimality is None:
            out.append("optimal labelling: SKIP (tree is not correctly labelled)")
        elif not self.optimality:
            out.append("optimal labelling: PASS")
        else:
            sub, better = self.optimality[0]
            out.append(f"optimal labelling: FAIL, {sub.label} could be {better}")
        out.append("PASS" if self.ok else "FAIL")
        return out


def check_tree(t: AttackTree, rel: GoalRelation, attack_set: Iterable[SPGraph]) -> CheckReport:
    attack_set = frozenset(attack_set)
    sem = semantics(t)
    report = CheckReport(
        sound=sem == attack_set,
        missing=sorted(attack_set - sem),
        extra=sorted(sem - attack_set),
        label_violations=labelling_violations(t, rel),
    )
    if report.correctly_labelled:
        report.optimality = optimality_violations(t, rel)
    return report
