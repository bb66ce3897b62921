"""SAND attack trees and their series-parallel semantics."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterator, Optional, Sequence

from .sp import Kind, Leaf, SPGraph, label_key, set_lift_compose

__all__ = [
    "Op",
    "AttackTree",
    "leaf",
    "node",
    "top",
    "size",
    "subtrees",
    "semantics",
    "semantically_equal",
]


class Op(str, enum.Enum):
    OR = "OR"
    AND = "AND"
    SAND = "SAND"


@dataclass(frozen=True, eq=False)
class AttackTree:
    """A labelled SAND tree; a leaf when ``op`` is None.

    Equality treats OR and AND children as multisets and SAND children as
    sequences.
    """

    label: Hashable
    op: Optional[Op] = None
    children: tuple[AttackTree, ...] = field(default=())

    def __post_init__(self):
        if self.op is None and self.children:
            raise ValueError("a leaf cannot have children")
        if self.op is not None and not self.children:
            raise ValueError(f"{self.op.value} node needs at least one child")

    @property
    def is_leaf(self) -> bool:
        return self.op is None

    def canonical_key(self) -> tuple:
        if self.op is None:
            return (label_key(self.label),)
        keys = [c.canonical_key() for c in self.children]
        if self.op is not Op.SAND:
            keys.sort()
        return (label_key(self.label), self.op.value, tuple(keys))

    def __eq__(self, other):
        if not isinstance(other, AttackTree):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def __repr__(self):
        if self.op is None:
            return f"leaf({self.label!r})"
        return f"node({self.label!r}, {self.op.value}, {list(self.children)!r})"


def leaf(label: Hashable) -> AttackTree:
    return AttackTree(label)


def node(label: Hashable, op: Op | str, children: Sequence[AttackTree]) -> AttackTree:
    return AttackTree(label, Op(op), tuple(children))


def top(t: AttackTree) -> Any:
    return t.label


def size(t: AttackTree) -> int:
    return 1 + sum(size(c) for c in t.children)


def subtrees(t: AttackTree) -> list[AttackTree]:
    """All subtrees of ``t`` in pre-order, ``t`` first."""
    return list(_walk(t))


def _walk(t: AttackTree) -> Iterator[AttackTree]:
    yield t
    for c in t.children:
        yield from _walk(c)


def semantics(t: AttackTree) -> frozenset[SPGraph]:
    """The set of SP graphs denoted by ``t``.

    A leaf labelled ``b`` denotes the single edge ``b``; its label is used as
    edge label unchanged.
    """
    if t.op is None:
        return frozenset([Leaf(t.label)])
    parts = [semantics(c) for c in t.children]
    if t.op is Op.OR:
        return frozenset().union(*parts)
    return set_lift_compose(Kind.PAR if t.op is Op.AND else Kind.SEQ, parts)


def semantically_equal(t1: AttackTree, t2: AttackTree) -> bool:
    return semantics(t1) == semantics(t2)
