"""Series-parallel graphs over edge labels.

An SP graph is kept in its algebraic form: a single edge (``Leaf``), a
sequential composition (``Seq``) or a parallel composition (``Par``).
Compositions are flattened to maximal arity on construction and the
children of ``Par`` are kept sorted, so structural equality coincides with
equality of the graphs up to vertex renaming.

Graphs derived from a transition-system subpath may carry ``endpoints``
(the first and last state of the subpath).  This is metadata only and takes
no part in equality, hashing or ordering.
"""

from __future__ import annotations

import enum
import itertools
from typing import Any, Hashable, Iterable, Optional, Sequence

__all__ = [
    "Kind",
    "SPGraph",
    "Leaf",
    "Seq",
    "Par",
    "EmptyCompositionError",
    "label_key",
    "seq_compose",
    "par_compose",
    "compose",
    "decompose",
    "is_homogeneous",
    "composition_kind",
    "set_lift_compose",
    "canonical",
]


class EmptyCompositionError(ValueError):
    pass


class Kind(enum.Enum):
    SIMPLE = "simple"
    SEQ = "sequential"
    PAR = "parallel"


def label_key(label: Any) -> tuple:
    """Total order over heterogeneous labels.

    Labels providing ``sort_key()`` (e.g. step deltas) sort after plain
    values; plain values are grouped by type name first so that strings and
    integers never get compared with each other.
    """
    if hasattr(label, "sort_key"):
        return (1, type(label).__name__, label.sort_key())
    return (0, type(label).__name__, label)


class SPGraph:
    """Base class; use :class:`Leaf`, :class:`Seq` or :class:`Par`."""

    __slots__ = ("_key", "_hash", "endpoints")

    kind: Kind
    _rank: int

    def _init(self, key: tuple, endpoints: Optional[tuple]) -> None:
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))
        object.__setattr__(self, "endpoints", endpoints)

    def __setattr__(self, name, value):
        raise AttributeError("SP graphs are immutable")

    def sort_key(self) -> tuple:
        return self._key

    def __eq__(self, other):
        if not isinstance(other, SPGraph):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other: SPGraph) -> bool:
        return self._key < other._key

    def __le__(self, other: SPGraph) -> bool:
        return self._key <= other._key

    def __gt__(self, other: SPGraph) -> bool:
        return self._key > other._key

    def __ge__(self, other: SPGraph) -> bool:
        return self._key >= other._key

    @property
    def children(self) -> tuple[SPGraph, ...]:
        return ()

    def leaves(self) -> list[Leaf]:
        if isinstance(self, Leaf):
            return [self]
        return [leaf for c in self.children for leaf in c.leaves()]

    def without_endpoints(self) -> SPGraph:
        raise NotImplementedError


class Leaf(SPGraph):
    __slots__ = ("label",)
    kind = Kind.SIMPLE
    _rank = 0

    def __init__(self, label: Hashable, endpoints: Optional[tuple] = None):
        object.__setattr__(self, "label", label)
        self._init((0, label_key(label)), endpoints)

    def without_endpoints(self) -> Leaf:
        return self if self.endpoints is None else Leaf(self.label)

    def __repr__(self):
        return f"Leaf({self.label!r})"

    def __str__(self):
        return str(self.label)


class Seq(SPGraph):
    """Sequential composition; build through :func:`seq_compose`."""

    __slots__ = ("_children",)
    kind = Kind.SEQ
    _rank = 1

    def __init__(self, children: Sequence[SPGraph], endpoints: Optional[tuple] = None):
        children = tuple(children)
        if len(children) < 2 or any(isinstance(c, Seq) for c in children):
            raise ValueError("Seq needs at least two non-sequential children")
        object.__setattr__(self, "_children", children)
        self._init((1, tuple(c._key for c in children)), endpoints)

    @property
    def children(self) -> tuple[SPGraph, ...]:
        return self._children

    def without_endpoints(self) -> Seq:
        return Seq(self._children)

    def __repr__(self):
        return f"Seq({list(self._children)!r})"

    def __str__(self):
        return "·".join(_paren(c) for c in self._children)


class Par(SPGraph):
    """Parallel composition; build through :func:`par_compose`."""

    __slots__ = ("_children",)
    kind = Kind.PAR
    _rank = 2

    def __init__(self, children: Iterable[SPGraph]):
        children = tuple(sorted(children))
        if len(children) < 2 or any(isinstance(c, Par) for c in children):
            raise ValueError("Par needs at least two non-parallel children")
        object.__setattr__(self, "_children", children)
        self._init((2, tuple(c._key for c in children)), None)

    @property
    def children(self) -> tuple[SPGraph, ...]:
        return self._children

    def without_endpoints(self) -> Par:
        return self

    def __repr__(self):
        return f"Par({list(self._children)!r})"

    def __str__(self):
        return "∥".join(_paren(c) for c in self._children)


def _paren(g: SPGraph) -> str:
    return str(g) if isinstance(g, Leaf) else f"({g})"


def seq_compose(gs: Sequence[SPGraph]) -> SPGraph:
    """Sequential composition of ``gs`` in order, flattened.

    Endpoint metadata is kept when every child carries endpoints and they
    chain up (each end state is the next start state).
    """
    if not gs:
        raise EmptyCompositionError("empty composition")
    if len(gs) == 1:
        return gs[0]
    flat: list[SPGraph] = []
    for g in gs:
        flat.extend(g.children if isinstance(g, Seq) else (g,))
    endpoints = None
    ends = [g.endpoints for g in gs]
    if all(e is not None for e in ends) and all(
        a[1] == b[0] for a, b in zip(ends, ends[1:])
    ):
        endpoints = (ends[0][0], ends[-1][1])
    return Seq(flat, endpoints)


def par_compose(gs: Sequence[SPGraph]) -> SPGraph:
    if not gs:
        raise EmptyCompositionError("empty composition")
    if len(gs) == 1:
        return gs[0]
    flat: list[SPGraph] = []
    for g in gs:
        flat.extend(g.children if isinstance(g, Par) else (g.without_endpoints(),))
    return Par(flat)


def compose(kind: Kind, gs: Sequence[SPGraph]) -> SPGraph:
    if kind is Kind.SEQ:
        return seq_compose(gs)
    if kind is Kind.PAR:
        return par_compose(gs)
    raise ValueError(f"cannot compose with kind {kind}")


def decompose(g: SPGraph) -> tuple[Kind, list[SPGraph]]:
    """Maximal top-level decomposition of ``g``."""
    if isinstance(g, Leaf):
        return Kind.SIMPLE, [g]
    return g.kind, list(g.children)


def composition_kind(graphs: Iterable[SPGraph]) -> Kind:
    """PAR if some member is a parallel composition, SEQ otherwise."""
    return Kind.PAR if any(isinstance(g, Par) for g in graphs) else Kind.SEQ


def is_homogeneous(graphs: Iterable[SPGraph]) -> bool:
    """True iff the graphs can all be read in one composition kind.

    Simple graphs fit either kind, so a set is non-homogeneous exactly when
    it mixes a sequential and a parallel composition.
    """
    graphs = list(graphs)
    if not graphs:
        raise ValueError("empty attack set")
    kinds = {g.kind for g in graphs}
    return not (Kind.SEQ in kinds and Kind.PAR in kinds)


def set_lift_compose(kind: Kind, sets: Sequence[Iterable[SPGraph]]) -> frozenset[SPGraph]:
    """Pointwise composition over the Cartesian product of ``sets``."""
    sets = [canonical(s) for s in sets]
    if not sets or any(not s for s in sets):
        raise EmptyCompositionError("set-lifted composition needs non-empty sets")
    return frozenset(compose(kind, combo) for combo in itertools.product(*sets))


def canonical(graphs: Iterable[SPGraph]) -> list[SPGraph]:
    """Deduplicated graphs in canonical order."""
    return sorted(set(graphs))
