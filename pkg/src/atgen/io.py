"""JSON forms for graphs, trees, relations, systems and paths; DOT/text rendering."""

from __future__ import annotations

import json
from typing import Any, Hashable, Iterable, Sequence

from .goals import TableRelation
from .kripke import (
    KripkeError,
    KripkeSystem,
    Path,
    Predicate,
    Step,
    StepDelta,
    TransitionRule,
    parse_term,
)
from .sp import Leaf, Par, Seq, SPGraph, canonical, par_compose, seq_compose
from .tree import AttackTree, Op, leaf, node

__all__ = [
    "FormatError",
    "label_to_json",
    "label_from_json",
    "graph_to_json",
    "graph_from_json",
    "tree_to_json",
    "tree_from_json",
    "relation_to_json",
    "relation_from_json",
    "system_to_json",
    "system_from_json",
    "path_to_json",
    "path_from_json",
    "loads",
    "dumps",
    "render_dot",
    "render_text",
    "label_text",
]


class FormatError(ValueError):
    """Well-formed JSON that does not match the expected shape."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    return json.loads(text)


# -- predicates and labels --

def pred_to_json(p: Predicate) -> dict:
    return {"p": p.name, "args": list(p.args)}


def pred_from_json(obj: Any) -> Predicate:
    if isinstance(obj, str):
        return parse_term(obj)
    if not isinstance(obj, dict) or "p" not in obj:
        raise FormatError(f"bad predicate {obj!r}")
    return Predicate(str(obj["p"]), tuple(str(a) for a in obj.get("args", [])))


def label_to_json(label: Hashable) -> Any:
    if isinstance(label, StepDelta):
        return {
            "removed": [pred_to_json(p) for p in sorted(label.removed)],
            "added": [pred_to_json(p) for p in sorted(label.added)],
        }
    if isinstance(label, str):
        return label
    raise FormatError(f"cannot serialise label {label!r}")


def label_from_json(obj: Any) -> Hashable:
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict) and set(obj) <= {"removed", "added"}:
        return StepDelta(
            frozenset(pred_from_json(p) for p in obj.get("removed", [])),
            frozenset(pred_from_json(p) for p in obj.get("added", [])),
        )
    raise FormatError(f"bad label {obj!r}")


def label_text(label: Hashable) -> str:
    return str(label)


# -- SP graphs --

def _state_to_json(state: Iterable[Predicate]) -> list:
    return [pred_to_json(p) for p in sorted(state)]


def _state_from_json(obj: Any) -> frozenset:
    if not isinstance(obj, list):
        raise FormatError(f"bad state {obj!r}")
    return frozenset(pred_from_json(p) for p in obj)


def graph_to_json(g: SPGraph) -> dict:
    if isinstance(g, Leaf):
        out = {"leaf": label_to_json(g.label)}
    elif isinstance(g, Seq):
        out = {"seq": [graph_to_json(c) for c in g.children]}
    else:
        out = {"par": [graph_to_json(c) for c in g.children]}
    if g.endpoints is not None:
        out["endpoints"] = [_state_to_json(s) for s in g.endpoints]
    return out


def graph_from_json(obj: Any) -> SPGraph:
    if not isinstance(obj, dict):
        raise FormatError(f"bad SP graph {obj!r}")
    endpoints = None
    if "endpoints" in obj:
        ep = obj["endpoints"]
        if not isinstance(ep, list) or len(ep) != 2:
            raise FormatError("endpoints must be a pair of states")
        endpoints = (_state_from_json(ep[0]), _state_from_json(ep[1]))
    if "leaf" in obj:
        return Leaf(label_from_json(obj["leaf"]), endpoints)
    for key, compose in (("seq", seq_compose), ("par", par_compose)):
        if key in obj:
            parts = obj[key]
            if not isinstance(parts, list) or not parts:
                raise FormatError(f"{key!r} needs a non-empty list")
            g = compose([graph_from_json(p) for p in parts])
            if endpoints is not None and isinstance(g, Seq):
                g = Seq(g.children, endpoints)
            return g
    raise FormatError(f"bad SP graph {obj!r}")


def graphs_from_json(obj: Any) -> list[SPGraph]:
    if not isinstance(obj, list):
        raise FormatError("expected a list of SP graphs")
    return [graph_from_json(g) for g in obj]


# -- trees --

def tree_to_json(t: AttackTree) -> dict:
    if t.is_leaf:
        return {"label": label_to_json(t.label)}
    return {
        "label": label_to_json(t.label),
        "op": t.op.value,
        "children": [tree_to_json(c) for c in t.children],
    }


def tree_from_json(obj: Any) -> AttackTree:
    if not isinstance(obj, dict) or "label" not in obj:
        raise FormatError(f"bad tree {obj!r}")
    label = label_from_json(obj["label"])
    if "op" not in obj:
        if obj.get("children"):
            raise FormatError("leaf with children; missing 'op'")
        return leaf(label)
    try:
        op = Op(obj["op"])
    except ValueError:
        raise FormatError(f"unknown operator {obj['op']!r}") from None
    children = obj.get("children")
    if not isinstance(children, list) or not children:
        raise FormatError(f"{op.value} node needs children")
    return node(label, op, [tree_from_json(c) for c in children])


# -- table relations --

def relation_to_json(rel: TableRelation) -> dict:
    universe = canonical(rel.universe)
    index = {g: i for i, g in enumerate(universe)}
    return {
        "goals": [label_to_json(g) for g in rel.goals],
        "universe": [graph_to_json(g) for g in universe],
        "sat": [[index[g], label_to_json(goal)] for g, goal in rel.pairs()],
    }


def relation_from_json(obj: Any) -> TableRelation:
    if not isinstance(obj, dict) or not {"goals", "universe", "sat"} <= set(obj):
        raise FormatError("relation needs 'goals', 'universe' and 'sat'")
    goals = [label_from_json(g) for g in obj["goals"]]
    universe = graphs_from_json(obj["universe"])
    pairs = []
    for entry in obj["sat"]:
        if not isinstance(entry, list) or len(entry) != 2 or not isinstance(entry[0], int):
            raise FormatError(f"bad sat entry {entry!r}")
        i, goal = entry
        if not 0 <= i < len(universe):
            raise FormatError(f"sat entry refers to universe index {i}")
        pairs.append((universe[i], label_from_json(goal)))
    return TableRelation(goals, universe, pairs)


# -- systems and paths --

def _term_text(p: Predicate) -> str:
    return str(p) if p.args else p.name


def _var(name: Any) -> str:
    name = str(name)
    return name if name.startswith("?") else "?" + name


def system_to_json(sys: KripkeSystem) -> dict:
    return {
        "sorts": {k: list(v) for k, v in sys.sorts.items()},
        "initial": _state_to_json(sys.initial),
        "rules": [
            {
                "name": r.name,
                "vars": {k.lstrip("?"): v for k, v in r.sorts.items()},
                "premises": [pred_to_json(p) for p in r.premises],
                "action": _term_text(r.action),
                "add": [pred_to_json(p) for p in r.additions],
                "remove": [pred_to_json(p) for p in r.removals],
            }
            for r in sys.rules
        ],
        "breach": [pred_to_json(p) for p in sys.breach],
    }


def system_from_json(obj: Any) -> KripkeSystem:
    if not isinstance(obj, dict):
        raise FormatError("system spec must be an object")
    missing = {"sorts", "initial", "rules", "breach"} - set(obj)
    if missing:
        raise FormatError(f"system spec lacks {sorted(missing)}")
    try:
        rules = tuple(
            TransitionRule(
                name=str(r["name"]),
                sorts={_var(k): str(v) for k, v in r.get("vars", {}).items()},
                premises=tuple(pred_from_json(p) for p in r.get("premises", [])),
                action=parse_term(str(r.get("action", r["name"]))),
                additions=tuple(pred_from_json(p) for p in r.get("add", [])),
                removals=tuple(pred_from_json(p) for p in r.get("remove", [])),
            )
            for r in obj["rules"]
        )
        return KripkeSystem(
            sorts={str(k): tuple(str(c) for c in v) for k, v in obj["sorts"].items()},
            rules=rules,
            initial=_state_from_json(obj["initial"]),
            breach=tuple(pred_from_json(p) for p in obj["breach"]),
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"bad system spec: {exc}") from None
    except KripkeError as exc:
        raise FormatError(str(exc)) from None


def path_to_json(path: Path) -> dict:
    return {
        "states": [_state_to_json(s) for s in path.states],
        "steps": [
            {
                "action": s.action,
                "rule": s.rule,
                "binding": dict(s.binding),
                **label_to_json(s.delta),
            }
            for s in path.steps
        ],
    }


def path_from_json(obj: Any) -> Path:
    try:
        states = tuple(_state_from_json(s) for s in obj["states"])
        steps = tuple(
            Step(
                action=s["action"],
                delta=label_from_json({"removed": s.get("removed", []), "added": s.get("added", [])}),
                rule=s.get("rule", ""),
                binding=tuple(sorted(s.get("binding", {}).items())),
            )
            for s in obj["steps"]
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad path: {exc}") from None
    if len(states) != len(steps) + 1:
        raise FormatError("a path needs one more state than steps")
    return Path(states, steps)


# -- rendering --

_OP_SHAPE = {Op.OR: "ellipse", Op.AND: "box", Op.SAND: "cds"}
_EDGE_STYLE = {
    Op.OR: "",
    Op.AND: ', comment="arc", style=bold, arrowhead=none',
    Op.SAND: ', comment="arrow", color=blue',
}


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def render_dot(t: AttackTree, name: str = "attack_tree") -> str:
    """Graphviz source for ``t``.

    OR nodes are ellipses, AND nodes boxes, SAND nodes ``cds`` shapes.
    Edges below an AND node carry ``comment="arc"`` and a bold style (the
    connecting bar); edges below a SAND node carry ``comment="arrow"`` and
    are drawn left to right in child order.  Leaves are plain text.
    """
    lines = [f"digraph {name} {{", "  ordering=out;", "  node [fontname=Helvetica];"]
    counter = 0

    def visit(s: AttackTree) -> str:
        nonlocal counter
        nid = f"n{counter}"
        counter += 1
        text = _dot_escape(label_text(s.label))
        if s.is_leaf:
            lines.append(f'  {nid} [label="{text}", shape=plaintext];')
            return nid
        lines.append(f'  {nid} [label="{text}\\n{s.op.value}", shape={_OP_SHAPE[s.op]}];')
        if s.op is not Op.OR:
            lines.append(f"  // {nid}: {s.op.value} {'arc' if s.op is Op.AND else 'arrow'}")
        for i, c in enumerate(s.children):
            cid = visit(c)
            order = f", taillabel={i + 1}" if s.op is Op.SAND else ""
            lines.append(f"  {nid} -> {cid} [dir=none{_EDGE_STYLE[s.op]}{order}];")
        return nid

    visit(t)
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_text(t: AttackTree) -> str:
    """Indented outline, one node per line, operator in brackets."""
    out: list[str] = []

    def visit(s: AttackTree, depth: int) -> None:
        marker = "" if s.is_leaf else f" [{s.op.value}]"
        out.append("  " * depth + label_text(s.label) + marker)
        for c in s.children:
            visit(c, depth + 1)

    visit(t, 0)
    return "\n".join(out) + "\n"
