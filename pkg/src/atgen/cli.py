"""Command-line interface.

Exit codes: 0 success, 1 failed check, 2 input error, 3 generation infeasible.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Optional, Sequence

from . import io
from .factor import ExpressionSyntaxError, exp_factorise, format_factorisation, parse_expression
from .goals import GoalError, NoCommonGoalError
from .kripke import KripkeError
from .pipeline import check_tree, generate_from_system, system_attacks
from .synth import tree_generation

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read_json(path: str, parse: Callable):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return parse(obj)
    except (io.FormatError, GoalError, KripkeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_paths(args) -> int:
    system = _read_json(args.spec, io.system_from_json)
    from .kripke import enumerate_paths, minimal_paths

    paths = enumerate_paths(system, args.max_depth, args.max_paths)
    if args.minimal:
        paths = minimal_paths(system, paths)
    _write(io.dumps([io.path_to_json(p) for p in paths]), args.out)
    return EXIT_OK


def _load_attacks(args):
    """(relation, attack set) from either --spec or --attacks/--goals."""
    if args.spec:
        if args.attacks or args.goals:
            raise InputError("use either --spec or --attacks/--goals, not both")
        system = _read_json(args.spec, io.system_from_json)
        _, rel, graphs = system_attacks(system, args.max_depth, args.max_paths, not args.all_paths)
        if not graphs:
            raise InputError(f"{args.spec}: no attack reaches the breach condition within the bounds")
        return rel, graphs
    if not (args.attacks and args.goals):
        raise InputError("need --spec, or both --attacks and --goals")
    graphs = _read_json(args.attacks, io.graphs_from_json)
    rel = _read_json(args.goals, io.relation_from_json)
    if not graphs:
        raise InputError(f"{args.attacks}: empty attack set")
    return rel, frozenset(graphs)


def cmd_generate(args) -> int:
    rel, graphs = _load_attacks(args)
    try:
        tree = tree_generation(rel, graphs, args.split_strategy)
    except NoCommonGoalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    _write(io.dumps(io.tree_to_json(tree)), args.out)
    return EXIT_OK


def cmd_factor(args) -> int:
    text = args.expr
    if text is None:
        if args.file is None:
            raise InputError("need --expr or --file")
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"{args.file}: {exc.strerror}") from None
    try:
        f = parse_expression(text, args.commutative)
    except ExpressionSyntaxError as exc:
        raise InputError(f"expression: {exc}") from None
    if not f.cubes:
        raise InputError("expression: empty")
    print(format_factorisation(exp_factorise(f, args.split_strategy)))
    return EXIT_OK


def cmd_check(args) -> int:
    tree = _read_json(args.tree, io.tree_from_json)
    rel, graphs = _load_attacks(args)
    report = check_tree(tree, rel, graphs)
    print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_CHECK


def cmd_render(args) -> int:
    tree = _read_json(args.tree, io.tree_from_json)
    _write(io.render_dot(tree) if args.format == "dot" else io.render_text(tree), args.out)
    return EXIT_OK


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", help="system spec (JSON)")
    p.add_argument("--attacks", help="attack set: JSON list of SP graphs")
    p.add_argument("--goals", help="goal relation (JSON)")
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--max-paths", type=int, default=10_000)
    p.add_argument("--all-paths", action="store_true", help="keep paths with redundant steps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="atgen", description="SAND attack-tree synthesis")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("paths", help="enumerate breach paths of a system spec")
    p.add_argument("spec")
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--max-paths", type=int, default=10_000)
    p.add_argument("--minimal", action="store_true", help="drop paths with redundant steps")
    p.add_argument("--out")
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("generate", help="synthesise an attack tree")
    _add_input_flags(p)
    p.add_argument("--split-strategy", choices=["full", "lex"], default="full")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("factor", help="factorise a sum-of-products expression")
    p.add_argument("--expr", help="expression text, e.g. 'a.a + a.b'")
    p.add_argument("--file", help="read the expression from a file")
    p.add_argument("--commutative", action="store_true")
    p.add_argument("--split-strategy", choices=["full", "lex"], default="full")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("check", help="check soundness and labelling of a tree")
    p.add_argument("--tree", required=True)
    _add_input_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("render", help="render a tree as DOT or text")
    p.add_argument("--tree", required=True)
    p.add_argument("--format", choices=["dot", "text"], default="dot")
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
