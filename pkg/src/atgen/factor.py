"""Sum-of-products expressions over an idempotent semiring and their factorisation.

The carrier is the powerset of a semigroup of atoms: a product of sets is
the set of pointwise products and a sum is set union, so ``f + f == f``
and there is no multiplicative identity.  A cube is a tuple of atoms; in
commutative mode cubes are kept sorted and behave as multisets.

:func:`exp_factorise` is a greedy heuristic: it looks for a large
divisor/quotient rectangle among the two-way splits of the cubes, divides
it out, and recurses on both sides.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Hashable, Iterable, Literal, Optional, Sequence

__all__ = [
    "Cube",
    "SopExpression",
    "Factorisation",
    "sop",
    "build_r_pairs",
    "divide",
    "greedy_rectangle",
    "exp_factorise",
    "expand",
    "multiply",
    "parse_expression",
    "format_expression",
    "format_factorisation",
]

Cube = tuple
SplitStrategy = Literal["full", "lex"]


@dataclass(frozen=True)
class SopExpression:
    cubes: frozenset[Cube]
    commutative: bool = False

    def __post_init__(self):
        if any(len(c) == 0 for c in self.cubes):
            raise ValueError("cubes must be non-empty")
        if self.commutative:
            object.__setattr__(self, "cubes", frozenset(tuple(sorted(c)) for c in self.cubes))

    def __iter__(self):
        return iter(sorted(self.cubes))

    def __len__(self):
        return len(self.cubes)

    def __str__(self):
        return format_expression(self)

    def atoms(self) -> set:
        return {a for c in self.cubes for a in c}


def sop(cubes: Iterable[Sequence[Hashable]], commutative: bool = False) -> SopExpression:
    return SopExpression(frozenset(tuple(c) for c in cubes), commutative)


@dataclass(frozen=True)
class Factorisation:
    """``factors[0] · factors[1] · ... + remainder``.

    A single factor with no remainder means the expression was left as is.
    """

    factors: tuple[SopExpression, ...]
    remainder: Optional[SopExpression] = None

    @property
    def commutative(self) -> bool:
        return self.factors[0].commutative

    @property
    def is_trivial(self) -> bool:
        return len(self.factors) < 2

    def __str__(self):
        return format_factorisation(self)


def _mul(x: Cube, y: Cube, commutative: bool) -> Cube:
    return tuple(sorted(x + y)) if commutative else x + y


def multiply(factors: Sequence[SopExpression]) -> SopExpression:
    commutative = factors[0].commutative
    cubes = {()}
    for f in factors:
        cubes = {_mul(c, d, commutative) for c in cubes for d in f.cubes}
    return SopExpression(frozenset(cubes), commutative)


def _splits(cube: Cube, commutative: bool, strategy: SplitStrategy):
    if not commutative or strategy == "lex":
        for i in range(1, len(cube)):
            yield cube[:i], cube[i:]
        return
    counts = sorted(Counter(cube).items())
    atoms = [a for a, _ in counts]
    for take in itertools.product(*(range(n + 1) for _, n in counts)):
        x = tuple(a for a, k in zip(atoms, take) for _ in range(k))
        if 0 < len(x) < len(cube):
            y = tuple(a for (a, n), k in zip(counts, take) for _ in range(n - k))
            yield x, y


def build_r_pairs(f: SopExpression, strategy: SplitStrategy = "full") -> set[tuple[Cube, Cube]]:
    """All pairs ``(x, y)`` with ``x · y`` a cube of ``f``."""
    return {p for c in f.cubes for p in _splits(c, f.commutative, strategy)}


def divide(
    f: SopExpression, d: SopExpression, side: Literal["left", "right"] = "left"
) -> tuple[Optional[SopExpression], Optional[SopExpression]]:
    """Largest ``q`` with ``d·q`` (left) or ``q·d`` (right) inside ``f``.

    Returns ``(quotient, remainder)``; either is None when empty.
    """
    pairs = build_r_pairs(f)
    cands: Optional[set] = None
    for dc in d.cubes:
        if side == "left":
            here = {y for x, y in pairs if x == dc}
        else:
            here = {x for x, y in pairs if y == dc}
        cands = here if cands is None else cands & here
    if not cands:
        return None, f
    q = SopExpression(frozenset(cands), f.commutative)
    covered = multiply([d, q] if side == "left" else [q, d]).cubes
    rest = f.cubes - covered
    return q, (SopExpression(rest, f.commutative) if rest else None)


def _projections(pairs: Iterable[tuple[Cube, Cube]]):
    left: dict[Cube, set[Cube]] = defaultdict(set)
    right: dict[Cube, set[Cube]] = defaultdict(set)
    for x, y in pairs:
        left[x].add(y)
        right[y].add(x)
    return left, right


def _intersect(sets: Iterable[set]) -> set:
    sets = list(sets)
    out = set(sets[0])
    for s in sets[1:]:
        out &= s
    return out


def greedy_rectangle(
    f: SopExpression, strategy: SplitStrategy = "full"
) -> Optional[tuple[set[Cube], set[Cube]]]:
    """Divisor cubes ``X`` and quotient cubes ``Y`` with ``X·Y`` inside ``f``.

    The greedy loop repeatedly takes the cube whose projection is largest,
    on the left (``x`` with most partners ``y``) or on the right, and prunes
    the pair set accordingly.  The result is then closed: ``Y`` becomes the
    intersection of the left projections of ``X`` and ``X`` the intersection
    of the right projections of ``Y``, which is the exact quotient of one by
    the other.  Returns None when ``f`` has no two-way split.
    """
    r0 = build_r_pairs(f, strategy)
    if not r0:
        return None
    left0, right0 = _projections(r0)
    pairs = set(r0)
    xs: set[Cube] = set()
    ys: set[Cube] = set()
    last = "x"
    while pairs:
        left, right = _projections(pairs)
        x_max = min(left, key=lambda x: (-len(left[x]), x))
        y_max = min(right, key=lambda y: (-len(right[y]), y))
        if len(left[x_max]) >= len(right[y_max]):
            xs.add(x_max)
            ys = set(left[x_max])
            pairs = {(x, y) for x, y in pairs if y in ys and x != x_max}
            last = "x"
        else:
            ys.add(y_max)
            xs = set(right[y_max])
            pairs = {(x, y) for x, y in pairs if x in xs and y != y_max}
            last = "y"
    # Interleaved branches can leave X·Y partly outside f; keep the side
    # that was chosen last and rebuild the other from it.
    if last == "x":
        xs = {x for x in xs if ys <= left0[x]}
        ys = _intersect(left0[x] for x in xs)
        xs = _intersect(right0[y] for y in ys)
    else:
        ys = {y for y in ys if xs <= right0[y]}
        xs = _intersect(right0[y] for y in ys)
        ys = _intersect(left0[x] for x in xs)
    return xs, ys


def exp_factorise(f: SopExpression, strategy: SplitStrategy = "full") -> Factorisation:
    """Greedy factorisation of ``f`` into a product chain plus a remainder."""
    rect = greedy_rectangle(f, strategy)
    if rect is None:
        return Factorisation((f,))
    xs, ys = rect
    x = SopExpression(frozenset(xs), f.commutative)
    y = SopExpression(frozenset(ys), f.commutative)
    rest = f.cubes - multiply([x, y]).cubes
    return Factorisation(
        _chain(x, strategy) + _chain(y, strategy),
        SopExpression(rest, f.commutative) if rest else None,
    )


def _chain(f: SopExpression, strategy: SplitStrategy) -> tuple[SopExpression, ...]:
    sub = exp_factorise(f, strategy)
    return sub.factors if sub.remainder is None else (f,)


def expand(fac: Factorisation) -> SopExpression:
    product = multiply(fac.factors)
    if fac.remainder is None:
        return product
    return SopExpression(product.cubes | fac.remainder.cubes, product.commutative)


# -- text format: atoms joined by "." inside a cube, cubes joined by "+" --

_TOKEN = re.compile(r"\s*(?:([()+.])|([^\s()+.]+))")


class ExpressionSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"column {pos + 1}: {msg}")
        self.text = text
        self.pos = pos


def parse_expression(text: str, commutative: bool = False) -> SopExpression:
    """Parse ``a.a.b + (a + b).c`` style text, expanding any parentheses."""
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExpressionSyntaxError(text, pos, "unexpected character")
        tokens.append((m.group(1) or m.group(2), m.start(m.lastindex), m.group(2) is not None))
        pos = m.end()
    tokens.append(("", len(text), False))
    i = 0

    def peek():
        return tokens[i]

    def take(expected=None):
        nonlocal i
        tok = tokens[i]
        if expected is not None and tok[0] != expected:
            raise ExpressionSyntaxError(text, tok[1], f"expected {expected!r}")
        i += 1
        return tok

    def sum_() -> set:
        cubes = product()
        while peek()[0] == "+":
            take("+")
            cubes |= product()
        return cubes

    def product() -> set:
        cubes = factor()
        while peek()[0] == ".":
            take(".")
            rhs = factor()
            cubes = {_mul(c, d, commutative) for c in cubes for d in rhs}
        return cubes

    def factor() -> set:
        tok, at, is_atom = peek()
        if tok == "(":
            take("(")
            cubes = sum_()
            take(")")
            return cubes
        if is_atom:
            take()
            return {(tok,)}
        raise ExpressionSyntaxError(text, at, "expected an atom or '('")

    cubes = sum_()
    if peek()[0] != "":
        raise ExpressionSyntaxError(text, peek()[1], "trailing input")
    return SopExpression(frozenset(cubes), commutative)


def _fmt_cube(c: Cube) -> str:
    return ".".join(str(a) for a in c)


def format_expression(f: SopExpression) -> str:
    return " + ".join(_fmt_cube(c) for c in sorted(f.cubes))


def format_factorisation(fac: Factorisation) -> str:
    if fac.is_trivial:
        text = format_expression(fac.factors[0])
    else:
        parts = []
        for f in fac.factors:
            s = format_expression(f)
            parts.append(f"({s})" if len(f) > 1 else s)
        text = ".".join(parts)
    if fac.remainder is not None:
        text += " + " + format_expression(fac.remainder)
    return text
