from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from atgen.factor import (
    ExpressionSyntaxError,
    Factorisation,
    build_r_pairs,
    divide,
    exp_factorise,
    expand,
    format_expression,
    format_factorisation,
    greedy_rectangle,
    multiply,
    parse_expression,
    sop,
)

from instances import random_sop

CUBIC = "a.a.a + b.a.a + a.b.b + b.b.b"


def t(word: str) -> tuple:
    return tuple(word)


class TestRPairs:
    def test_commutative_run(self):
        f = parse_expression(CUBIC, commutative=True)
        pairs = build_r_pairs(f)
        assert len(pairs) == 12
        for x, y in [("a", "aa"), ("a", "ab"), ("a", "bb"), ("b", "aa"), ("b", "ab"), ("b", "bb")]:
            assert (t(x), t(y)) in pairs

    def test_non_commutative_run(self):
        f = parse_expression(CUBIC)
        expected = {("a", "aa"), ("a", "bb"), ("aa", "a"), ("b", "aa"), ("b", "bb"), ("ba", "a"), ("ab", "b"), ("bb", "b")}
        assert build_r_pairs(f) == {(t(x), t(y)) for x, y in expected}

    def test_no_long_cubes(self):
        assert build_r_pairs(parse_expression("a + b")) == set()


class TestDivide:
    f = parse_expression("a.a + a.b + b.b")

    def test_left(self):
        q, r = divide(self.f, sop(["a"]), "left")
        assert q == sop(["a", "b"]) and r == sop([t("bb")])

    def test_right(self):
        q, r = divide(self.f, sop(["b"]), "right")
        assert q == sop(["a", "b"]) and r == sop([t("aa")])

    def test_no_quotient(self):
        f = sop(["a"])
        assert divide(f, sop(["b"])) == (None, f)


class TestFactorise:
    def test_commutative_cube(self):
        fac = exp_factorise(parse_expression(CUBIC, commutative=True))
        assert fac.remainder is None
        assert fac.factors == (sop(["a", "b"], True),) * 3
        assert format_factorisation(fac) == "(a + b).(a + b).(a + b)"

    def test_non_commutative_cube(self):
        fac = exp_factorise(parse_expression(CUBIC))
        assert fac.remainder is None
        assert fac.factors == (sop(["a", "b"]), sop([t("aa"), t("bb")]))
        assert format_factorisation(fac) == "(a + b).(a.a + b.b)"

    def test_single_cube(self):
        fac = exp_factorise(sop([t("ab")]))
        assert fac.factors == (sop(["a"]), sop(["b"])) and fac.remainder is None

    def test_shared_suffix(self):
        fac = exp_factorise(parse_expression("w.ec.l + b.l + x.l"))
        assert format_factorisation(fac) == "(b + w.ec + x).l"

    def test_nothing_to_factor(self):
        f = parse_expression("a + b")
        assert exp_factorise(f) == Factorisation((f,))

    def test_lex_strategy_still_round_trips(self):
        f = parse_expression(CUBIC, commutative=True)
        assert expand(exp_factorise(f, "lex")) == f

    def test_non_unique_factored_form(self):
        # a∥a∥a + a∥a∥b + a∥b∥b + b∥b∥b factors more than one way; only the
        # expansion is pinned down.
        f = parse_expression(CUBIC, commutative=True)
        for strategy in ("full", "lex"):
            fac = exp_factorise(f, strategy)
            assert expand(fac) == f
        alt = Factorisation((sop(["a", "b"], True), sop([t("aa"), t("ab"), t("bb")], True)))
        assert expand(alt) == f
        assert alt != exp_factorise(f)


class TestExpand:
    def test_cube_of_sum(self):
        out = expand(Factorisation((sop(["a", "b"], True),) * 3))
        assert out == parse_expression("a.a.a + a.a.b + a.b.b + b.b.b", commutative=True)
        assert len(out) == 4

    def test_single_factor(self):
        f = parse_expression("a.b + c")
        assert expand(Factorisation((f,))) == f

    def test_non_commutative(self):
        out = expand(Factorisation((sop(["a", "b"]), sop([t("aa"), t("bb")]))))
        assert out == parse_expression(CUBIC)


class TestTextFormat:
    def test_parse_and_format(self):
        f = parse_expression("b.a + a.b + a.b")
        assert len(f) == 2
        assert format_expression(f) == "a.b + b.a"

    def test_commutative_sorts_atoms(self):
        assert parse_expression("b.a", True) == parse_expression("a.b", True)

    def test_parentheses_expand(self):
        assert parse_expression("(a + b).c") == parse_expression("a.c + b.c")

    @pytest.mark.parametrize("text", ["", "a +", "(a + b", "a..b", "a + )"])
    def test_syntax_errors(self, text):
        with pytest.raises(ExpressionSyntaxError):
            parse_expression(text)


@settings(max_examples=300)
@given(st.randoms(use_true_random=False), st.booleans())
def test_round_trip(rng, commutative):
    f = random_sop(rng, commutative)
    assert expand(exp_factorise(f)) == f


@settings(max_examples=200)
@given(st.randoms(use_true_random=False), st.booleans())
def test_duplicate_cubes_are_ignored(rng, commutative):
    f = random_sop(rng, commutative)
    doubled = sop(list(f.cubes) + list(f.cubes), commutative)
    assert exp_factorise(doubled) == exp_factorise(f)


@settings(max_examples=300)
@given(st.randoms(use_true_random=False), st.booleans())
def test_rectangle_is_exact_projection_quotient(rng, commutative):
    """Y is the intersection of the left projections of X, and X·Y lies in f."""
    f = random_sop(rng, commutative)
    rect = greedy_rectangle(f)
    if rect is None:
        assert build_r_pairs(f) == set()
        return
    xs, ys = rect
    pairs = build_r_pairs(f)
    proj = [{y for x2, y in pairs if x2 == x} for x in xs]
    assert ys == set.intersection(*proj)
    assert multiply([sop(xs, commutative), sop(ys, commutative)]).cubes <= f.cubes


def test_round_trip_seeded_corpus():
    for seed in range(200):
        rng = random.Random(seed)
        for commutative in (False, True):
            f = random_sop(rng, commutative)
            assert expand(exp_factorise(f)) == f, (seed, str(f))
