from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from atgen import io
from atgen.goals import (
    NoCommonGoalError,
    TableRelation,
    is_correctly_labelled,
    is_optimally_labelled,
)
from atgen.sp import Kind, Leaf, Par, Seq, is_homogeneous, par_compose, seq_compose
from atgen.synth import build_tree, decode, encode, flat_tree, partition, tree_factorisation, tree_generation
from atgen.tree import Op, leaf, node, semantics, semantically_equal, size

from conftest import B, ACCESS_ATTACKS, L, WEC, X, access_tree
from instances import random_attack_set, random_relation, sub_compositions

a, b, c, d = (Leaf(x) for x in "abcd")


def identity_relation(graphs, extra=()):
    """Every edge label is a goal; goal ``top`` is achieved by everything."""
    universe = set()
    for g in graphs:
        universe |= sub_compositions(g)
    labels = sorted({lf.label for g in universe for lf in g.leaves()})
    pairs = [(Leaf(x), x) for x in labels] + [(g, "top") for g in universe]
    pairs += [(g, goal) for g, goal in extra]
    goals = set(labels) | {"top"} | {goal for _, goal in extra}
    return TableRelation(goals, universe, pairs)


class TestBuildTree:
    def test_leaf(self):
        rel = identity_relation([a])
        assert build_tree(rel, a) == leaf("a")

    def test_sequence(self):
        g = seq_compose([a, b, c])
        t = build_tree(identity_relation([g]), g)
        assert t == node("top", Op.SAND, [leaf("a"), leaf("b"), leaf("c")])

    def test_parallel(self):
        g = par_compose([a, b])
        t = build_tree(identity_relation([g]), g)
        assert t == node("top", Op.AND, [leaf("a"), leaf("b")])

    def test_nested(self):
        g = seq_compose([a, par_compose([b, c])])
        t = build_tree(identity_relation([g]), g)
        assert t.op is Op.SAND and t.children[1].op is Op.AND
        assert semantics(t) == {g}


class TestPartition:
    def test_homogeneous_single_block(self):
        s = {seq_compose([a, b]), seq_compose([c, d]), a}
        assert partition(identity_relation(s), s) == [frozenset(s)]

    def test_mixed_kinds_split(self):
        s = {seq_compose([a, b]), par_compose([c, d])}
        blocks = partition(identity_relation(s), s)
        assert len(blocks) == 2
        assert frozenset().union(*blocks) == s

    def test_blocks_need_a_common_goal(self):
        s = [seq_compose([a, b]), seq_compose([c, d])]
        universe = set(s) | {a, b, c, d}
        pairs = [(Leaf(x), x) for x in "abcd"] + [(s[0], "p"), (s[1], "q")]
        rel = TableRelation(list("abcdpq"), universe, pairs)
        assert len(partition(rel, s)) == 2

    def test_empty(self):
        with pytest.raises(ValueError):
            partition(identity_relation([a]), [])

    def test_set_cover_instance(self):
        """Blocks form a cover; greedy count is never below the true minimum."""
        # elements 1..5 as graphs; S1={1,2,3}, S2={3,4}, S3={4,5} as goals
        elems = {i: seq_compose([Leaf(f"e{i}"), Leaf("z")]) for i in range(1, 6)}
        cover = {"S1": {1, 2, 3}, "S2": {3, 4}, "S3": {4, 5}}
        pairs = [(elems[i], name) for name, members in cover.items() for i in members]
        rel = TableRelation(list(cover), elems.values(), pairs)
        blocks = partition(rel, elems.values())
        assert sorted(map(len, blocks), reverse=True)[0] >= 2
        assert len(blocks) >= 2
        assert frozenset().union(*blocks) == frozenset(elems.values())
        for blk in blocks:
            assert rel.has_common_goal(blk)


class TestTreeFactorisation:
    def test_credential_subset(self, rel):
        t = tree_factorisation(rel, {WEC, B, X})
        assert t.op is Op.OR and t.label == "credential"
        assert sorted(map(str, semantics(t))) == ["b", "w·ec", "x"]
        assert node("eavesdrop-user", Op.SAND, [leaf("w"), leaf("ec")]) in t.children

    def test_single_leaf(self):
        assert tree_factorisation(identity_relation([a]), {a}) == leaf("a")

    def test_cube_of_sums(self):
        s = {par_compose(list(p)) for p in [(a, a, a), (a, a, b), (a, b, b), (b, b, b)]}
        rel = identity_relation(s, extra=[(a, "ab"), (b, "ab")])
        t = tree_factorisation(rel, s)
        assert t.op is Op.AND and len(t.children) == 3
        assert all(ch.op is Op.OR and semantics(ch) == {a, b} for ch in t.children)
        assert semantics(t) == s

    def test_rejects_mixed_input(self):
        s = {seq_compose([a, b]), par_compose([c, d])}
        with pytest.raises(ValueError):
            tree_factorisation(identity_relation(s), s)

    def test_missing_factor_goal_gives_flat_tree(self):
        s = {seq_compose([a, c]), seq_compose([b, c])}
        universe = set(s) | {a, b, c}
        pairs = [(Leaf(x), x) for x in "abc"] + [(g, "top") for g in s]
        rel = TableRelation(["a", "b", "c", "top"], universe, pairs)
        t = tree_factorisation(rel, s)
        assert t == flat_tree(rel, s)


class TestTreeGeneration:
    def test_access_pipeline(self, rel):
        t = tree_generation(rel, ACCESS_ATTACKS)
        assert t.label == "access" and t.op is Op.SAND
        assert t.children[-1] == leaf("l")
        assert semantically_equal(t, access_tree())
        assert is_correctly_labelled(t, rel) and is_optimally_labelled(t, rel)
        assert size(t) <= 8
        assert t == access_tree()

    def test_singleton_leaf(self):
        assert tree_generation(identity_relation([a]), {a}) == leaf("a")

    def test_no_common_goal(self, rel):
        with pytest.raises(NoCommonGoalError):
            tree_generation(rel, {WEC, L})

    def test_mixed_set(self):
        s = {seq_compose([a, b]), seq_compose([a, c]), par_compose([c, d])}
        rel = identity_relation(s)
        t = tree_generation(rel, s)
        assert t.op is Op.OR and semantics(t) == s

    def test_deterministic_json(self, rel):
        out = {io.dumps(io.tree_to_json(tree_generation(rel, ACCESS_ATTACKS))) for _ in range(3)}
        assert len(out) == 1


class TestEncoding:
    def test_round_trip(self):
        s = {seq_compose([a, par_compose([b, c])]), seq_compose([b, c]), a}
        f = encode(s, Kind.SEQ)
        assert f.cubes == {(a, par_compose([b, c])), (b, c), (a,)}
        assert decode(f, Kind.SEQ) == s


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_generated_trees_are_sound_and_optimal(rng):
    s = random_attack_set(rng)
    rel = random_relation(rng, s)
    t = tree_generation(rel, s)
    assert semantics(t) == s
    assert is_correctly_labelled(t, rel)
    assert is_optimally_labelled(t, rel)
    assert size(t) <= size(flat_tree(rel, s))
    assert size(flat_tree(rel, s)) == (1 if len(s) > 1 else 0) + sum(size(build_tree(rel, g)) for g in s)


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_lex_strategy_is_sound(rng):
    s = random_attack_set(rng)
    rel = random_relation(rng, s)
    assert semantics(tree_generation(rel, s, "lex")) == s


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def minimum_partition(rel, graphs) -> int:
    """Fewest homogeneous blocks with a common goal, by exhaustive search."""
    best = len(graphs)
    for part in _set_partitions(list(graphs)):
        if len(part) < best and all(is_homogeneous(p) and rel.has_common_goal(p) for p in part):
            best = len(part)
    return best


@pytest.mark.parametrize("seed", range(40))
def test_partition_against_exhaustive_search(seed):
    rng = random.Random(seed)
    s = random_attack_set(rng, max_graphs=6)
    rel = random_relation(rng, s)
    blocks = partition(rel, s)
    assert frozenset().union(*blocks) == s
    assert sum(map(len, blocks)) == len(s)
    for blk in blocks:
        assert is_homogeneous(blk) and rel.has_common_goal(blk)
    assert len(blocks) <= 2 * minimum_partition(rel, s)
