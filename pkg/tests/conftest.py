from __future__ import annotations

from pathlib import Path

import pytest

from atgen import io
from atgen.goals import TableRelation
from atgen.sp import Leaf, seq_compose
from atgen.tree import Op, leaf, node

ROOT = Path(__file__).resolve().parent.parent
EXAMPLES = ROOT / "examples"

W, EC, L, B, X = (Leaf(x) for x in ("w", "ec", "l", "b", "x"))
WEC = seq_compose([W, EC])
ACCESS_ATTACKS = frozenset({seq_compose([WEC, L]), seq_compose([B, L]), seq_compose([X, L])})


def access_relation() -> TableRelation:
    """Relation read off the server-access tree: identities, credential, access."""
    edges = {"w": W, "ec": EC, "l": L, "b": B, "x": X}
    pairs = [(g, name) for name, g in edges.items()]
    pairs += [(WEC, "eavesdrop-user"), (WEC, "credential"), (B, "credential"), (X, "credential")]
    pairs += [(g, "access") for g in ACCESS_ATTACKS]
    universe = list(edges.values()) + [WEC] + sorted(ACCESS_ATTACKS)
    return TableRelation(["access", "credential", "eavesdrop-user", *edges], universe, pairs)


def access_tree():
    return node(
        "access",
        Op.SAND,
        [
            node(
                "credential",
                Op.OR,
                [node("eavesdrop-user", Op.SAND, [leaf("w"), leaf("ec")]), leaf("b"), leaf("x")],
            ),
            leaf("l"),
        ],
    )


def load_network():
    return io.system_from_json(io.loads((EXAMPLES / "network.json").read_text()))


@pytest.fixture
def rel():
    return access_relation()


@pytest.fixture
def tree():
    return access_tree()


@pytest.fixture(scope="session")
def network():
    return load_network()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
