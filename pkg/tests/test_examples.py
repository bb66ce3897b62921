from __future__ import annotations

import runpy

import pytest

from conftest import EXAMPLES

SCRIPTS = sorted(EXAMPLES.glob("[0-9][0-9]_*.py"))


def test_scripts_found():
    assert len(SCRIPTS) >= 4


@pytest.mark.parametrize("script", SCRIPTS, ids=lambda p: p.name)
def test_example_runs(script, capsys):
    runpy.run_path(str(script), run_name="__main__")
    assert capsys.readouterr().out
