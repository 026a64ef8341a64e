import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from subcount.graph import Graph, complete_graph  # noqa: E402


@pytest.fixture
def path3():
    return Graph.from_edges([(0, 1), (1, 2)])


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def star4():
    return Graph.from_edges([(0, i) for i in range(1, 5)])


@pytest.fixture
def cycle4():
    return Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
