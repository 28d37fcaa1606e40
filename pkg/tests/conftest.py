from __future__ import annotations

import random

import pytest

from gatewaylogic.formula import Signature
from gatewaylogic.multigraph import two_stage_graph, random_connected_multigraph

ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.fixture
def fig3():
    return two_stage_graph()


@pytest.fixture
def fig3_sig():
    return Signature.with_default_props(two_stage_graph())


def small_graphs(count: int, seed: int = 0, max_vertices: int = 4, max_edges: int = 6, loops: bool = True):
    rng = random.Random(seed)
    return [random_connected_multigraph(rng, max_vertices, max_edges, loops=loops and rng.random() < 0.4)
            for _ in range(count)]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    label = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        ACCEPTANCE_RESULTS[label] = "PASS" if rep.passed else "FAIL"


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): acceptance criterion check")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s[2:])):
        terminalreporter.write_line(f"{label} {ACCEPTANCE_RESULTS[label]}")
