"""Shared fixtures for mtsf tests."""

from __future__ import annotations

import math

import pytest

from mtsf.fixtures import oracle_fixtures
from mtsf.generators import erdos_renyi_graph, random_signal


@pytest.fixture(scope="session")
def fixtures():
    return oracle_fixtures()


@pytest.fixture
def triangle(fixtures):
    return fixtures["triangle"]


@pytest.fixture
def two_node(fixtures):
    return fixtures["two_node"]


@pytest.fixture
def small_er():
    """Connected-ish ER graph with small phases and a signal."""
    g = erdos_renyi_graph(30, 0.3, seed=7, max_phase=math.pi / 60)
    return g, random_signal(30, seed=8)


@pytest.fixture
def sample_edge_list() -> str:
    return """# triangle with a pendant node
4 4
0 1 1.0 0.5
1 2 2.0 0.25
0 2 1.0 -0.1
2 3 0.5 0.0
"""


@pytest.fixture
def sample_signal() -> str:
    return "0 1.0 0.0\n1 0.0 1.0\n2 -1.0 0.0\n3 0.5 -0.5\n"


@pytest.fixture
def sample_instance() -> str:
    return """4 1.0 1.0 3
# ground_truth 2 0 3 1
0 1 -1
0 2 1
0 3 -1
1 2 1
1 3 1
2 3 -1
"""
