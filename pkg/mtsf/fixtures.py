"""Named desk-scale graphs on which the enumeration oracle is exact."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import ComplexSignal, ConnectionGraph, NodeWeights


@dataclass(frozen=True, eq=False)
class OracleFixture:
    name: str
    graph: ConnectionGraph
    q: NodeWeights
    signal: ComplexSignal


def _triangle(theta: float) -> ConnectionGraph:
    # orientation 0 -> 1 -> 2 -> 0, so theta_C = 3 theta
    return ConnectionGraph.from_edges(3, [(0, 1, 1.0, theta), (1, 2, 1.0, theta), (2, 0, 1.0, theta)])


def oracle_fixtures() -> dict[str, OracleFixture]:
    tri_signal = np.array([1, 1j, -1], dtype=np.complex128)
    fixtures = [
        OracleFixture(
            "two_node",
            ConnectionGraph.from_edges(2, [(0, 1, 1.0, 0.7)]),
            NodeWeights.constant(2, 1.0),
            np.array([1.0, 1j]),
        ),
        OracleFixture("triangle_trivial", _triangle(0.0), NodeWeights.constant(3, 1.0), tri_signal),
        OracleFixture("triangle", _triangle(math.pi / 6), NodeWeights.constant(3, 1.0), tri_signal),
        OracleFixture(
            "triangle_near_limit",
            _triangle(0.49 * math.pi / 3),
            NodeWeights.constant(3, 0.5),
            tri_signal,
        ),
        OracleFixture(
            "square_with_chord",
            ConnectionGraph.from_edges(4, [
                (0, 1, 1.0, math.pi / 10),
                (1, 2, 2.0, math.pi / 10),
                (2, 3, 0.5, -math.pi / 10),
                (3, 0, 1.5, math.pi / 10),
                (0, 2, 1.0, math.pi / 10),
            ]),
            NodeWeights(np.array([0.5, 1.0, 1.5, 2.0])),
            np.array([1.0, -0.5 + 1j, 2j, 0.3 - 0.2j]),
        ),
        OracleFixture(
            "k4",
            ConnectionGraph.from_edges(4, [
                (a, b, 1.0, math.pi / 9) for a in range(4) for b in range(a + 1, 4)
            ]),
            NodeWeights.constant(4, 0.7),
            np.array([1.0, 1j, -1.0, -1j]),
        ),
        OracleFixture(
            "double_edge",
            ConnectionGraph.from_edges(2, [(0, 1, 1.0, 0.3), (0, 1, 1.0, -0.9)]),
            NodeWeights(np.array([1.0, 2.0])),
            np.array([2.0, -1j]),
        ),
    ]
    return {f.name: f for f in fixtures}
