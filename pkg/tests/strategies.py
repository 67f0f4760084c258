"""Hypothesis strategies for connection graphs and signals."""

from __future__ import annotations

import math

import numpy as np
from hypothesis import strategies as st

from mtsf.graph import ConnectionGraph, NodeWeights


@st.composite
def connection_graphs(draw, max_nodes: int = 7, max_phase: float = math.pi):
    """Random multigraphs with positive weights and phases in [-max_phase, max_phase]."""
    n = draw(st.integers(min_value=2, max_value=max_nodes))
    pair = st.tuples(
        st.integers(0, n - 1), st.integers(0, n - 1)
    ).filter(lambda ab: ab[0] != ab[1])
    records = draw(st.lists(
        st.tuples(
            pair,
            st.floats(0.1, 5.0),
            st.floats(-max_phase, max_phase),
        ),
        min_size=1,
        max_size=12,
    ))
    return ConnectionGraph.from_edges(n, [(a, b, w, t) for (a, b), w, t in records])


@st.composite
def graphs_with_signal(draw, max_nodes: int = 7, max_phase: float = math.pi):
    g = draw(connection_graphs(max_nodes=max_nodes, max_phase=max_phase))
    parts = st.floats(-3.0, 3.0)
    values = draw(st.lists(st.tuples(parts, parts), min_size=g.n_nodes, max_size=g.n_nodes))
    signal = np.array([complex(a, b) for a, b in values])
    q = draw(st.lists(st.floats(0.05, 3.0), min_size=g.n_nodes, max_size=g.n_nodes))
    return g, signal, NodeWeights(np.array(q))
