"""Seeded graph families and signals for tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError
from .graph import ComplexSignal, ConnectionGraph


def erdos_renyi_graph(
    n: int,
    edge_prob: float,
    seed: int,
    max_phase: float = 0.0,
) -> ConnectionGraph:
    """G(n, p) with unit weights and phases drawn uniformly in [-max_phase, max_phase]."""
    if n < 1 or not 0 <= edge_prob <= 1:
        raise InvalidInputError(f"invalid G(n, p) parameters n={n}, p={edge_prob}")
    rng = np.random.default_rng(seed)
    us, vs = np.triu_indices(n, k=1)
    keep = rng.random(us.size) < edge_prob
    us, vs = us[keep], vs[keep]
    theta = rng.uniform(-max_phase, max_phase, size=us.size)
    return ConnectionGraph(
        n_nodes=n,
        u=us.astype(np.int64),
        v=vs.astype(np.int64),
        w=np.ones(us.size),
        theta=theta,
    )


def ring_lattice(n: int, half_degree: int, theta: float = 0.0) -> ConnectionGraph:
    """Circulant graph joining each node to its next ``half_degree`` neighbours."""
    if half_degree < 1 or n <= 2 * half_degree:
        raise InvalidInputError(f"ring lattice needs n > 2*half_degree, got n={n}")
    records = [
        (a, (a + k) % n, 1.0, theta)
        for a in range(n)
        for k in range(1, half_degree + 1)
    ]
    return ConnectionGraph.from_edges(n, records)


def random_signal(n: int, seed: int) -> ComplexSignal:
    """Standard complex Gaussian signal."""
    rng = np.random.default_rng(seed)
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)
