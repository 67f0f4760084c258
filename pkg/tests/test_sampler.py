"""Tests for the random-walk MTSF sampler."""

import logging
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings

from mtsf.bench import sampler_scaling
from mtsf.errors import InvalidInputError
from mtsf.forest import structure_problems
from mtsf.generators import ring_lattice
from mtsf.graph import ConnectionGraph, NodeWeights
from mtsf.oracle import enumerate_mtsfs, marginal_kernel, total_variation
from mtsf.sampler import SamplerConfig, sample_batch, sample_mtsf
from mtsf.utils import log_log_slope

from .strategies import graphs_with_signal


def test_same_seed_same_forest(small_er):
    g, _ = small_er
    cfg = SamplerConfig(11, NodeWeights.constant(g.n_nodes, 0.5))
    assert sample_mtsf(g, cfg) == sample_mtsf(g, cfg)


def test_fixed_size_and_structure(triangle):
    cfg = SamplerConfig(3, triangle.q)
    for phi in sample_batch(triangle.graph, cfg, 200):
        assert len(phi.edges) + len(phi.roots) == 3
        assert structure_problems(phi, triangle.graph) == []


@given(graphs_with_signal(max_phase=math.pi / 14))
@settings(max_examples=40, deadline=None)
def test_samples_are_valid_mtsfs(case):
    g, _, q = case
    for phi in sample_batch(g, SamplerConfig(5, q), 5):
        assert structure_problems(phi, g) == []


def test_trivial_connection_gives_spanning_forests(fixtures):
    fixture = fixtures["triangle_trivial"]
    for phi in sample_batch(fixture.graph, SamplerConfig(1, fixture.q), 300):
        assert not phi.unicycles


def test_edgeless_graph_roots_everything():
    g = ConnectionGraph.from_edges(4, [])
    phi = sample_mtsf(g, SamplerConfig(0, NodeWeights.constant(4, 0.1)))
    assert phi.roots == (0, 1, 2, 3)
    assert phi.edges == ()


def test_huge_q_roots_almost_every_node():
    g = ring_lattice(100, 2, theta=0.01)
    phi = sample_mtsf(g, SamplerConfig(4, NodeWeights.constant(100, 1e6)))
    assert len(phi.roots) >= 99


def test_two_node_frequencies(two_node):
    # three forests, each of weight 1
    samples = sample_batch(two_node.graph, SamplerConfig(21, two_node.q), 6000)
    counts = Counter(phi.key for phi in samples)
    assert len(counts) == 3
    for count in counts.values():
        assert count / 6000 == pytest.approx(1 / 3, abs=0.03)


def test_workers_do_not_change_samples(small_er):
    g, _ = small_er
    cfg = SamplerConfig(99, NodeWeights.constant(g.n_nodes, 0.3))
    serial = sample_batch(g, cfg, 12, workers=1)
    parallel = sample_batch(g, cfg, 12, workers=3)
    assert [phi.key for phi in serial] == [phi.key for phi in parallel]


def test_batch_rejects_empty(two_node):
    with pytest.raises(InvalidInputError):
        sample_batch(two_node.graph, SamplerConfig(0, two_node.q), 0)


def test_q_length_checked(two_node):
    with pytest.raises(InvalidInputError):
        sample_mtsf(two_node.graph, SamplerConfig(0, NodeWeights.constant(3, 1.0)))


def test_warns_when_phase_bound_fails(caplog):
    g = ConnectionGraph.from_edges(3, [(0, 1, 1.0, 1.0), (1, 2, 1.0, 0.0)])
    with caplog.at_level(logging.WARNING, logger="mtsf.sampler"):
        sample_batch(g, SamplerConfig(0, NodeWeights.constant(3, 1.0)), 1)
    assert "phase bound" in caplog.text


def test_k4_item_marginals(fixtures):
    fixture = fixtures["k4"]
    g = fixture.graph
    m = 20_000
    samples = sample_batch(g, SamplerConfig(17, fixture.q), m)
    kernel = np.real(np.diag(marginal_kernel(g, fixture.q)))
    counts = np.zeros(g.n_edges + g.n_nodes)
    for phi in samples:
        counts[list(phi.edges)] += 1
        counts[[g.n_edges + r for r in phi.roots]] += 1
    freq = counts / m
    sigma = np.sqrt(kernel * (1 - kernel) / m)
    assert np.all(np.abs(freq - kernel) <= 4 * sigma + 1e-3)


@pytest.mark.slow
@pytest.mark.parametrize("name", [
    "two_node", "triangle_trivial", "triangle", "triangle_near_limit",
    "square_with_chord", "double_edge",
])
def test_distribution_matches_enumeration(fixtures, name):
    fixture = fixtures[name]
    catalog = enumerate_mtsfs(fixture.graph, fixture.q)
    samples = sample_batch(fixture.graph, SamplerConfig(2024, fixture.q), 200_000)
    assert total_variation(samples, catalog) < 0.02


@pytest.mark.slow
def test_walk_steps_grow_linearly_with_edges():
    rows = sampler_scaling([100, 1000, 10_000], q=0.1, samples=5)
    n_edges = [row[0] for row in rows]
    steps = [row[1] for row in rows]
    assert 0.8 <= log_log_slope(n_edges, steps) <= 1.2
