"""Tests for the exact linear-algebra baselines and the power method."""

import logging
import math

import numpy as np
import pytest

from mtsf.errors import ComputationError, InvalidInputError
from mtsf.estimators import SmoothingProblem
from mtsf.generators import erdos_renyi_graph, random_signal, ring_lattice
from mtsf.graph import ConnectionGraph, NodeWeights
from mtsf.linalg import (
    ESTIMATOR,
    HermitianSolver,
    PowerMethodConfig,
    align_global_phase,
    estimator_operator,
    exact_operator,
    initial_embedding,
    iterate_power_method,
    normalized_laplacian,
    power_method,
    power_method_start,
    rayleigh_quotient,
    regularized_operator,
    smallest_eigenvector,
    solve_exact,
)
from mtsf.ranking import comparison_graph, generate_ero


def test_solve_exact_matches_dense_inverse(triangle):
    p = SmoothingProblem(triangle.graph, triangle.signal, triangle.q)
    a = regularized_operator(triangle.graph, triangle.q).toarray()
    expected = np.linalg.solve(a, triangle.q.q * triangle.signal)
    assert np.allclose(solve_exact(p), expected, atol=1e-12)


def test_two_node_determinant(two_node):
    a = regularized_operator(two_node.graph, two_node.q).toarray()
    assert np.real(np.linalg.det(a)) == pytest.approx(3.0)


def test_dense_and_sparse_paths_agree(small_er):
    g, signal = small_er
    matrix = regularized_operator(g, NodeWeights.constant(g.n_nodes, 0.2))
    dense = HermitianSolver(matrix)
    sparse = HermitianSolver(matrix, dense_limit=0)
    assert dense.dense and not sparse.dense
    assert np.allclose(dense.solve(signal), sparse.solve(signal))


def test_solver_rejects_bad_matrices():
    with pytest.raises(ComputationError, match="Hermitian"):
        HermitianSolver(np.array([[1.0, 1j], [1j, 1.0]]))
    with pytest.raises(ComputationError, match="Cholesky"):
        HermitianSolver(np.array([[1.0, 2.0], [2.0, 1.0]]))


def test_normalized_laplacian_spectrum():
    g = ring_lattice(10, 2, theta=0.1)
    values = np.linalg.eigvalsh(normalized_laplacian(g).toarray())
    assert values.min() >= -1e-12 and values.max() <= 2 + 1e-12


def test_normalized_laplacian_rejects_isolated_node():
    g = ConnectionGraph.from_edges(3, [(0, 1, 1.0, 0.0)])
    with pytest.raises(InvalidInputError, match="isolated"):
        normalized_laplacian(g)


def test_initial_embedding():
    y = initial_embedding(8, seed=3)
    assert np.allclose(np.abs(y), 1.0)
    angles = np.sort(np.angle(y))
    assert np.allclose(angles, np.pi * np.arange(8) / 16)
    assert np.array_equal(y, initial_embedding(8, seed=3))


@pytest.mark.parametrize("kwargs", [
    {"k": 0, "q": 0.1},
    {"k": 3, "q": 0.0},
    {"k": 3, "q": 0.1, "mode": "iterative"},
    {"k": 3, "q": 0.1, "m": 0},
    {"k": 3, "q": 0.1, "initial": np.zeros(4)},
])
def test_power_method_config_validation(kwargs):
    with pytest.raises(InvalidInputError):
        PowerMethodConfig(**kwargs)


def test_iterates_have_unit_norm():
    g = ring_lattice(12, 2, theta=0.05)
    iterates = list(iterate_power_method(g, PowerMethodConfig(k=4, q=0.5)))
    assert len(iterates) == 4
    assert all(np.linalg.norm(y) == pytest.approx(1.0) for y in iterates)


def test_exact_power_method_finds_smallest_eigenvector():
    g = erdos_renyi_graph(25, 0.4, seed=2, max_phase=math.pi / 10)
    lap = normalized_laplacian(g)
    _, v = smallest_eigenvector(lap)
    y = power_method(g, PowerMethodConfig(k=300, q=0.5, seed=1))
    assert abs(np.vdot(v, y)) == pytest.approx(1.0, abs=1e-6)


def test_estimator_step_tracks_exact_step():
    g = ring_lattice(20, 2, theta=0.02)
    x = initial_embedding(20, seed=0)
    x = x / np.linalg.norm(x)
    exact = exact_operator(g, 0.5)(x)
    cfg = PowerMethodConfig(k=1, q=0.5, mode=ESTIMATOR, m=2000, seed=5)
    estimate = estimator_operator(g, cfg)(x, 0)
    assert np.linalg.norm(estimate - exact) / np.linalg.norm(exact) < 0.1


def test_estimator_mode_is_reproducible():
    g = ring_lattice(16, 2, theta=0.03)
    for fresh in (True, False):
        cfg = PowerMethodConfig(k=3, q=0.3, mode=ESTIMATOR, m=10, seed=9, fresh_samples=fresh)
        assert np.array_equal(power_method(g, cfg), power_method(g, cfg))


def test_rayleigh_logged_at_info(caplog):
    g = ring_lattice(10, 2)
    with caplog.at_level(logging.INFO, logger="mtsf.linalg"):
        power_method(g, PowerMethodConfig(k=2, q=0.1))
    assert "rayleigh" in caplog.text


def test_rayleigh_quotient_of_eigenvector():
    g = ring_lattice(10, 2, theta=0.2)
    lap = normalized_laplacian(g)
    value, v = smallest_eigenvector(lap)
    assert rayleigh_quotient(lap, v) == pytest.approx(value, abs=1e-10)


def test_align_global_phase():
    y = np.array([0.1, -2j, 0.5])
    aligned = align_global_phase(y * np.exp(0.7j))
    assert aligned[1] == pytest.approx(2.0)
    assert np.allclose(np.abs(aligned), np.abs(y))


def test_exact_solution_satisfies_system(small_er):
    g, signal = small_er
    q = NodeWeights.constant(g.n_nodes, 0.2)
    p = SmoothingProblem(g, random_signal(g.n_nodes, 1), q)
    f_o = solve_exact(p)
    residual = regularized_operator(g, q) @ f_o - q.q * p.g
    assert np.max(np.abs(residual)) < 1e-10


def test_exact_rayleigh_quotients_do_not_increase():
    g = erdos_renyi_graph(30, 0.3, seed=4, max_phase=math.pi / 60)
    lap = normalized_laplacian(g)
    values = [rayleigh_quotient(lap, y) for y in iterate_power_method(g, PowerMethodConfig(k=25, q=0.2, seed=4))]
    assert all(b <= a + 1e-9 for a, b in zip(values, values[1:]))


def test_power_method_start_uses_its_own_stream():
    y = power_method_start(12, seed=3)
    assert np.allclose(np.abs(y), 1.0)
    assert np.array_equal(y, power_method_start(12, seed=3))
    assert not np.array_equal(y, initial_embedding(12, seed=3))


@pytest.mark.slow
def test_estimator_application_is_unbiased():
    g = ring_lattice(20, 2, theta=0.02)
    x = power_method_start(20, seed=0)
    x = x / np.linalg.norm(x)
    exact = exact_operator(g, 0.5)(x)
    apply = estimator_operator(g, PowerMethodConfig(k=1, q=0.5, mode=ESTIMATOR, m=1, seed=6))
    draws = np.stack([apply(x, index) for index in range(10_000)])
    sigma = draws.std(axis=0, ddof=1) / np.sqrt(draws.shape[0])
    assert np.all(np.abs(draws.mean(axis=0) - exact) <= 4 * sigma + 1e-12)


@pytest.mark.slow
def test_estimator_mode_matches_exact_iterate():
    g = comparison_graph(generate_ero(50, 0.8, 0.9, seed=1))
    exact = power_method(g, PowerMethodConfig(k=3, q=0.5, seed=2))
    estimate = power_method(g, PowerMethodConfig(k=3, q=0.5, mode=ESTIMATOR, m=10_000, seed=2))
    overlap = np.vdot(estimate, exact)
    aligned = estimate * overlap / abs(overlap)
    assert np.linalg.norm(aligned - exact) <= 0.05
