"""Tests for ERO instances, ranking extraction and the synchronization pipeline."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mtsf.bench import tau_sweep
from mtsf.config import RunConfig
from mtsf.errors import InvalidInputError
from mtsf.linalg import ESTIMATOR, EXACT, PowerMethodConfig, power_method_start
from mtsf.ranking import (
    ComparisonSet,
    comparison_graph,
    evaluate_tau,
    extract_ranking,
    generate_ero,
    rank_pipeline,
)


def test_generate_is_deterministic():
    a = generate_ero(30, 0.5, 0.7, seed=42)
    b = generate_ero(30, 0.5, 0.7, seed=42)
    assert np.array_equal(a.pairs, b.pairs)
    assert np.array_equal(a.c, b.c)
    assert np.array_equal(a.ground_truth, b.ground_truth)


def test_noiseless_complete_instance():
    cs = generate_ero(12, 1.0, 1.0, seed=0)
    assert cs.n_observed == 12 * 11 // 2
    r = cs.ground_truth
    for (i, j), c in zip(cs.pairs, cs.c):
        assert c == np.sign(r[j] - r[i])


def test_observation_rate():
    cs = generate_ero(200, 0.3, 0.9, seed=1)
    assert cs.n_observed / (200 * 199 / 2) == pytest.approx(0.3, abs=0.02)


@pytest.mark.parametrize("n, s, p", [(1, 0.5, 0.5), (10, 0.0, 0.5), (10, 1.5, 0.5), (10, 0.5, -0.1)])
def test_generate_rejects_bad_parameters(n, s, p):
    with pytest.raises(InvalidInputError):
        generate_ero(n, s, p, seed=0)


def test_comparison_is_antisymmetric():
    cs = generate_ero(8, 1.0, 0.6, seed=5)
    for i, j in cs.observed:
        assert cs.comparison(i, j) == -cs.comparison(j, i)


def test_unobserved_pair_raises():
    cs = ComparisonSet(
        n=3, pairs=np.array([[0, 1]]), c=np.array([1]), ground_truth=np.array([0, 1, 2]),
        s=0.5, p=1.0, seed=0,
    )
    with pytest.raises(InvalidInputError, match="not observed"):
        cs.comparison(1, 2)


@pytest.mark.parametrize("kwargs, message", [
    ({"pairs": np.array([[1, 0]]), "c": np.array([1])}, "i < j"),
    ({"pairs": np.array([[0, 1]]), "c": np.array([2])}, "-1 or"),
    ({"pairs": np.array([[0, 1]]), "c": np.array([1, 1])}, "one comparison"),
    ({"pairs": np.array([[0, 1]]), "c": np.array([1]), "ground_truth": np.array([0, 0, 2])}, "permutation"),
])
def test_comparison_set_validation(kwargs, message):
    fields = {"n": 3, "ground_truth": np.array([2, 1, 0]), "s": 1.0, "p": 1.0, "seed": 0, **kwargs}
    with pytest.raises(InvalidInputError, match=message):
        ComparisonSet(**fields)


def test_comparison_graph_phases():
    cs = generate_ero(10, 1.0, 1.0, seed=3)
    g = comparison_graph(cs, delta=0.25)
    assert g.n_edges == cs.n_observed
    assert np.allclose(g.theta, math.pi * 0.25 * cs.c / 10)
    assert np.all(g.u < g.v)
    with pytest.raises(InvalidInputError):
        comparison_graph(cs, delta=1.0)


def test_extract_ranking_cuts_at_largest_gap():
    angles = np.array([0.1, 0.3, 6.2, 0.2])
    extraction = extract_ranking(np.exp(1j * angles))
    # circle order from the cut: 6.2, 0.1, 0.2, 0.3
    assert np.array_equal(extraction.ranking, [1, 3, 0, 2])


def test_extract_ranking_rejects_zero_entry():
    with pytest.raises(InvalidInputError, match="zero embedding"):
        extract_ranking(np.array([1.0, 0.0, 1j]))


@given(
    st.lists(st.floats(0.0, 2 * math.pi, exclude_max=True), min_size=3, max_size=30, unique=True),
    st.floats(-math.pi, math.pi),
    st.floats(0.1, 10.0),
)
@settings(max_examples=60, deadline=None)
def test_extraction_invariant_to_rotation_and_scale(angles, shift, scale):
    ordered = np.sort(np.mod(angles, 2 * math.pi))
    gaps = np.sort(np.append(np.diff(ordered), 2 * math.pi - ordered[-1] + ordered[0]))
    assume(gaps[-1] - gaps[-2] > 1e-6 and gaps[0] > 1e-6)
    f = np.exp(1j * np.array(angles))
    base = extract_ranking(f).ranking
    assert np.array_equal(extract_ranking(scale * np.exp(1j * shift) * f).ranking, base)


def test_evaluate_tau_orientations():
    gt = np.array([0, 1, 2, 3, 4])
    same = evaluate_tau(gt, gt)
    assert same.tau == pytest.approx(1.0) and not same.flipped
    score = evaluate_tau(gt[::-1], gt)
    assert score.tau == pytest.approx(1.0) and score.flipped and score.raw_tau == pytest.approx(-1.0)
    assert evaluate_tau([0], [0]).tau == 1.0
    with pytest.raises(InvalidInputError):
        evaluate_tau([0, 1], [0, 1, 2])


def test_noiseless_ranking_is_recovered():
    cs = generate_ero(20, 1.0, 1.0, seed=7)
    outcome = rank_pipeline(cs, PowerMethodConfig(k=30, q=0.1, seed=11))
    assert outcome.kendall_tau == pytest.approx(1.0)
    assert outcome.wall_time >= 0


def test_start_vector_carries_no_ranking():
    cs = generate_ero(300, 0.8, 0.0, seed=3)
    start = extract_ranking(power_method_start(300, 3)).ranking
    assert evaluate_tau(start, cs.ground_truth).tau < 0.2


def test_pure_noise_instances_are_not_ranked():
    cfg = RunConfig(n=200, s=0.8, p=0.0, q=0.1, k=10, seeds=5)
    (row,) = tau_sweep(cfg, qs=[0.1], ks=[10])
    assert row[3] < 0.15


def test_oriented_ranking_agrees_with_ground_truth():
    cs = generate_ero(20, 1.0, 1.0, seed=2)
    outcome = rank_pipeline(cs, PowerMethodConfig(k=30, q=0.1, seed=5))
    assert np.array_equal(outcome.oriented_ranking, cs.ground_truth)


@pytest.mark.slow
def test_ranking_accuracy_and_modes():
    cfg = RunConfig(n=300, s=0.8, p=0.9, q=0.1, k=10, m=5, seeds=20, kind="hat")
    rows = tau_sweep(cfg, qs=[0.1], ks=[10], modes=[EXACT, ESTIMATOR])
    by_mode = {row[2]: row[3] for row in rows}
    assert 0.8 <= by_mode[EXACT] <= 1.0
    assert abs(by_mode[ESTIMATOR] - by_mode[EXACT]) <= 0.15


@pytest.mark.slow
def test_large_q_converges_slower():
    cfg = RunConfig(n=300, s=0.8, p=0.9, k=10, seeds=20)
    rows = tau_sweep(cfg, qs=[0.1, 10.0], ks=[10])
    by_q = {row[0]: row[3] for row in rows}
    assert by_q[10.0] < by_q[0.1]


def test_evaluate_tau_counts_pairs():
    assert evaluate_tau([0, 2, 1], [0, 1, 2]).raw_tau == pytest.approx(1 / 3)


def test_extract_ranking_of_evenly_spread_angles():
    n = 9
    extraction = extract_ranking(np.exp(1j * np.pi * np.arange(n) / (2 * n)))
    assert np.array_equal(extraction.ranking, np.arange(n))


@pytest.mark.slow
def test_tau_tracks_truthfulness():
    means = []
    for p in (0.5, 0.6, 0.75, 0.9):
        cfg = RunConfig(n=300, s=0.8, p=p, q=0.1, k=10, seeds=20)
        (row,) = tau_sweep(cfg, qs=[0.1], ks=[10])
        means.append((row[3], row[4]))
    inversions = [
        (a, b) for a, b in zip(means, means[1:]) if b[0] < a[0]
    ]
    assert len(inversions) <= 1
    for a, b in inversions:
        assert a[0] - b[0] <= 2 * max(a[1], b[1])
