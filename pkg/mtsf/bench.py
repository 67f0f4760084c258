"""Benchmark sweeps: timings, Monte-Carlo error curves, tau sweeps, sampler scaling.

Every sweep returns plain rows matching the CSV schemas in constants.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from .config import RunConfig
from .constants import (
    ERROR_COLUMNS,
    SCALING_COLUMNS,
    SCATTER_COLUMNS,
    TAU_COLUMNS,
    TIMING_COLUMNS,
)
from .errors import InvalidInputError
from .estimators import EstimatorKind, SmoothingProblem, smooth
from .generators import random_signal, ring_lattice
from .graph import ConnectionGraph, NodeWeights
from .linalg import (
    ESTIMATOR,
    EXACT,
    PowerMethodConfig,
    estimator_operator,
    exact_operator,
    power_method,
    power_method_start,
    solve_exact,
)
from .ranking import ComparisonSet, comparison_graph, generate_ero, rank_pipeline
from .sampler import SamplerConfig, sample_mtsf
from .utils import derive_subseed, log_log_slope, standard_error

logger = logging.getLogger(__name__)

WARMUPS = 5
TIMING_METHODS = (
    "tilde", "bar", "hat", "direct_solve", "power_method_exact", "power_method_estimator",
)
ERROR_MS = (1, 10, 100, 1000)

COLUMNS = {
    "timing": TIMING_COLUMNS,
    "errors": ERROR_COLUMNS,
    "tau": TAU_COLUMNS,
    "scaling": SCALING_COLUMNS,
    "scatter": SCATTER_COLUMNS,
}


def time_callable(fn: Callable[[], object], repeats: int, warmups: int = WARMUPS) -> np.ndarray:
    """Wall times of ``repeats`` calls after ``warmups`` untimed ones."""
    for _ in range(warmups):
        fn()
    times = np.empty(repeats)
    for index in range(repeats):
        start = time.perf_counter()
        fn()
        times[index] = time.perf_counter() - start
    return times


def ranking_graph(cfg: RunConfig, n: int | None = None, seed: int | None = None) -> ConnectionGraph:
    instance = generate_ero(n or cfg.n, cfg.s, cfg.p, cfg.seed if seed is None else seed)
    return comparison_graph(instance, cfg.delta)


def _timing_target(method: str, g: ConnectionGraph, cfg: RunConfig) -> Callable[[], object]:
    q = NodeWeights.constant(g.n_nodes, cfg.q)
    problem = SmoothingProblem(g, random_signal(g.n_nodes, cfg.seed), q)
    if method in {k.value for k in EstimatorKind}:
        sampler_cfg = SamplerConfig(cfg.seed, q)
        return lambda: smooth(problem, method, cfg.m, sampler_cfg)
    if method == "direct_solve":
        return lambda: solve_exact(problem)
    if method == "power_method_exact":
        pm = PowerMethodConfig(k=cfg.k, q=cfg.q, seed=cfg.seed)
        return lambda: power_method(g, pm)
    if method == "power_method_estimator":
        pm = PowerMethodConfig(
            k=cfg.k, q=cfg.q, mode=ESTIMATOR, kind=EstimatorKind.HAT, m=cfg.m, seed=cfg.seed,
        )
        return lambda: power_method(g, pm)
    raise InvalidInputError(f"unknown timing method {method!r}")


def timing_benchmark(
    cfg: RunConfig,
    sizes: Sequence[int],
    methods: Sequence[str] = TIMING_METHODS,
    warmups: int = WARMUPS,
) -> list[tuple]:
    """(method, n, mean_time, median_time, std_time) per method and size.

    Cells run one after another so timings do not contend.
    """
    rows = []
    for n in sizes:
        g = ranking_graph(cfg, n)
        for method in methods:
            times = time_callable(_timing_target(method, g, cfg), cfg.repeats, warmups)
            rows.append((method, n, float(times.mean()), float(np.median(times)), float(times.std())))
            logger.info("timing %s n=%d: mean %.3gs", method, n, times.mean())
    return rows


def error_curve(
    cfg: RunConfig,
    ms: Sequence[int] = ERROR_MS,
    kinds: Sequence[EstimatorKind] = tuple(EstimatorKind),
    trials: int = 5,
) -> list[tuple]:
    """(kind, m, mean_error, std_error) of the estimated M y0 against the exact one.

    M = q (L~ + qI)^{-1} with degree-scaled node weights, y0 the power-method start.
    """
    g = ranking_graph(cfg)
    y0 = power_method_start(g.n_nodes, cfg.seed)
    y0 = y0 / np.linalg.norm(y0)
    exact = exact_operator(g, cfg.q)(y0)
    rows = []
    for kind in kinds:
        for m in ms:
            errors = []
            for trial in range(trials):
                pm = PowerMethodConfig(
                    k=1, q=cfg.q, mode=ESTIMATOR, kind=kind, m=m,
                    seed=derive_subseed(cfg.seed, trial), workers=cfg.workers,
                )
                estimate = estimator_operator(g, pm)(y0, 0)
                errors.append(float(np.linalg.norm(estimate - exact)))
            rows.append((str(kind), m, float(np.mean(errors)), float(np.std(errors))))
            logger.info("error %s m=%d: %.4g", kind, m, np.mean(errors))
        means = [row[2] for row in rows[-len(ms):]]
        if len(ms) > 1 and min(means) > 0:
            logger.info("error slope %s: %.3f", kind, log_log_slope(ms, means))
    return rows


def _tau_for_seed(cfg: RunConfig, q: float, k: int, mode: str, seed: int) -> float:
    instance = generate_ero(cfg.n, cfg.s, cfg.p, seed)
    pm = PowerMethodConfig(
        k=k, q=q, mode=mode, kind=EstimatorKind(cfg.kind), m=cfg.m,
        fresh_samples=cfg.fresh_samples, seed=seed,
    )
    return rank_pipeline(instance, pm, cfg.delta).kendall_tau


def rank_scatter(instance: ComparisonSet, cfg: RunConfig) -> list[tuple]:
    """(node, ground_truth, recovered_exact, recovered_estimator) for every node.

    Recovered ranks are oriented to agree with the ground truth.
    """
    recovered = []
    for mode in (EXACT, ESTIMATOR):
        pm = PowerMethodConfig(
            k=cfg.k, q=cfg.q, mode=mode, kind=EstimatorKind(cfg.kind), m=cfg.m,
            fresh_samples=cfg.fresh_samples, seed=cfg.seed, workers=cfg.workers,
        )
        outcome = rank_pipeline(instance, pm, cfg.delta)
        logger.info("scatter %s: tau %.4f", mode, outcome.kendall_tau)
        recovered.append(outcome.oriented_ranking)
    truth = instance.ground_truth
    return [
        (node, int(truth[node]), int(recovered[0][node]), int(recovered[1][node]))
        for node in range(instance.n)
    ]


def tau_sweep(
    cfg: RunConfig,
    qs: Sequence[float],
    ks: Sequence[int],
    modes: Sequence[str] = (EXACT,),
) -> list[tuple]:
    """(q, k, mode, mean_tau, stderr_tau, seeds) over seeds cfg.seed .. cfg.seed + seeds - 1."""
    seeds = [cfg.seed + i for i in range(cfg.seeds)]
    cells = [(q, k, mode) for mode in modes for q in qs for k in ks]
    rows = []
    pool = ProcessPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None
    try:
        for q, k, mode in cells:
            if pool is None:
                taus = [_tau_for_seed(cfg, q, k, mode, seed) for seed in seeds]
            else:
                futures = [pool.submit(_tau_for_seed, cfg, q, k, mode, seed) for seed in seeds]
                taus = [f.result() for f in futures]
            rows.append((q, k, mode, float(np.mean(taus)), standard_error(taus), len(seeds)))
            logger.info("tau q=%g k=%d %s: %.4f", q, k, mode, np.mean(taus))
    finally:
        if pool is not None:
            pool.shutdown()
    return rows


def sampler_scaling(
    sizes: Sequence[int],
    q: float,
    samples: int = 20,
    half_degree: int = 3,
    seed: int = 0,
) -> list[tuple]:
    """(n_edges, mean_steps, mean_time) per forest on ring lattices of fixed degree."""
    rows = []
    for n in sizes:
        g = ring_lattice(n, half_degree)
        cfg = SamplerConfig(seed, NodeWeights.constant(n, q))
        steps, times = [], []
        for index in range(samples):
            sub = replace(cfg, rng_seed=derive_subseed(seed, index))
            start = time.perf_counter()
            phi = sample_mtsf(g, sub)
            times.append(time.perf_counter() - start)
            steps.append(phi.walk_steps)
        rows.append((g.n_edges, float(np.mean(steps)), float(np.mean(times))))
        logger.info("scaling |E|=%d: %.1f steps, %.3gs", g.n_edges, np.mean(steps), np.mean(times))
    return rows
