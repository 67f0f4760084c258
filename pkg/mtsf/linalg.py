"""Exact baselines: direct solves, the normalized Laplacian and the power method."""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .constants import DENSE_LIMIT
from .errors import ComputationError, InvalidInputError
from .estimators import (
    EstimatorKind,
    SmoothingProblem,
    smooth,
    smooth_with_forests,
)
from .graph import ComplexSignal, ConnectionGraph, NodeWeights, as_signal
from .sampler import SamplerConfig, sample_batch
from .utils import derive_subseed

logger = logging.getLogger(__name__)

EXACT = "exact"
ESTIMATOR = "estimator"
MODES = (EXACT, ESTIMATOR)

# child streams of PowerMethodConfig.seed
START_STREAM = 0
SAMPLER_STREAM = 1


class HermitianSolver:
    """Factorize a Hermitian positive definite matrix once, solve many times.

    Dense Cholesky up to DENSE_LIMIT nodes, sparse LU with a minimum-degree
    ordering beyond.
    """

    def __init__(self, matrix: sp.spmatrix | np.ndarray, dense_limit: int = DENSE_LIMIT):
        n = matrix.shape[0]
        self.n = n
        self.dense = n <= dense_limit
        if self.dense:
            a = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
            if not np.allclose(a, a.conj().T, atol=1e-12 * max(1.0, np.abs(a).max())):
                raise ComputationError("matrix is not Hermitian")
            try:
                self._factor = scipy.linalg.cho_factor(a, lower=True)
            except np.linalg.LinAlgError as exc:
                raise ComputationError(f"Cholesky factorization failed: {exc}") from exc
        else:
            try:
                self._lu = spla.splu(sp.csc_matrix(matrix), permc_spec="MMD_AT_PLUS_A")
            except RuntimeError as exc:
                raise ComputationError(f"sparse factorization failed: {exc}") from exc

    def solve(self, b: np.ndarray) -> np.ndarray:
        b = np.asarray(b, dtype=np.complex128)
        if self.dense:
            return scipy.linalg.cho_solve(self._factor, b)
        return self._lu.solve(b)


def regularized_operator(g: ConnectionGraph, q: NodeWeights) -> sp.csr_matrix:
    """L + Q."""
    return (g.laplacian + sp.diags(q.q.astype(np.complex128))).tocsr()


def solve_exact(p: SmoothingProblem) -> ComplexSignal:
    """f_o = (L + Q)^{-1} Q g."""
    solver = HermitianSolver(regularized_operator(p.graph, p.q))
    return solver.solve(p.q.q * p.g)


def normalized_laplacian(g: ConnectionGraph) -> sp.csr_matrix:
    """D^{-1/2} L D^{-1/2}."""
    d = g.weighted_degrees
    if np.any(d <= 0):
        isolated = int(np.flatnonzero(d <= 0)[0])
        raise InvalidInputError(f"node {isolated} is isolated; D^(-1/2) is undefined")
    scale = sp.diags(1.0 / np.sqrt(d))
    return (scale @ g.laplacian @ scale).tocsr()


def initial_embedding(n: int, seed: int) -> ComplexSignal:
    """Unit-modulus start vector with angles {0, pi/2n, ..., (n-1) pi/2n} in random order."""
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    sigma = np.random.default_rng(seed).permutation(n)
    return np.exp(1j * np.pi * sigma / (2 * n))


def power_method_start(n: int, seed: int) -> ComplexSignal:
    """Start vector of the power method.

    Drawn from a child stream of ``seed``, so it shares no draws with an
    instance generated from the same seed.
    """
    return initial_embedding(n, derive_subseed(seed, START_STREAM))


@dataclass(frozen=True)
class PowerMethodConfig:
    """Iterate x -> M x / |M x| with M = q (L~ + qI)^{-1}.

    ``mode`` "exact" solves the linear system, "estimator" applies M with
    the forest estimators under node weights q * d_v. ``seed`` feeds the
    start vector and the samplers through separate child streams.
    """
    k: int
    q: float
    initial: ComplexSignal | None = None
    mode: str = EXACT
    kind: EstimatorKind = EstimatorKind.HAT
    m: int = 5
    fresh_samples: bool = True
    seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidInputError(f"k must be >= 1, got {self.k}")
        if not self.q > 0:
            raise InvalidInputError(f"q must be positive, got {self.q}")
        if self.mode not in MODES:
            raise InvalidInputError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.m < 1:
            raise InvalidInputError(f"m must be >= 1, got {self.m}")
        object.__setattr__(self, "kind", EstimatorKind(self.kind))
        if self.initial is not None and not np.linalg.norm(self.initial) > 0:
            raise InvalidInputError("initial vector must be nonzero")


def exact_operator(g: ConnectionGraph, q: float) -> Callable[[np.ndarray], np.ndarray]:
    n = g.n_nodes
    solver = HermitianSolver(normalized_laplacian(g) + q * sp.identity(n, format="csr"))
    return lambda x: q * solver.solve(x)


def estimator_operator(
    g: ConnectionGraph, cfg: PowerMethodConfig
) -> Callable[[np.ndarray, int], np.ndarray]:
    # q (L~ + qI)^{-1} x = D^{1/2} (L + qD)^{-1} qD (D^{-1/2} x)
    root_d = np.sqrt(g.weighted_degrees)
    weights = NodeWeights.degree_scaled(g, cfg.q)
    sampler_seed = derive_subseed(cfg.seed, SAMPLER_STREAM)
    shared = None
    if not cfg.fresh_samples:
        shared = sample_batch(
            g, SamplerConfig(derive_subseed(sampler_seed, 0), weights), cfg.m, workers=cfg.workers
        )

    def apply(x: np.ndarray, iteration: int) -> np.ndarray:
        problem = SmoothingProblem(g, x / root_d, weights)
        if shared is not None:
            result = smooth_with_forests(problem, cfg.kind, shared)
        else:
            sampler_cfg = SamplerConfig(derive_subseed(sampler_seed, iteration), weights)
            result = smooth(problem, cfg.kind, cfg.m, sampler_cfg, workers=cfg.workers)
        return root_d * result.estimate

    return apply


def rayleigh_quotient(matrix: sp.spmatrix | np.ndarray, y: np.ndarray) -> float:
    return float(np.real(np.vdot(y, matrix @ y)) / np.real(np.vdot(y, y)))


def iterate_power_method(g: ConnectionGraph, cfg: PowerMethodConfig) -> Iterator[ComplexSignal]:
    """Yield y_1, ..., y_k, each normalized to unit Euclidean norm."""
    n = g.n_nodes
    if cfg.initial is None:
        y = power_method_start(n, cfg.seed)
    else:
        y = as_signal(cfg.initial, n)
    y = y / np.linalg.norm(y)

    if cfg.mode == EXACT:
        exact = exact_operator(g, cfg.q)
        apply = lambda x, _: exact(x)  # noqa: E731
    else:
        apply = estimator_operator(g, cfg)

    monitor = logger.isEnabledFor(logging.INFO)
    lap = normalized_laplacian(g) if monitor else None
    for iteration in range(cfg.k):
        z = apply(y, iteration)
        norm = np.linalg.norm(z)
        if not np.isfinite(norm) or norm <= np.finfo(float).tiny:
            raise ComputationError(f"power method hit a zero vector at iteration {iteration}")
        y = z / norm
        if monitor:
            logger.info(
                "power iteration %d/%d (%s): rayleigh %.6g",
                iteration + 1, cfg.k, cfg.mode, rayleigh_quotient(lap, y),
            )
        yield y


def power_method(g: ConnectionGraph, cfg: PowerMethodConfig) -> ComplexSignal:
    y = None
    for y in iterate_power_method(g, cfg):
        pass
    return y


def align_global_phase(y: npt.ArrayLike) -> ComplexSignal:
    """Rotate ``y`` so its largest-modulus entry is real and positive."""
    y = np.asarray(y, dtype=np.complex128)
    k = int(np.argmax(np.abs(y)))
    if y[k] == 0:
        return y.copy()
    return y * (np.conj(y[k]) / abs(y[k]))


def smallest_eigenvector(matrix: sp.spmatrix | np.ndarray) -> tuple[float, ComplexSignal]:
    """Dense eigendecomposition: smallest eigenpair of a Hermitian matrix."""
    a = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
    values, vectors = np.linalg.eigh(a)
    return float(values[0]), align_global_phase(vectors[:, 0])
