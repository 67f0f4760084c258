"""Monte-Carlo estimators of f_o = (L + Q)^{-1} Q g built from sampled forests.

tilde: transport the root value g(r) to every node of its tree.
bar:   Rao-Blackwellised tilde, the q-weighted tree average transported.
hat:   bar plus the control variate -alpha (Q^{-1}(L + Q) bar - g).
tilde and bar are 0 on unicycle nodes.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property

import numpy as np
import numpy.typing as npt
import scipy.sparse as sp

from .errors import InvalidInputError
from .forest import Mtsf
from .graph import ComplexSignal, ConnectionGraph, NodeWeights, as_signal
from .sampler import SamplerConfig, sample_batch

logger = logging.getLogger(__name__)


class EstimatorKind(StrEnum):
    TILDE = "tilde"
    BAR = "bar"
    HAT = "hat"


@dataclass(frozen=True, eq=False)
class SmoothingProblem:
    graph: ConnectionGraph
    g: ComplexSignal
    q: NodeWeights

    def __post_init__(self) -> None:
        object.__setattr__(self, "g", as_signal(self.g, self.graph.n_nodes))
        if len(self.q) != self.graph.n_nodes:
            raise InvalidInputError(
                f"q has {len(self.q)} entries, graph has {self.graph.n_nodes} nodes"
            )

    @cached_property
    def laplacian(self) -> sp.csr_matrix:
        return self.graph.laplacian


@dataclass
class EstimateResult:
    estimate: ComplexSignal
    per_node_sample_variance: npt.NDArray[np.float64]
    m_used: int
    estimator_kind: EstimatorKind
    wall_time: float = field(default=0.0)


def _check_forest(phi: Mtsf, p: SmoothingProblem) -> None:
    if phi.n_nodes != p.graph.n_nodes:
        raise InvalidInputError(
            f"forest has {phi.n_nodes} nodes, problem graph has {p.graph.n_nodes}"
        )


def estimate_tilde(phi: Mtsf, p: SmoothingProblem) -> ComplexSignal:
    _check_forest(phi, p)
    out = np.zeros(p.graph.n_nodes, dtype=np.complex128)
    in_tree = phi.node_root >= 0
    out[in_tree] = phi.root_to_node_phase[in_tree] * p.g[phi.node_root[in_tree]]
    return out


def estimate_bar(phi: Mtsf, p: SmoothingProblem) -> ComplexSignal:
    _check_forest(phi, p)
    comp = phi.node_component
    n_comp = len(phi.components)
    q = p.q.q
    phase = phi.root_to_node_phase
    # q_w psi_{w -> r} g(w); psi_{w -> r} is the conjugate of psi_{r -> w}
    pulled = q * np.conj(phase) * p.g
    num = (
        np.bincount(comp, weights=pulled.real, minlength=n_comp)
        + 1j * np.bincount(comp, weights=pulled.imag, minlength=n_comp)
    )
    den = np.bincount(comp, weights=q, minlength=n_comp)
    h = num / den
    return np.where(phi.node_root >= 0, phase * h[comp], 0.0).astype(np.complex128)


def default_alpha(q: float, d_max: float) -> float:
    """alpha = 2q / (q + 2 d_max)."""
    if not q > 0:
        raise InvalidInputError(f"q must be positive, got {q}")
    if d_max < 0:
        raise InvalidInputError(f"d_max must be nonnegative, got {d_max}")
    return 2.0 * q / (q + 2.0 * d_max)


def resolve_alpha(p: SmoothingProblem) -> tuple[float, bool]:
    """Control-variate weight for ``p`` and whether it is the degree-scaled variant."""
    if p.q.degree_factor is not None:
        q = p.q.degree_factor
        return 2.0 * q / (q + 2.0), True
    if p.q.uniform:
        d_max = float(np.max(p.graph.weighted_degrees)) if p.graph.n_nodes else 0.0
        return default_alpha(float(p.q.q[0]), d_max), False
    raise InvalidInputError("the control variate needs uniform or degree-scaled q")


def apply_control_variate(
    f_bar: np.ndarray, p: SmoothingProblem, alpha: float
) -> np.ndarray:
    """f_bar - alpha (Q^{-1}(L + Q) f_bar - g); columns of a 2-D input are samples."""
    q = p.q.q if f_bar.ndim == 1 else p.q.q[:, None]
    g = p.g if f_bar.ndim == 1 else p.g[:, None]
    residual = (p.laplacian @ f_bar) / q + f_bar - g
    return f_bar - alpha * residual


def estimate_hat(
    f_bar: ComplexSignal,
    p: SmoothingProblem,
    alpha: float,
    degree_scaled: bool = False,
) -> ComplexSignal:
    """Control-variate estimator; needs uniform q, or degree-scaled q with ``degree_scaled``."""
    if degree_scaled:
        if p.q.degree_factor is None:
            raise InvalidInputError("degree_scaled=True needs q = factor * degree")
    elif not p.q.uniform:
        raise InvalidInputError("estimate_hat needs uniform q (or degree_scaled=True)")
    return apply_control_variate(as_signal(f_bar, p.graph.n_nodes), p, alpha)


def _single_estimates(
    p: SmoothingProblem,
    kind: EstimatorKind,
    forests: Sequence[Mtsf],
    alpha: float | None,
) -> np.ndarray:
    """(m, n) array of per-forest estimates."""
    kind = EstimatorKind(kind)
    if kind is EstimatorKind.TILDE:
        return np.stack([estimate_tilde(phi, p) for phi in forests])
    bars = np.stack([estimate_bar(phi, p) for phi in forests])
    if kind is EstimatorKind.BAR:
        return bars
    if alpha is None:
        alpha, _ = resolve_alpha(p)
    elif not p.q.uniform and p.q.degree_factor is None:
        raise InvalidInputError("the control variate needs uniform or degree-scaled q")
    return apply_control_variate(bars.T, p, alpha).T


def smooth_with_forests(
    p: SmoothingProblem,
    kind: EstimatorKind | str,
    forests: Sequence[Mtsf],
    alpha: float | None = None,
) -> EstimateResult:
    """Average an estimator over an already sampled batch of forests."""
    if not forests:
        raise InvalidInputError("need at least one forest")
    kind = EstimatorKind(kind)
    start = time.perf_counter()
    samples = _single_estimates(p, kind, forests, alpha)
    m = samples.shape[0]
    variance = samples.var(axis=0, ddof=1) if m > 1 else np.zeros(p.graph.n_nodes)
    return EstimateResult(
        estimate=samples.mean(axis=0),
        per_node_sample_variance=np.asarray(variance, dtype=np.float64),
        m_used=m,
        estimator_kind=kind,
        wall_time=time.perf_counter() - start,
    )


def smooth(
    p: SmoothingProblem,
    kind: EstimatorKind | str,
    m: int,
    cfg: SamplerConfig,
    workers: int = 1,
    alpha: float | None = None,
) -> EstimateResult:
    """Sample ``m`` forests and average the chosen estimator over them."""
    if m < 1:
        raise InvalidInputError(f"m must be >= 1, got {m}")
    kind = EstimatorKind(kind)
    if cfg.q is not p.q and not np.array_equal(cfg.q.q, p.q.q):
        raise InvalidInputError("sampler q differs from the problem's q")
    start = time.perf_counter()
    if not np.any(p.g):
        n = p.graph.n_nodes
        return EstimateResult(
            estimate=np.zeros(n, dtype=np.complex128),
            per_node_sample_variance=np.zeros(n),
            m_used=m,
            estimator_kind=kind,
            wall_time=time.perf_counter() - start,
        )
    forests = sample_batch(p.graph, cfg, m, workers=workers)
    result = smooth_with_forests(p, kind, forests, alpha=alpha)
    result.wall_time = time.perf_counter() - start
    logger.debug("smooth kind=%s m=%d took %.3fs", kind, m, result.wall_time)
    return result
