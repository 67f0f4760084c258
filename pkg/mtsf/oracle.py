"""Brute-force ground truth on tiny graphs.

Enumerates every rooted MTSF, weighs it by
prod q_r * prod w_e * prod_C (2 - 2 cos theta_C), and checks the
determinantal identities against dense linear algebra. Items of the
ground set are edges first, then nodes offset by |E|.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter, defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from math import comb

import numpy as np
import numpy.typing as npt
import scipy.linalg

from .constants import ORACLE_MAX_EDGES, ORACLE_MAX_NODES
from .errors import SizeGuardError
from .estimators import (
    EstimatorKind,
    SmoothingProblem,
    apply_control_variate,
    estimate_bar,
    estimate_tilde,
    resolve_alpha,
)
from .forest import Mtsf, build_mtsf, split_components
from .graph import ComplexSignal, ConnectionGraph, NodeWeights, twisted_incidence
from .linalg import regularized_operator, solve_exact

logger = logging.getLogger(__name__)

MAX_CAUCHY_BINET_TERMS = 50_000
EXACT_TOL = 1e-10


@dataclass(frozen=True)
class CatalogEntry:
    forest: Mtsf
    weight: float
    probability: float

    def items(self, n_edges: int) -> frozenset[int]:
        return frozenset(self.forest.edges) | {n_edges + r for r in self.forest.roots}


@dataclass(frozen=True)
class MtsfCatalog:
    entries: tuple[CatalogEntry, ...]
    partition_value: float
    n_edges: int

    def __len__(self) -> int:
        return len(self.entries)

    def probabilities(self) -> dict[tuple, float]:
        return {entry.forest.key: entry.probability for entry in self.entries}


@dataclass(frozen=True)
class Moments:
    mean: ComplexSignal
    variance: npt.NDArray[np.float64]


@dataclass
class OracleCheck:
    """One identity checked by the oracle."""
    name: str
    value: float
    tolerance: float
    passed: bool

    def __str__(self) -> str:
        status = "OK" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.value:.3e} (tol {self.tolerance:.1e})"


def _guard(g: ConnectionGraph) -> None:
    if g.n_nodes > ORACLE_MAX_NODES or g.n_edges > ORACLE_MAX_EDGES:
        raise SizeGuardError(
            f"enumeration limited to {ORACLE_MAX_NODES} nodes and {ORACLE_MAX_EDGES} edges, "
            f"got {g.n_nodes} and {g.n_edges}"
        )


def forest_weight(g: ConnectionGraph, q: NodeWeights, phi: Mtsf) -> float:
    weight = float(np.prod(q.q[list(phi.roots)])) * float(np.prod(g.w[list(phi.edges)]))
    for comp in phi.unicycles:
        weight *= 2.0 - 2.0 * np.cos(comp.cycle_phase)
    return weight


def enumerate_mtsfs(g: ConnectionGraph, q: NodeWeights) -> MtsfCatalog:
    """Every rooted MTSF of ``g`` with nonzero weight, with exact probabilities."""
    _guard(g)
    n, m = g.n_nodes, g.n_edges
    forests: list[tuple[Mtsf, float]] = []
    for size in range(min(n, m) + 1):
        for edges in itertools.combinations(range(m), size):
            comps = split_components(g, edges)
            if any(len(ce) not in (len(cn) - 1, len(cn)) for cn, ce in comps):
                continue
            tree_nodes = [cn for cn, ce in comps if len(ce) == len(cn) - 1]
            for roots in itertools.product(*tree_nodes):
                phi = build_mtsf(g, edges, roots)
                weight = forest_weight(g, q, phi)
                if weight > 0:
                    forests.append((phi, weight))
    total = sum(weight for _, weight in forests)
    entries = tuple(CatalogEntry(phi, weight, weight / total) for phi, weight in forests)
    logger.info("enumerated %d forests, partition value %.6g", len(entries), total)
    return MtsfCatalog(entries=entries, partition_value=total, n_edges=m)


def incidence_with_roots(g: ConnectionGraph, q: NodeWeights) -> np.ndarray:
    """B = [grad; sqrt(Q)], rows indexed by items."""
    return np.vstack([twisted_incidence(g).toarray(), np.diag(np.sqrt(q.q)).astype(complex)])


def marginal_kernel(g: ConnectionGraph, q: NodeWeights) -> np.ndarray:
    """K = B (L + Q)^{-1} B^*, a Hermitian projection of rank |V|."""
    _guard(g)
    b = incidence_with_roots(g, q)
    a = regularized_operator(g, q).toarray()
    return b @ scipy.linalg.solve(a, b.conj().T, assume_a="her")


def catalog_inclusion_probability(catalog: MtsfCatalog, items: Iterable[int]) -> float:
    """Probability that every item is in the sample."""
    wanted = frozenset(int(i) for i in items)
    return sum(
        entry.probability
        for entry in catalog.entries
        if wanted <= entry.items(catalog.n_edges)
    )


def cauchy_binet_partition(g: ConnectionGraph, q: NodeWeights) -> float:
    """sum over |V|-subsets T of items of |det B_T|^2."""
    _guard(g)
    b = incidence_with_roots(g, q)
    n_items, n = b.shape
    terms = comb(n_items, n)
    if terms > MAX_CAUCHY_BINET_TERMS:
        raise SizeGuardError(f"Cauchy-Binet sum has {terms} terms")
    return float(sum(
        abs(np.linalg.det(b[list(rows)])) ** 2
        for rows in itertools.combinations(range(n_items), n)
    ))


def _estimator_tables(
    catalog: MtsfCatalog, problem: SmoothingProblem
) -> dict[EstimatorKind, np.ndarray]:
    forests = [entry.forest for entry in catalog.entries]
    tables = {
        EstimatorKind.TILDE: np.stack([estimate_tilde(phi, problem) for phi in forests]),
        EstimatorKind.BAR: np.stack([estimate_bar(phi, problem) for phi in forests]),
    }
    if problem.q.uniform or problem.q.degree_factor is not None:
        alpha, _ = resolve_alpha(problem)
        tables[EstimatorKind.HAT] = apply_control_variate(tables[EstimatorKind.BAR].T, problem, alpha).T
    return tables


def exact_estimator_moments(
    g: ConnectionGraph,
    q: NodeWeights,
    signal: npt.ArrayLike,
    catalog: MtsfCatalog | None = None,
) -> dict[EstimatorKind, Moments]:
    """Exact mean and per-node variance of each single-forest estimator."""
    if catalog is None:
        catalog = enumerate_mtsfs(g, q)
    problem = SmoothingProblem(g, signal, q)
    probs = np.array([entry.probability for entry in catalog.entries])
    moments = {}
    for kind, table in _estimator_tables(catalog, problem).items():
        mean = probs @ table
        variance = probs @ np.abs(table - mean) ** 2
        moments[kind] = Moments(mean=mean, variance=variance)
    return moments


def rao_blackwell_gap(
    g: ConnectionGraph,
    q: NodeWeights,
    signal: npt.ArrayLike,
    catalog: MtsfCatalog | None = None,
) -> float:
    """max |E[tilde | edge set] - bar| over edge sets and nodes."""
    if catalog is None:
        catalog = enumerate_mtsfs(g, q)
    problem = SmoothingProblem(g, signal, q)
    groups: dict[tuple[int, ...], list[CatalogEntry]] = defaultdict(list)
    for entry in catalog.entries:
        groups[entry.forest.edges].append(entry)
    gap = 0.0
    for entries in groups.values():
        mass = sum(entry.probability for entry in entries)
        conditional = sum(
            entry.probability * estimate_tilde(entry.forest, problem) for entry in entries
        ) / mass
        bar = estimate_bar(entries[0].forest, problem)
        gap = max(gap, float(np.max(np.abs(conditional - bar))))
    return gap


def total_variation(samples: Sequence[Mtsf], catalog: MtsfCatalog) -> float:
    """TV distance between the empirical law of ``samples`` and the catalog."""
    counts = Counter(phi.key for phi in samples)
    m = len(samples)
    exact = catalog.probabilities()
    keys = set(counts) | set(exact)
    return 0.5 * sum(abs(counts.get(key, 0) / m - exact.get(key, 0.0)) for key in keys)


def _check(name: str, value: float, tolerance: float) -> OracleCheck:
    return OracleCheck(name=name, value=float(value), tolerance=tolerance, passed=bool(value <= tolerance))


def run_oracle_checks(
    g: ConnectionGraph,
    q: NodeWeights,
    signal: npt.ArrayLike,
    seed: int = 0,
    n_pairs: int = 20,
) -> list[OracleCheck]:
    """Check the enumerated law against the determinantal identities."""
    catalog = enumerate_mtsfs(g, q)
    n, m = g.n_nodes, g.n_edges
    checks: list[OracleCheck] = []

    det = float(np.real(np.linalg.det(regularized_operator(g, q).toarray())))
    checks.append(_check("partition_function", abs(catalog.partition_value - det) / det, EXACT_TOL))
    total = sum(entry.probability for entry in catalog.entries)
    checks.append(_check("probabilities_sum", abs(total - 1.0), EXACT_TOL))
    sizes = [len(entry.forest.edges) + len(entry.forest.roots) for entry in catalog.entries]
    checks.append(_check("fixed_sample_size", sum(size != n for size in sizes), 0))

    if comb(m + n, n) <= MAX_CAUCHY_BINET_TERMS:
        cb = cauchy_binet_partition(g, q)
        checks.append(_check("cauchy_binet", abs(cb - det) / det, EXACT_TOL))

    k = marginal_kernel(g, q)
    checks.append(_check("kernel_projection", np.max(np.abs(k @ k - k)), EXACT_TOL))
    checks.append(_check("kernel_trace", abs(np.real(np.trace(k)) - n), EXACT_TOL))
    eigenvalues = np.linalg.eigvalsh(k)
    checks.append(_check(
        "kernel_spectrum", np.max(np.minimum(np.abs(eigenvalues), np.abs(eigenvalues - 1))), 1e-8
    ))

    items = m + n
    singles = [abs(catalog_inclusion_probability(catalog, [i]) - np.real(k[i, i])) for i in range(items)]
    checks.append(_check("singleton_inclusion", max(singles), EXACT_TOL))
    rng = np.random.default_rng(seed)
    all_pairs = list(itertools.combinations(range(items), 2))
    picked = rng.choice(len(all_pairs), size=min(n_pairs, len(all_pairs)), replace=False)
    pair_errors = []
    for index in picked:
        pair = list(all_pairs[index])
        expected = np.real(np.linalg.det(k[np.ix_(pair, pair)]))
        pair_errors.append(abs(catalog_inclusion_probability(catalog, pair) - expected))
    checks.append(_check("pair_inclusion", max(pair_errors, default=0.0), EXACT_TOL))

    problem = SmoothingProblem(g, signal, q)
    f_o = solve_exact(problem)
    scale = max(1.0, float(np.max(np.abs(f_o))))
    moments = exact_estimator_moments(g, q, problem.g, catalog)
    for kind, moment in moments.items():
        bias = np.max(np.abs(moment.mean - f_o)) / scale
        checks.append(_check(f"unbiased_{kind}", bias, EXACT_TOL))
    excess = np.max(moments[EstimatorKind.BAR].variance - moments[EstimatorKind.TILDE].variance)
    checks.append(_check("variance_bar_le_tilde", max(0.0, float(excess)), 1e-12 * scale**2))
    checks.append(_check("rao_blackwell", rao_blackwell_gap(g, q, problem.g, catalog) / scale, EXACT_TOL))

    for check in checks:
        (logger.info if check.passed else logger.warning)("%s", check)
    return checks
