"""Graphs with a unitary connection and their magnetic Laplacian.

Every edge is stored once under its canonical orientation u < v together
with the phase theta for the traversal u -> v. Walking the edge v -> u
uses -theta.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np
import numpy.typing as npt
import scipy.sparse as sp

from .constants import HALF_PI
from .errors import InvalidInputError

ComplexSignal = npt.NDArray[np.complex128]


class WalkTables(NamedTuple):
    """Flat CSR adjacency as Python lists, the form the random walk reads fastest."""
    indptr: list[int]
    heads: list[int]
    edge_ids: list[int]
    signed_theta: list[float]
    cum_weights: list[float]  # cumulative weight inside each node's row
    degrees: list[float]


@dataclass(frozen=True, eq=False)
class ConnectionGraph:
    """Weighted undirected multigraph with one phase per edge."""
    n_nodes: int
    u: npt.NDArray[np.int64]
    v: npt.NDArray[np.int64]
    w: npt.NDArray[np.float64]
    theta: npt.NDArray[np.float64]

    @classmethod
    def from_edges(
        cls,
        n_nodes: int,
        edges: Iterable[tuple[int, int, float, float]],
    ) -> ConnectionGraph:
        """Build a graph from (u, v, weight, theta) records, theta given for u -> v.

        Records with u > v are flipped to canonical orientation with theta negated.
        """
        if n_nodes < 1:
            raise InvalidInputError(f"n_nodes must be >= 1, got {n_nodes}")
        rows = list(edges)
        us = np.empty(len(rows), dtype=np.int64)
        vs = np.empty(len(rows), dtype=np.int64)
        ws = np.empty(len(rows), dtype=np.float64)
        ts = np.empty(len(rows), dtype=np.float64)
        for k, (a, b, weight, theta) in enumerate(rows):
            a, b = int(a), int(b)
            if a == b:
                raise InvalidInputError(f"Edge {k}: self-loop on node {a}")
            if not (0 <= a < n_nodes and 0 <= b < n_nodes):
                raise InvalidInputError(f"Edge {k}: node id out of range [0, {n_nodes})")
            if not weight > 0 or not math.isfinite(weight):
                raise InvalidInputError(f"Edge {k}: weight must be positive, got {weight}")
            if not math.isfinite(theta):
                raise InvalidInputError(f"Edge {k}: theta must be finite")
            if a > b:
                a, b, theta = b, a, -theta
            us[k], vs[k], ws[k], ts[k] = a, b, weight, theta
        return cls(n_nodes=n_nodes, u=us, v=vs, w=ws, theta=ts)

    @property
    def n_edges(self) -> int:
        return int(self.u.size)

    @property
    def edges(self) -> list[tuple[int, int, float, float]]:
        return [
            (int(a), int(b), float(weight), float(t))
            for a, b, weight, t in zip(self.u, self.v, self.w, self.theta)
        ]

    @cached_property
    def weighted_degrees(self) -> npt.NDArray[np.float64]:
        n = self.n_nodes
        return (
            np.bincount(self.u, weights=self.w, minlength=n)
            + np.bincount(self.v, weights=self.w, minlength=n)
        )

    @cached_property
    def _csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        m = self.n_edges
        tails = np.concatenate([self.u, self.v])
        heads = np.concatenate([self.v, self.u])
        eids = np.concatenate([np.arange(m), np.arange(m)])
        forward = np.concatenate([np.ones(m, dtype=bool), np.zeros(m, dtype=bool)])
        order = np.lexsort((eids, tails))
        indptr = np.zeros(self.n_nodes + 1, dtype=np.int64)
        np.cumsum(np.bincount(tails, minlength=self.n_nodes), out=indptr[1:])
        return indptr, heads[order], eids[order], forward[order]

    @cached_property
    def walk_tables(self) -> WalkTables:
        indptr, heads, eids, forward = self._csr
        weights = self.w[eids]
        signed = np.where(forward, self.theta[eids], -self.theta[eids])
        cum = np.cumsum(weights)
        base = np.concatenate([[0.0], cum])[indptr[:-1]]
        counts = np.diff(indptr)
        cum_local = cum - np.repeat(base, counts)
        return WalkTables(
            indptr=indptr.tolist(),
            heads=heads.tolist(),
            edge_ids=eids.tolist(),
            signed_theta=signed.tolist(),
            cum_weights=cum_local.tolist(),
            degrees=self.weighted_degrees.tolist(),
        )

    @cached_property
    def laplacian(self) -> sp.csr_matrix:
        return magnetic_laplacian(self)

    def step_phase(self, edge: int, forward: bool) -> complex:
        """Unit factor for traversing ``edge`` (forward = stored orientation)."""
        t = self.theta[edge]
        return complex(np.exp(1j * t if forward else -1j * t))

    def with_gauge(self, node: int, phi: float) -> ConnectionGraph:
        """Gauge transform f(node) -> e^{i phi} f(node) absorbed into the phases."""
        theta = self.theta.copy()
        theta[self.u == node] -= phi
        theta[self.v == node] += phi
        return ConnectionGraph(self.n_nodes, self.u, self.v, self.w, theta)


@dataclass(frozen=True, eq=False)
class NodeWeights:
    """Positive per-node parameters q_v (the diagonal of Q)."""
    q: npt.NDArray[np.float64]
    degree_factor: float | None = field(default=None)

    def __post_init__(self) -> None:
        q = np.asarray(self.q, dtype=np.float64)
        if q.ndim != 1 or q.size == 0:
            raise InvalidInputError("q must be a non-empty vector")
        if not np.all(np.isfinite(q)) or np.any(q <= 0):
            raise InvalidInputError("q must be strictly positive")
        object.__setattr__(self, "q", q)

    @classmethod
    def constant(cls, n_nodes: int, q: float) -> NodeWeights:
        return cls(np.full(n_nodes, float(q)))

    @classmethod
    def degree_scaled(cls, graph: ConnectionGraph, q: float) -> NodeWeights:
        """q_v = q * d_v, the weights behind the normalized-Laplacian resolvent."""
        d = graph.weighted_degrees
        if np.any(d <= 0):
            raise InvalidInputError("degree-scaled weights need every node to have an edge")
        return cls(float(q) * d, degree_factor=float(q))

    @property
    def uniform(self) -> bool:
        return bool(np.all(self.q == self.q[0]))

    def __len__(self) -> int:
        return int(self.q.size)


def as_signal(values: Sequence[complex] | np.ndarray, n_nodes: int) -> ComplexSignal:
    """Coerce ``values`` to a complex vector of length ``n_nodes``."""
    arr = np.asarray(values, dtype=np.complex128)
    if arr.shape != (n_nodes,):
        raise InvalidInputError(
            f"Signal length {arr.size} does not match n_nodes={n_nodes}"
        )
    return arr


def magnetic_laplacian(g: ConnectionGraph) -> sp.csr_matrix:
    """L = D - A_theta with L[v,u] = -w e^{i theta} for the edge u -> v."""
    n = g.n_nodes
    transport = g.w * np.exp(1j * g.theta)
    rows = np.concatenate([g.v, g.u, np.arange(n)])
    cols = np.concatenate([g.u, g.v, np.arange(n)])
    data = np.concatenate([-transport, -np.conj(transport), g.weighted_degrees.astype(complex)])
    return sp.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()


def twisted_incidence(g: ConnectionGraph) -> sp.csr_matrix:
    """Twisted differential with (grad f)_e = sqrt(w) (f(b) - e^{i theta} f(a)) for e = a -> b."""
    m = g.n_edges
    root_w = np.sqrt(g.w)
    rows = np.concatenate([np.arange(m), np.arange(m)])
    cols = np.concatenate([g.u, g.v])
    data = np.concatenate([-root_w * np.exp(1j * g.theta), root_w.astype(complex)])
    return sp.coo_matrix((data, (rows, cols)), shape=(m, g.n_nodes)).tocsr()


def quadratic_form(g: ConnectionGraph, f: Sequence[complex] | np.ndarray) -> float:
    """Sum over edges of w_e |f(v) - e^{i theta_e} f(u)|^2."""
    f = as_signal(f, g.n_nodes)
    diff = f[g.v] - np.exp(1j * g.theta) * f[g.u]
    return float(np.sum(g.w * np.abs(diff) ** 2))


def path_phase(g: ConnectionGraph, path: Sequence[tuple[int, bool]]) -> complex:
    """Product of e^{+-i theta} along a path of (edge id, forward) steps."""
    phase = 1.0 + 0.0j
    here: int | None = None
    for k, (edge, forward) in enumerate(path):
        if not 0 <= edge < g.n_edges:
            raise InvalidInputError(f"Step {k}: unknown edge {edge}")
        tail, head = (g.u[edge], g.v[edge]) if forward else (g.v[edge], g.u[edge])
        if here is not None and tail != here:
            raise InvalidInputError(f"Step {k}: path is not contiguous at edge {edge}")
        phase *= g.step_phase(edge, forward)
        here = int(head)
    return phase


def wrapped_phases(theta: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Phases mapped to (-pi, pi]."""
    return np.angle(np.exp(1j * np.asarray(theta, dtype=np.float64)))


def check_sampling_condition_bound(
    g: ConnectionGraph,
    per_edge_phase_bound: float | None = None,
) -> bool:
    """Sufficient test for cos(theta_C) >= 0 on every cycle.

    Any cycle has at most n_nodes edges, so max |theta_e| * n_nodes <= pi/2
    keeps every cycle phase within [-pi/2, pi/2].
    """
    if per_edge_phase_bound is None:
        if g.n_edges == 0:
            return True
        per_edge_phase_bound = float(np.max(np.abs(wrapped_phases(g.theta))))
    return abs(per_edge_phase_bound) * g.n_nodes <= HALF_PI * (1 + 1e-12)
