"""Rooted multi-type spanning forests: trees with one root, and unicycles."""

from __future__ import annotations

import math
from collections import defaultdict, deque
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import InvalidInputError
from .graph import ConnectionGraph


@dataclass(frozen=True)
class RootedTree:
    root: int
    nodes: tuple[int, ...]
    edges: tuple[int, ...]


@dataclass(frozen=True)
class Unicycle:
    nodes: tuple[int, ...]
    edges: tuple[int, ...]
    cycle_edges: tuple[int, ...]
    cycle_phase: float


Component = RootedTree | Unicycle


@dataclass(frozen=True, eq=False)
class Mtsf:
    """A sampled rooted MTSF.

    ``root_to_node_phase`` holds psi_{r -> v} for nodes of tree components
    and 0 on unicycle nodes; ``node_root`` is -1 on unicycle nodes.
    """
    edges: tuple[int, ...]
    roots: tuple[int, ...]
    components: tuple[Component, ...]
    node_component: npt.NDArray[np.int64]
    node_root: npt.NDArray[np.int64]
    root_to_node_phase: npt.NDArray[np.complex128]
    walk_steps: int = 0

    @property
    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.edges, self.roots

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mtsf):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def n_nodes(self) -> int:
        return int(self.node_component.size)

    @property
    def trees(self) -> list[RootedTree]:
        return [c for c in self.components if isinstance(c, RootedTree)]

    @property
    def unicycles(self) -> list[Unicycle]:
        return [c for c in self.components if isinstance(c, Unicycle)]


def _sub_adjacency(
    g: ConnectionGraph, edge_ids: Iterable[int]
) -> dict[int, list[tuple[int, int, bool]]]:
    adj: dict[int, list[tuple[int, int, bool]]] = defaultdict(list)
    for e in edge_ids:
        a, b = int(g.u[e]), int(g.v[e])
        adj[a].append((b, e, True))
        adj[b].append((a, e, False))
    return adj


def split_components(
    g: ConnectionGraph, edge_ids: Iterable[int]
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Connected components (nodes, edges) of the spanning subgraph on ``edge_ids``."""
    edge_ids = sorted(int(e) for e in edge_ids)
    n = g.n_nodes
    sel = np.asarray(edge_ids, dtype=np.int64)
    adj = sp.coo_matrix(
        (np.ones(sel.size), (g.u[sel], g.v[sel])), shape=(n, n)
    )
    _, labels = connected_components(adj, directed=False)
    nodes: dict[int, list[int]] = defaultdict(list)
    edges: dict[int, list[int]] = defaultdict(list)
    for node in range(n):
        nodes[int(labels[node])].append(node)
    for e in edge_ids:
        edges[int(labels[g.u[e]])].append(e)
    return [(tuple(nodes[c]), tuple(edges[c])) for c in sorted(nodes, key=lambda c: nodes[c][0])]


def _cycle_of(
    g: ConnectionGraph, nodes: tuple[int, ...], edges: tuple[int, ...]
) -> tuple[tuple[int, ...], float]:
    """Strip leaves until only the cycle is left; return its edges and phase."""
    adj = _sub_adjacency(g, edges)
    degree = {node: len(adj[node]) for node in nodes}
    removed: set[int] = set()
    leaves = deque(node for node in nodes if degree[node] == 1)
    while leaves:
        leaf = leaves.popleft()
        removed.add(leaf)
        for nbr, _, _ in adj[leaf]:
            if nbr not in removed:
                degree[nbr] -= 1
                if degree[nbr] == 1:
                    leaves.append(nbr)
    cycle = [e for e in edges if g.u[e] not in removed and g.v[e] not in removed]

    start_edge = cycle[0]
    start, here = int(g.u[start_edge]), int(g.v[start_edge])
    phase = float(g.theta[start_edge])
    prev = start_edge
    while here != start:
        nxt, e, forward = next(
            (b, e, fwd) for b, e, fwd in adj[here] if e != prev and e in cycle
        )
        phase += g.theta[e] if forward else -g.theta[e]
        prev, here = e, nxt
    return tuple(cycle), phase


def _tree_phases(
    g: ConnectionGraph,
    root: int,
    edges: tuple[int, ...],
    phase: npt.NDArray[np.complex128],
) -> None:
    adj = _sub_adjacency(g, edges)
    phase[root] = 1.0
    seen = {root}
    queue = deque([root])
    while queue:
        here = queue.popleft()
        for nbr, e, forward in adj[here]:
            if nbr not in seen:
                seen.add(nbr)
                phase[nbr] = phase[here] * g.step_phase(e, forward)
                queue.append(nbr)


def build_mtsf(
    g: ConnectionGraph,
    edge_ids: Iterable[int],
    roots: Iterable[int],
    walk_steps: int = 0,
) -> Mtsf:
    """Classify an edge/root set into a rooted MTSF.

    Raises InvalidInputError unless every component is a tree with exactly
    one root or a rootless unicycle.
    """
    edge_ids = tuple(sorted(int(e) for e in edge_ids))
    root_set = {int(r) for r in roots}
    n = g.n_nodes
    outside = sorted(r for r in root_set if not 0 <= r < n)
    if outside:
        raise InvalidInputError(f"Root {outside[0]} is not a node of a {n}-node graph")
    node_component = np.empty(n, dtype=np.int64)
    node_root = np.full(n, -1, dtype=np.int64)
    phase = np.zeros(n, dtype=np.complex128)
    components: list[Component] = []

    for index, (nodes, edges) in enumerate(split_components(g, edge_ids)):
        node_component[list(nodes)] = index
        in_roots = [node for node in nodes if node in root_set]
        if len(edges) == len(nodes) - 1:
            if len(in_roots) != 1:
                raise InvalidInputError(
                    f"Tree component at node {nodes[0]} needs one root, has {len(in_roots)}"
                )
            root = in_roots[0]
            node_root[list(nodes)] = root
            _tree_phases(g, root, edges, phase)
            components.append(RootedTree(root=root, nodes=nodes, edges=edges))
        elif len(edges) == len(nodes):
            if in_roots:
                raise InvalidInputError(f"Unicycle at node {nodes[0]} cannot carry a root")
            cycle, cycle_phase = _cycle_of(g, nodes, edges)
            components.append(
                Unicycle(nodes=nodes, edges=edges, cycle_edges=cycle, cycle_phase=cycle_phase)
            )
        else:
            raise InvalidInputError(
                f"Component at node {nodes[0]} has {len(nodes)} nodes and {len(edges)} edges"
            )

    return Mtsf(
        edges=edge_ids,
        roots=tuple(sorted(root_set)),
        components=tuple(components),
        node_component=node_component,
        node_root=node_root,
        root_to_node_phase=phase,
        walk_steps=walk_steps,
    )


def structure_problems(phi: Mtsf, g: ConnectionGraph, tol: float = 1e-9) -> list[str]:
    """List every broken structural invariant of ``phi`` (empty = valid)."""
    problems: list[str] = []
    n = g.n_nodes
    if phi.n_nodes != n:
        return [f"sample has {phi.n_nodes} nodes, graph has {n}"]
    if len(phi.edges) + len(phi.roots) != n:
        problems.append(f"|edges| + |roots| = {len(phi.edges) + len(phi.roots)} != {n}")

    covered = np.zeros(n, dtype=np.int64)
    for index, comp in enumerate(phi.components):
        covered[list(comp.nodes)] += 1
        if np.any(phi.node_component[list(comp.nodes)] != index):
            problems.append(f"component {index}: node_component mismatch")
        if isinstance(comp, RootedTree):
            if len(comp.edges) != len(comp.nodes) - 1:
                problems.append(f"tree {index}: {len(comp.edges)} edges for {len(comp.nodes)} nodes")
            if comp.root not in comp.nodes:
                problems.append(f"tree {index}: root outside component")
            if abs(phi.root_to_node_phase[comp.root] - 1) > tol:
                problems.append(f"tree {index}: root phase is not 1")
            for e in comp.edges:
                # holds whichever endpoint is the parent
                pa, pb = phi.root_to_node_phase[g.u[e]], phi.root_to_node_phase[g.v[e]]
                if abs(pb - pa * g.step_phase(e, True)) > tol:
                    problems.append(f"tree {index}: phase not transported along edge {e}")
        else:
            if len(comp.edges) != len(comp.nodes):
                problems.append(f"unicycle {index}: {len(comp.edges)} edges for {len(comp.nodes)} nodes")
            if any(node in phi.roots for node in comp.nodes):
                problems.append(f"unicycle {index}: contains a root")
            if not comp.cycle_edges or not math.isfinite(comp.cycle_phase):
                problems.append(f"unicycle {index}: missing cycle")
    if np.any(covered != 1):
        problems.append("components do not partition the node set")

    components_of_edges = split_components(g, phi.edges)
    if len(components_of_edges) != len(phi.components):
        problems.append("edge set connectivity disagrees with the component list")
    return problems
