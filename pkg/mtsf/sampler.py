"""Random-walk sampler for rooted multi-type spanning forests.

A walk started from every node not yet in the forest, in ascending id
order. At node u the walk roots itself with probability q_u / (q_u + d_u),
otherwise it moves to a neighbour with probability w / d_u. When the walk
closes a loop C it keeps it with probability 1 - cos(theta_C) and stops
(the component becomes a unicycle), else the loop is erased. A walk that
steps onto the current forest is grafted onto the component it hits.
"""

from __future__ import annotations

import logging
import math
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .forest import Mtsf, RootedTree, Unicycle
from .graph import ConnectionGraph, NodeWeights, check_sampling_condition_bound
from .utils import chunk_indices, derive_subseed, flatten

logger = logging.getLogger(__name__)

_BLOCK = 4096


@dataclass(frozen=True)
class SamplerConfig:
    rng_seed: int
    q: NodeWeights


class _Uniforms:
    """Uniform draws pulled from the generator in blocks."""

    def __init__(self, rng: np.random.Generator):
        self._rng = rng
        self._buf: list[float] = []
        self._pos = 0

    def next(self) -> float:
        if self._pos == len(self._buf):
            self._buf = self._rng.random(_BLOCK).tolist()
            self._pos = 0
        x = self._buf[self._pos]
        self._pos += 1
        return x


class _Component:
    __slots__ = ("root", "nodes", "edges", "cycle_edges", "cycle_phase")

    def __init__(self, root: int | None):
        self.root = root
        self.nodes: list[int] = []
        self.edges: list[int] = []
        self.cycle_edges: list[int] = []
        self.cycle_phase = 0.0


def sample_mtsf(
    g: ConnectionGraph,
    cfg: SamplerConfig,
    rng: np.random.Generator | None = None,
) -> Mtsf:
    """Draw one rooted MTSF with probability proportional to
    prod q_r * prod w_e * prod_C (2 - 2 cos theta_C)."""
    q = cfg.q.q
    if q.size != g.n_nodes:
        raise InvalidInputError(f"q has {q.size} entries, graph has {g.n_nodes} nodes")
    uniforms = _Uniforms(rng if rng is not None else np.random.default_rng(cfg.rng_seed))
    tables = g.walk_tables
    indptr, heads, eids = tables.indptr, tables.heads, tables.edge_ids
    signed_theta, cum, degrees = tables.signed_theta, tables.cum_weights, tables.degrees
    qs = q.tolist()
    n = g.n_nodes

    comp_of = [-1] * n
    pos = [-1] * n
    phase = [0j] * n
    comps: list[_Component] = []
    steps = 0

    for start in range(n):
        if comp_of[start] >= 0:
            continue
        path = [start]
        pos[start] = 0
        step_edges: list[int] = []
        step_theta: list[float] = []
        prefix = [0.0]
        here = start

        while True:
            steps += 1
            qu = qs[here]
            x = uniforms.next() * (qu + degrees[here])
            if x < qu:
                comp = _Component(root=here)
                comps.append(comp)
                phase[here] = 1 + 0j
                target = len(comps) - 1
                break

            lo, hi = indptr[here], indptr[here + 1]
            k = min(bisect_right(cum, x - qu, lo, hi), hi - 1)
            nxt, e, t = heads[k], eids[k], signed_theta[k]

            if comp_of[nxt] >= 0:
                target = comp_of[nxt]
                comp = comps[target]
                step_edges.append(e)
                step_theta.append(t)
                if comp.root is not None:
                    phase[here] = phase[nxt] * complex(math.cos(t), -math.sin(t))
                break

            j = pos[nxt]
            if j >= 0:
                theta_c = prefix[-1] + t - prefix[j]
                if uniforms.next() < 1.0 - math.cos(theta_c):
                    comp = _Component(root=None)
                    comps.append(comp)
                    target = len(comps) - 1
                    comp.cycle_edges = step_edges[j:] + [e]
                    comp.cycle_phase = theta_c
                    step_edges.append(e)
                    step_theta.append(t)
                    break
                for node in path[j + 1:]:
                    pos[node] = -1
                del path[j + 1:]
                del step_edges[j:]
                del step_theta[j:]
                del prefix[j + 1:]
                here = nxt
                continue

            pos[nxt] = len(path)
            path.append(nxt)
            step_edges.append(e)
            step_theta.append(t)
            prefix.append(prefix[-1] + t)
            here = nxt

        # graft the loop-erased path onto component ``target``
        comp = comps[target]
        comp.nodes.extend(path)
        comp.edges.extend(step_edges)
        for node in path:
            comp_of[node] = target
            pos[node] = -1
        if comp.root is not None:
            # phase[path[-1]] is already set; walk back towards the start
            for i in range(len(path) - 2, -1, -1):
                t = step_theta[i]
                phase[path[i]] = phase[path[i + 1]] * complex(math.cos(t), -math.sin(t))

    return _freeze(n, comps, comp_of, phase, steps)


def _freeze(
    n: int,
    comps: list[_Component],
    comp_of: list[int],
    phase: list[complex],
    steps: int,
) -> Mtsf:
    components = []
    node_root = np.full(n, -1, dtype=np.int64)
    edges: list[int] = []
    roots: list[int] = []
    for comp in comps:
        nodes = tuple(sorted(comp.nodes))
        comp_edges = tuple(sorted(comp.edges))
        edges.extend(comp_edges)
        if comp.root is not None:
            roots.append(comp.root)
            node_root[list(nodes)] = comp.root
            components.append(RootedTree(root=comp.root, nodes=nodes, edges=comp_edges))
        else:
            components.append(Unicycle(
                nodes=nodes,
                edges=comp_edges,
                cycle_edges=tuple(sorted(comp.cycle_edges)),
                cycle_phase=comp.cycle_phase,
            ))
    return Mtsf(
        edges=tuple(sorted(edges)),
        roots=tuple(sorted(roots)),
        components=tuple(components),
        node_component=np.asarray(comp_of, dtype=np.int64),
        node_root=node_root,
        root_to_node_phase=np.asarray(phase, dtype=np.complex128),
        walk_steps=steps,
    )


def _sample_range(g: ConnectionGraph, cfg: SamplerConfig, indices: range) -> list[Mtsf]:
    return [
        sample_mtsf(g, SamplerConfig(derive_subseed(cfg.rng_seed, i), cfg.q))
        for i in indices
    ]


def sample_batch(
    g: ConnectionGraph,
    cfg: SamplerConfig,
    m: int,
    workers: int = 1,
) -> list[Mtsf]:
    """``m`` independent samples; sample i uses ``derive_subseed(seed, i)``."""
    if m < 1:
        raise InvalidInputError(f"m must be >= 1, got {m}")
    if not check_sampling_condition_bound(g):
        logger.warning(
            "phase bound max|theta_e| * n <= pi/2 fails; loop acceptance may be invalid"
        )
    if workers <= 1 or m == 1:
        samples = _sample_range(g, cfg, range(m))
    else:
        chunks = chunk_indices(m, workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sample_range, g, cfg, chunk) for chunk in chunks]
            samples = flatten([f.result() for f in futures])
    logger.debug(
        "sampled %d forests on %d nodes, mean walk steps %.1f",
        m, g.n_nodes, sum(s.walk_steps for s in samples) / m,
    )
    return samples
