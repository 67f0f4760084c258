"""Library objects -> text and CSV output."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from .constants import (
    CATALOG_COLUMNS,
    COMMENT_PREFIX,
    ESTIMATE_COLUMNS,
    GROUND_TRUTH_TAG,
    SAMPLE_PREFIX,
    TREE_TAG,
    UNICYCLE_TAG,
)
from .estimators import EstimateResult
from .forest import Mtsf, RootedTree
from .graph import ComplexSignal, ConnectionGraph
from .oracle import MtsfCatalog
from .ranking import ComparisonSet
from .utils import format_float


def _ids(values: Iterable[int]) -> str:
    return ",".join(str(int(v)) for v in values)


def format_edge_list(g: ConnectionGraph) -> str:
    lines = [f"{g.n_nodes} {g.n_edges}"]
    for a, b, weight, theta in g.edges:
        lines.append(f"{a} {b} {format_float(weight)} {format_float(theta)}")
    return "\n".join(lines) + "\n"


def format_signal(signal: ComplexSignal) -> str:
    return "".join(
        f"{node} {format_float(value.real)} {format_float(value.imag)}\n"
        for node, value in enumerate(np.asarray(signal, dtype=np.complex128))
    )


def format_instance(cs: ComparisonSet) -> str:
    """Render an ERO instance, hidden ranking included as a comment line."""
    lines = [f"{cs.n} {format_float(cs.s)} {format_float(cs.p)} {cs.seed}"]
    lines.append(f"{COMMENT_PREFIX} {GROUND_TRUTH_TAG} {' '.join(str(int(r)) for r in cs.ground_truth)}")
    for (i, j), c in zip(cs.pairs, cs.c):
        lines.append(f"{int(i)} {int(j)} {int(c)}")
    return "\n".join(lines) + "\n"


def format_sample_dump(samples: Sequence[Mtsf]) -> str:
    lines: list[str] = []
    for index, phi in enumerate(samples):
        lines.append(f"{SAMPLE_PREFIX} {index}")
        for comp in phi.components:
            if isinstance(comp, RootedTree):
                lines.append(f"{TREE_TAG} root={comp.root} edges={_ids(comp.edges)}")
            else:
                lines.append(
                    f"{UNICYCLE_TAG} cycle_phase={format_float(comp.cycle_phase)} edges={_ids(comp.edges)}"
                )
    return "\n".join(lines) + "\n"


def format_rows(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV text with a fixed header row; floats in round-trip form."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_float(x) if isinstance(x, (float, np.floating)) else x for x in row])
    return buffer.getvalue()


def write_rows(path: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    path.write_text(format_rows(columns, rows), encoding="utf-8")


def format_estimate_csv(result: EstimateResult) -> str:
    rows = (
        (node, float(value.real), float(value.imag), float(var))
        for node, (value, var) in enumerate(zip(result.estimate, result.per_node_sample_variance))
    )
    return format_rows(ESTIMATE_COLUMNS, rows)


def sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".meta.json")


def write_estimate(path: Path, result: EstimateResult, meta: dict[str, Any]) -> Path:
    """Write the estimate CSV and its JSON sidecar; return the sidecar path."""
    path.write_text(format_estimate_csv(result), encoding="utf-8")
    payload = {
        **meta,
        "kind": str(result.estimator_kind),
        "m": result.m_used,
        "wall_time": result.wall_time,
    }
    meta_path = sidecar_path(path)
    meta_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return meta_path


def format_catalog_csv(catalog: MtsfCatalog) -> str:
    rows = []
    for entry in catalog.entries:
        phi = entry.forest
        cycles = ";".join(
            f"{_ids(c.cycle_edges)}@{format_float(c.cycle_phase)}" for c in phi.unicycles
        )
        rows.append((entry.weight, entry.probability, _ids(phi.roots), _ids(phi.edges), cycles))
    return format_rows(CATALOG_COLUMNS, rows)
