"""Text formats -> library objects: edge lists, signals, ranking instances."""

from __future__ import annotations

import math
from collections.abc import Iterator

import numpy as np

from .constants import (
    COMMENT_PREFIX,
    COMPARISON_RECORD_FIELDS,
    EDGE_LIST_HEADER_FIELDS,
    EDGE_RECORD_FIELDS,
    GROUND_TRUTH_TAG,
    INSTANCE_HEADER_FIELDS,
    SIGNAL_RECORD_FIELDS,
)
from .errors import InvalidInputError
from .graph import ComplexSignal, ConnectionGraph
from .ranking import ComparisonSet


class ParseError(InvalidInputError):
    """Raised when an input file is malformed."""

    def __init__(self, line_num: int, message: str):
        self.line_num = line_num
        super().__init__(f"Line {line_num}: {message}")


def iter_records(text: str) -> Iterator[tuple[int, list[str]]]:
    """(1-based line number, whitespace-split fields) for every data line."""
    for index, raw in enumerate(text.splitlines()):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIX):
            continue
        yield index + 1, line.split()


def iter_comments(text: str) -> Iterator[tuple[int, list[str]]]:
    for index, raw in enumerate(text.splitlines()):
        line = raw.strip()
        if line.startswith(COMMENT_PREFIX):
            yield index + 1, line[len(COMMENT_PREFIX):].split()


def _expect_fields(line_num: int, fields: list[str], count: int, what: str) -> None:
    if len(fields) != count:
        raise ParseError(line_num, f"{what} needs {count} fields, got {len(fields)}")


def _int(line_num: int, token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line_num, f"{what} must be an integer, got '{token}'") from None


def _float(line_num: int, token: str, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(line_num, f"{what} must be a number, got '{token}'") from None
    if not math.isfinite(value):
        raise ParseError(line_num, f"{what} must be finite, got '{token}'")
    return value


def parse_edge_list(text: str) -> ConnectionGraph:
    """Parse 'n_nodes n_edges' followed by 'u v weight theta' records.

    Raises ParseError on malformed input.
    """
    records = iter_records(text)
    try:
        line_num, header = next(records)
    except StopIteration:
        raise ParseError(1, "Empty edge list") from None
    _expect_fields(line_num, header, EDGE_LIST_HEADER_FIELDS, "Header")
    n_nodes = _int(line_num, header[0], "n_nodes")
    n_edges = _int(line_num, header[1], "n_edges")
    if n_nodes < 1 or n_edges < 0:
        raise ParseError(line_num, f"Invalid header sizes n_nodes={n_nodes}, n_edges={n_edges}")

    edges: list[tuple[int, int, float, float]] = []
    for line_num, fields in records:
        _expect_fields(line_num, fields, EDGE_RECORD_FIELDS, "Edge record")
        a = _int(line_num, fields[0], "u")
        b = _int(line_num, fields[1], "v")
        weight = _float(line_num, fields[2], "weight")
        theta = _float(line_num, fields[3], "theta")
        if not (0 <= a < n_nodes and 0 <= b < n_nodes):
            raise ParseError(line_num, f"Node id out of range [0, {n_nodes})")
        if a == b:
            raise ParseError(line_num, f"Self-loop on node {a}")
        if weight <= 0:
            raise ParseError(line_num, f"Weight must be positive, got {weight}")
        edges.append((a, b, weight, theta))

    if len(edges) != n_edges:
        raise ParseError(line_num, f"Header declares {n_edges} edges, found {len(edges)}")
    return ConnectionGraph.from_edges(n_nodes, edges)


def parse_signal(text: str, n_nodes: int) -> ComplexSignal:
    """Parse one 'node re im' line per node."""
    signal = np.zeros(n_nodes, dtype=np.complex128)
    seen: set[int] = set()
    for line_num, fields in iter_records(text):
        _expect_fields(line_num, fields, SIGNAL_RECORD_FIELDS, "Signal record")
        node = _int(line_num, fields[0], "node")
        if not 0 <= node < n_nodes:
            raise ParseError(line_num, f"Node id {node} out of range [0, {n_nodes})")
        if node in seen:
            raise ParseError(line_num, f"Node {node} listed twice")
        seen.add(node)
        signal[node] = complex(_float(line_num, fields[1], "re"), _float(line_num, fields[2], "im"))
    if len(seen) != n_nodes:
        missing = min(set(range(n_nodes)) - seen)
        raise ParseError(max(1, len(text.splitlines())), f"Signal has no value for node {missing}")
    return signal


def _ground_truth(text: str, n: int) -> np.ndarray | None:
    for line_num, fields in iter_comments(text):
        if fields and fields[0] == GROUND_TRUTH_TAG:
            if len(fields) != n + 1:
                raise ParseError(line_num, f"Ground truth needs {n} ranks, got {len(fields) - 1}")
            return np.array([_int(line_num, tok, "rank") for tok in fields[1:]], dtype=np.int64)
    return None


def parse_instance(text: str) -> ComparisonSet:
    """Parse 'n s p seed', an optional '# ground_truth ...' line and 'i j c' records.

    Without a ground-truth line the hidden ranking is regenerated from the seed.
    """
    records = iter_records(text)
    try:
        line_num, header = next(records)
    except StopIteration:
        raise ParseError(1, "Empty instance file") from None
    _expect_fields(line_num, header, INSTANCE_HEADER_FIELDS, "Header")
    n = _int(line_num, header[0], "n")
    s = _float(line_num, header[1], "s")
    p = _float(line_num, header[2], "p")
    seed = _int(line_num, header[3], "seed")
    if n < 2:
        raise ParseError(line_num, f"n must be >= 2, got {n}")

    pairs: list[tuple[int, int]] = []
    values: list[int] = []
    seen: set[tuple[int, int]] = set()
    for line_num, fields in records:
        _expect_fields(line_num, fields, COMPARISON_RECORD_FIELDS, "Comparison record")
        i = _int(line_num, fields[0], "i")
        j = _int(line_num, fields[1], "j")
        c = _int(line_num, fields[2], "c")
        if not 0 <= i < j < n:
            raise ParseError(line_num, f"Pair must satisfy 0 <= i < j < {n}, got ({i}, {j})")
        if c not in (-1, 1):
            raise ParseError(line_num, f"Comparison must be -1 or 1, got {c}")
        if (i, j) in seen:
            raise ParseError(line_num, f"Pair ({i}, {j}) listed twice")
        seen.add((i, j))
        pairs.append((i, j))
        values.append(c)

    ranks = _ground_truth(text, n)
    if ranks is None:
        ranks = np.random.default_rng(seed).permutation(n)
    return ComparisonSet(
        n=n,
        pairs=np.array(pairs, dtype=np.int64).reshape(-1, 2),
        c=np.array(values, dtype=np.int8),
        ground_truth=ranks,
        s=s,
        p=p,
        seed=seed,
    )
