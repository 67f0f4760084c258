"""Validate edge-list and instance files without building library objects."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import (
    COMPARISON_RECORD_FIELDS,
    EDGE_LIST_HEADER_FIELDS,
    EDGE_RECORD_FIELDS,
    HALF_PI,
    INSTANCE_HEADER_FIELDS,
)
from .parser import iter_records


@dataclass
class ValidationError:
    """A single validation issue."""
    line: int
    message: str
    severity: str = "error"  # "error" or "warning"

    def __str__(self) -> str:
        return f"[{self.severity.upper()}] Line {self.line}: {self.message}"


def _number(token: str) -> float | None:
    try:
        value = float(token)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def _integer(token: str) -> int | None:
    try:
        return int(token)
    except ValueError:
        return None


def validate_edge_list(text: str) -> list[ValidationError]:
    """Validate an edge list. Returns list of errors (empty = valid)."""
    errors: list[ValidationError] = []
    records = list(iter_records(text))
    if not records:
        return [ValidationError(1, "Empty edge list")]

    header_line, header = records[0]
    if len(header) != EDGE_LIST_HEADER_FIELDS:
        errors.append(ValidationError(
            header_line, f"Header needs {EDGE_LIST_HEADER_FIELDS} fields, got {len(header)}"
        ))
        return errors  # sizes unknown
    n_nodes, n_edges = _integer(header[0]), _integer(header[1])
    if n_nodes is None or n_edges is None or n_nodes < 1 or n_edges < 0:
        errors.append(ValidationError(header_line, f"Invalid header '{' '.join(header)}'"))
        return errors

    max_phase = 0.0
    for line_num, fields in records[1:]:
        if len(fields) != EDGE_RECORD_FIELDS:
            errors.append(ValidationError(
                line_num, f"Edge record needs {EDGE_RECORD_FIELDS} fields, got {len(fields)}"
            ))
            continue
        a, b = _integer(fields[0]), _integer(fields[1])
        weight, theta = _number(fields[2]), _number(fields[3])
        if a is None or b is None or not (0 <= a < n_nodes and 0 <= b < n_nodes):
            errors.append(ValidationError(line_num, f"Node ids must be integers in [0, {n_nodes})"))
        elif a == b:
            errors.append(ValidationError(line_num, f"Self-loop on node {a}"))
        if weight is None or weight <= 0:
            errors.append(ValidationError(line_num, f"Weight must be a positive number, got '{fields[2]}'"))
        if theta is None:
            errors.append(ValidationError(line_num, f"Theta must be a finite number, got '{fields[3]}'"))
        else:
            if abs(theta) > math.pi:
                errors.append(ValidationError(
                    line_num, f"Theta {theta} lies outside [-pi, pi]", severity="warning"
                ))
            max_phase = max(max_phase, abs(math.remainder(theta, 2 * math.pi)))

    if len(records) - 1 != n_edges:
        errors.append(ValidationError(
            header_line, f"Header declares {n_edges} edges, found {len(records) - 1}"
        ))
    if max_phase * n_nodes > HALF_PI * (1 + 1e-12):
        errors.append(ValidationError(
            header_line,
            "max |theta| * n_nodes exceeds pi/2; some cycle may have cos(theta_C) < 0",
            severity="warning",
        ))
    return errors


def validate_instance(text: str) -> list[ValidationError]:
    """Validate a ranking instance. Returns list of errors (empty = valid)."""
    errors: list[ValidationError] = []
    records = list(iter_records(text))
    if not records:
        return [ValidationError(1, "Empty instance file")]

    header_line, header = records[0]
    if len(header) != INSTANCE_HEADER_FIELDS:
        errors.append(ValidationError(
            header_line, f"Header needs {INSTANCE_HEADER_FIELDS} fields, got {len(header)}"
        ))
        return errors
    n, s, p, seed = _integer(header[0]), _number(header[1]), _number(header[2]), _integer(header[3])
    if n is None or n < 2:
        errors.append(ValidationError(header_line, f"n must be an integer >= 2, got '{header[0]}'"))
        return errors
    if s is None or not 0 < s <= 1:
        errors.append(ValidationError(header_line, f"s must be in (0, 1], got '{header[1]}'"))
    if p is None or not 0 <= p <= 1:
        errors.append(ValidationError(header_line, f"p must be in [0, 1], got '{header[2]}'"))
    if seed is None:
        errors.append(ValidationError(header_line, f"seed must be an integer, got '{header[3]}'"))

    seen: set[tuple[int, int]] = set()
    for line_num, fields in records[1:]:
        if len(fields) != COMPARISON_RECORD_FIELDS:
            errors.append(ValidationError(
                line_num, f"Comparison record needs {COMPARISON_RECORD_FIELDS} fields, got {len(fields)}"
            ))
            continue
        i, j, c = (_integer(tok) for tok in fields)
        if i is None or j is None or not 0 <= i < j < n:
            errors.append(ValidationError(line_num, f"Pair must satisfy 0 <= i < j < {n}"))
        elif (i, j) in seen:
            errors.append(ValidationError(line_num, f"Duplicate pair ({i}, {j})"))
        else:
            seen.add((i, j))
        if c not in (-1, 1):
            errors.append(ValidationError(line_num, f"Comparison must be -1 or 1, got '{fields[2]}'"))

    if not seen:
        errors.append(ValidationError(header_line, "No comparisons observed", severity="warning"))
    return errors


def is_valid(text: str, kind: str = "edges") -> bool:
    """Quick check: is this a valid edge list (or instance)?"""
    errors = validate_instance(text) if kind == "instance" else validate_edge_list(text)
    return not any(e.severity == "error" for e in errors)
