"""Run configuration: built-in defaults, an optional JSON file, then CLI flags."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any

from .constants import (
    DEFAULT_DELTA,
    DEFAULT_K,
    DEFAULT_M,
    DEFAULT_N,
    DEFAULT_P,
    DEFAULT_Q,
    DEFAULT_S,
    DEFAULT_SEEDS,
)
from .errors import InvalidInputError
from .estimators import EstimatorKind
from .linalg import EXACT, MODES


@dataclass(frozen=True)
class RunConfig:
    n: int = DEFAULT_N
    s: float = DEFAULT_S
    p: float = DEFAULT_P
    q: float = DEFAULT_Q
    delta: float = DEFAULT_DELTA
    m: int = DEFAULT_M
    k: int = DEFAULT_K
    seed: int = 0
    seeds: int = DEFAULT_SEEDS
    kind: str = EstimatorKind.HAT.value
    mode: str = EXACT
    fresh_samples: bool = True
    workers: int = 1
    repeats: int = 100

    def validate(self) -> list[str]:
        """Every out-of-range field (empty = valid)."""
        problems = []
        if self.n < 2:
            problems.append(f"n must be >= 2, got {self.n}")
        if not 0 < self.s <= 1:
            problems.append(f"s must be in (0, 1], got {self.s}")
        if not 0 <= self.p <= 1:
            problems.append(f"p must be in [0, 1], got {self.p}")
        if not self.q > 0:
            problems.append(f"q must be positive, got {self.q}")
        if not 0 < self.delta < 1:
            problems.append(f"delta must be in (0, 1), got {self.delta}")
        for name in ("m", "k", "seeds", "workers", "repeats"):
            if getattr(self, name) < 1:
                problems.append(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.kind not in {k.value for k in EstimatorKind}:
            problems.append(f"kind must be one of tilde, bar, hat, got {self.kind!r}")
        if self.mode not in MODES:
            problems.append(f"mode must be one of {', '.join(MODES)}, got {self.mode!r}")
        return problems

    def checked(self) -> RunConfig:
        problems = self.validate()
        if problems:
            raise InvalidInputError("; ".join(problems))
        return self

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


FIELD_NAMES = frozenset(f.name for f in fields(RunConfig))


def load_config_file(path: Path) -> dict[str, Any]:
    """Load a JSON object of RunConfig overrides; unknown keys are rejected."""
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise InvalidInputError(f"{path}: expected a JSON object")
    unknown = sorted(set(data) - FIELD_NAMES)
    if unknown:
        raise InvalidInputError(f"{path}: unknown config keys {', '.join(unknown)}")
    return data


def merge_config(base: RunConfig, *overrides: dict[str, Any]) -> RunConfig:
    """Apply override maps in order; None values leave the field unchanged."""
    merged = base
    for override in overrides:
        merged = replace(merged, **{k: v for k, v in override.items() if v is not None and k in FIELD_NAMES})
    return merged
