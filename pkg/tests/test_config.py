"""Tests for run configuration layering."""

import json

import pytest

from mtsf.config import FIELD_NAMES, RunConfig, load_config_file, merge_config
from mtsf.errors import InvalidInputError


def test_defaults_are_valid():
    cfg = RunConfig()
    assert cfg.validate() == []
    assert (cfg.n, cfg.s, cfg.p, cfg.q, cfg.delta, cfg.m, cfg.k, cfg.seeds) == (
        300, 0.8, 0.9, 0.1, 0.25, 5, 10, 20,
    )
    assert cfg.kind == "hat" and cfg.mode == "exact"
    assert set(cfg.to_dict()) == FIELD_NAMES


def test_validate_lists_every_problem():
    cfg = RunConfig(n=1, s=0.0, q=-1.0, delta=1.0, m=0, kind="median", mode="lanczos")
    problems = cfg.validate()
    assert len(problems) == 7
    with pytest.raises(InvalidInputError, match="n must be >= 2"):
        cfg.checked()


def test_merge_precedence(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"q": 0.5, "k": 20, "seed": 3}))
    file_values = load_config_file(path)
    flags = {"q": None, "k": 7, "command": "rank"}
    cfg = merge_config(RunConfig(), file_values, flags)
    assert cfg.q == 0.5
    assert cfg.k == 7
    assert cfg.seed == 3
    assert cfg.n == 300


@pytest.mark.parametrize("content, message", [
    ("{not json", "invalid JSON"),
    ("[1, 2]", "JSON object"),
    ('{"q": 0.1, "colour": "red"}', "unknown config keys colour"),
])
def test_bad_config_files(tmp_path, content, message):
    path = tmp_path / "run.json"
    path.write_text(content)
    with pytest.raises(InvalidInputError, match=message):
        load_config_file(path)
