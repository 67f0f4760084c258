"""Tests for text and CSV output."""

import csv
import io
import json

import numpy as np
import pytest

from mtsf.constants import CATALOG_COLUMNS, ESTIMATE_COLUMNS
from mtsf.estimators import EstimateResult, EstimatorKind
from mtsf.forest import build_mtsf
from mtsf.formatter import (
    format_catalog_csv,
    format_edge_list,
    format_estimate_csv,
    format_instance,
    format_rows,
    format_sample_dump,
    format_signal,
    sidecar_path,
    write_estimate,
)
from mtsf.oracle import enumerate_mtsfs
from mtsf.parser import parse_edge_list, parse_instance, parse_signal
from mtsf.ranking import generate_ero


def test_edge_list_survives_reparse(fixtures):
    g = fixtures["square_with_chord"].graph
    text = format_edge_list(g)
    assert text.splitlines()[0] == "4 5"
    again = parse_edge_list(text)
    assert again.edges == g.edges


def test_signal_survives_reparse():
    signal = np.array([0.1 + 0.2j, -3.0, 1e-17j])
    assert np.array_equal(parse_signal(format_signal(signal), 3), signal)


def test_instance_survives_reparse():
    cs = generate_ero(15, 0.4, 0.8, seed=2)
    text = format_instance(cs)
    assert text.splitlines()[1].startswith("# ground_truth ")
    again = parse_instance(text)
    assert np.array_equal(again.pairs, cs.pairs)
    assert np.array_equal(again.c, cs.c)
    assert np.array_equal(again.ground_truth, cs.ground_truth)


def test_sample_dump(triangle):
    g = triangle.graph
    samples = [build_mtsf(g, [0, 1], [2]), build_mtsf(g, [0, 1, 2], [])]
    lines = format_sample_dump(samples).splitlines()
    assert lines[0] == "sample 0"
    assert lines[1] == "tree root=2 edges=0,1"
    assert lines[2] == "sample 1"
    assert lines[3].startswith("unicycle cycle_phase=")
    assert lines[3].endswith("edges=0,1,2")


def test_format_rows_uses_round_trip_floats():
    text = format_rows(("a", "b"), [(1, 0.1), ("x", np.float64(1 / 3))])
    assert text == "a,b\n1,0.1\nx,0.3333333333333333\n"


def _result():
    return EstimateResult(
        estimate=np.array([complex(1.0, 2.0), complex(0.0, -0.5)]),
        per_node_sample_variance=np.array([0.25, 0.0]),
        m_used=10,
        estimator_kind=EstimatorKind.BAR,
        wall_time=0.5,
    )


def test_estimate_csv():
    rows = list(csv.reader(io.StringIO(format_estimate_csv(_result()))))
    assert tuple(rows[0]) == ESTIMATE_COLUMNS
    assert rows[1] == ["0", "1.0", "2.0", "0.25"]
    assert rows[2] == ["1", "0.0", "-0.5", "0.0"]


def test_write_estimate_with_sidecar(tmp_path):
    out = tmp_path / "estimate.csv"
    meta_path = write_estimate(out, _result(), {"q": 0.1, "seed": 4})
    assert meta_path == sidecar_path(out)
    assert meta_path.name == "estimate.csv.meta.json"
    meta = json.loads(meta_path.read_text())
    assert meta == {"q": 0.1, "seed": 4, "kind": "bar", "m": 10, "wall_time": 0.5}
    assert out.read_text().startswith("node,re_estimate")


def test_catalog_csv(triangle):
    catalog = enumerate_mtsfs(triangle.graph, triangle.q)
    rows = list(csv.DictReader(io.StringIO(format_catalog_csv(catalog))))
    assert len(rows) == len(catalog)
    assert tuple(rows[0]) == CATALOG_COLUMNS
    cycles = [row["cycles"] for row in rows if row["cycles"]]
    assert len(cycles) == 1
    assert cycles[0].startswith("0,1,2@")
    assert sum(float(row["probability"]) for row in rows) == pytest.approx(1.0)
