import json
import math
from pathlib import Path

import numpy as np
import pytest

import rcpm

FIXTURES = Path(__file__).resolve().parents[2] / "tests" / "fixtures"


def test_load_and_profile_fixture():
    log = rcpm.load_event_log(str(FIXTURES / "tiny.csv"), "csv")
    assert len(log) == 80
    assert log.dropped_event_count == 1
    assert log.activity_alphabet == ["A", "B", "C", "D"]
    p = rcpm.profile(log)
    assert p["resources"] == 12
    assert p["avg_sequence_length_per_resource"] == pytest.approx(80 / 12)


def test_xes_with_joined_activity_keys():
    log = rcpm.load_event_log(str(FIXTURES / "tiny.xes"), activity_keys=["concept:name", "lifecycle:transition"])
    assert "Accepted+In Progress" in log.activity_alphabet
    assert rcpm.case_view(log)["case-1"] == ["Accepted+In Progress", "Queued+Awaiting Assignment"]


def test_metrics():
    assert rcpm.specialization(["A", "A", "B", "B"], 4) == pytest.approx(0.5)
    assert rcpm.repetition(["A", "A", "B", "B", "B"]) == pytest.approx(1.5)
    assert rcpm.run_features([0, 0, 1, 1, 1, 0]) == (3, 2.0)
    assert rcpm.count_2grams([0, 1, 0, 1]) == {(0, 1): 2, (1, 0): 1}
    assert rcpm.mutual_information([0, 1, 0, 1], [0, 1, 0, 1]) == pytest.approx(math.log(2))


def test_encode_shapes():
    log = rcpm.synthetic_run_log(60, 2)
    names, x, y = rcpm.encode(log, 10, "S2gR", 5)
    assert isinstance(x, np.ndarray)
    assert x.shape == (60, len(names))
    assert len(y) == 60
    assert names[-2:] == ["n_runs", "avg_run_length"]
    np.testing.assert_allclose(x[:, -2] * x[:, -1], 10.0)


def test_run_experiment_and_errors():
    log = rcpm.synthetic_run_log(150, 3)
    body = '"experiment": {"prefix_lengths": [5], "min_resources": 50, "encodings": ["SeqOnly", "S2gR"], ' \
           '"models": ["majority", "forest"], "grids": {"forest": {"n_estimators": [10]}}}, "seed": 9'
    records = rcpm.run_experiment(log, body, "synthetic")
    assert len(records) == 4
    assert all(not r["failed"] for r in records)
    assert records == [dict(r, wall_time_seconds=o["wall_time_seconds"])
                       for r, o in zip(rcpm.run_experiment(log, body, "synthetic"), records)]
    with pytest.raises(rcpm.ConfigError):
        rcpm.run_experiment(log, '"experiment": {"encodings": ["nope"]}')
    with pytest.raises(rcpm.ParseError):
        rcpm.parse_xes("<log><trace>")


def test_cli_entry_point(tmp_path):
    cfg = {"datasets": [{"id": "tiny", "path": str(FIXTURES / "tiny.csv"), "format": "csv", "min_resources": 6,
                         "prefix_lengths": [3, 5]}]}
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    code, out, err = rcpm.run_cli(["grid", "--config", str(path)])
    assert code == 0, err
    assert "admissible: 3 5" in out
