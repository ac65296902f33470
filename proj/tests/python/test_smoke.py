import os
from pathlib import Path

import pytest

import tramflow

DATA = Path(os.environ.get("TRAMFLOW_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def test_load_toy_line():
    m = tramflow.load_model(str(DATA / "toy-line" / "config.json"))
    assert m.name == "toy-line"
    assert m.stops == ["s0", "s1", "s2", "s3", "s4"]
    assert m.horizon == 70.0
    assert tramflow.validate(m) == []


def test_mutated_junction_is_rejected():
    m = tramflow.load_network(str(DATA / "example-2-1" / "network-mutated.json"))
    found = tramflow.validate(m)
    assert len(found) == 6
    assert sorted(v["time"] for v in found) == [4.0, 14.0, 24.0, 34.0, 44.0, 54.0]
    assert {v["rule"] for v in found} == {"injectivity-except-empty-set"}


def test_simulate_is_reproducible():
    m = tramflow.load_model(str(DATA / "toy-line" / "config.json"))
    a = tramflow.simulate(m, runs=20, seed=3, threads=1)
    b = tramflow.simulate(m, runs=20, seed=3, threads=2)
    assert a == b
    res = a["entries"][0]["results"]
    assert res["runs"] == 20
    assert res["valid"]
    assert res["metrics"]["waiting_time_h"]["p20"] <= res["metrics"]["waiting_time_h"]["p80"]


def test_scalar_helpers():
    assert tramflow.dwell_delay(60, 40) == pytest.approx(1.0)
    assert tramflow.dwell_delay(60, 40, mode="paper") == 0.0
    assert tramflow.capacity_utilization(114, 114) == 1.0
    assert tramflow.capacity_utilization(5, 0) is None
    times = tramflow.sample_arrivals([1.0] * 24, 120.0, seed=1)
    assert times == sorted(times)
    assert all(0 <= t <= 120 for t in times)


def test_bad_input_raises():
    with pytest.raises(tramflow.ConfigError):
        tramflow.load_model("/nonexistent/config.json")
    with pytest.raises(tramflow.ConfigError):
        tramflow.sample_arrivals([1.0] * 3, 10.0, seed=0)


def test_cli_entry_point(tmp_path):
    code, out, _ = tramflow.run_cli(["validate", str(DATA / "example-2-1" / "network.json")])
    assert code == 0
    code, _, _ = tramflow.run_cli(
        ["simulate", str(DATA / "toy-line" / "config.json"), "--runs", "3", "--out", str(tmp_path)]
    )
    assert code == 0
    assert (tmp_path / "report.json").exists()
