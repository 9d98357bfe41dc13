#!/usr/bin/env python3
"""
Tests for the tracking benchmark harness
"""

import json

import pytest

from benchmark_tracking import REFERENCE_RT, BenchReport, TrackingBenchmark, format_table, main
from pauli_tracking.circuit import GateKind


def test_run_point_counts(tmp_path):
    bench = TrackingBenchmark(str(tmp_path))
    row = bench.run_point(100, 1000, seed=7, repeats=2)
    assert row.tracking_time >= 0
    assert row.corrections_with_tracking <= row.n
    assert row.expected_corrections_without == 0.5 * row.m4 + 0.75 * row.m8
    assert row.reference_time == REFERENCE_RT[(100, 1000)]


def test_many_gates_per_qubit_reduce_corrections(tmp_path):
    bench = TrackingBenchmark(str(tmp_path))
    weights = {GateKind.CNOT: 1.0, GateKind.RX4: 2.0, GateKind.RZ4: 2.0, GateKind.RZ8: 2.0}
    for n in (20, 50):
        row = bench.run_point(n, 12 * n, seed=3, repeats=1, weights=weights)
        assert row.corrections_with_tracking <= n
        assert row.expected_corrections_without >= 5 * n


def test_largest_row_is_fast(tmp_path):
    row = TrackingBenchmark(str(tmp_path)).run_point(5100, 50000, seed=7, repeats=1)
    assert row.tracking_time < 1.0
    assert row.reference_time == 5.435


def test_run_time_grows_roughly_linearly(tmp_path):
    m_list = [1000, 5000, 10000, 20000, 50000]
    report = TrackingBenchmark(str(tmp_path)).run([100], m_list, seed=7, repeats=7, verbose=False)
    times = [r.tracking_time for r in report.rows]
    assert [r.m for r in report.rows] == m_list
    for i in range(1, len(m_list)):
        assert times[i] / times[i - 1] <= 2 * m_list[i] / m_list[i - 1]
    assert report.growth(100) <= 2 * 50


def test_growth_needs_two_points():
    report = BenchReport(seed=0, repeats=1, timestamp="")
    assert report.growth(100) is None


def test_results_files(tmp_path, capsys):
    bench = TrackingBenchmark(str(tmp_path))
    report = bench.run([10], [100, 200], seed=1, repeats=1, verbose=False)
    bench.save_results(report)
    text = bench.generate_report(report)

    saved = json.loads((tmp_path / "bench_results.json").read_text())
    assert saved["seed"] == 1
    assert [r["m"] for r in saved["rows"]] == [100, 200]
    assert "| 10 | 100 |" in text
    assert (tmp_path / "bench_report.md").read_text() == text
    assert "💾" in capsys.readouterr().out


def test_format_table_lists_rows(tmp_path):
    report = TrackingBenchmark(str(tmp_path)).run([100], [1000], seed=2, repeats=1, verbose=False)
    lines = format_table(report).splitlines()
    assert len(lines) == 3
    assert lines[2].split()[:2] == ["100", "1000"]
    assert lines[2].split()[3] == "0.000"


def test_main_without_saving(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("PAULI_RESULTS_DIR", str(tmp_path / "unused"))
    assert main(["--n-list", "5", "--m-list", "50", "--repeats", "1", "--no-save"]) == 0
    assert "🚀" in capsys.readouterr().out
    assert not (tmp_path / "unused").exists()


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
