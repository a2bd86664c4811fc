import time

import numpy as np
import pytest

from paretoplan.bench import (
    BenchReport,
    RunRow,
    SuiteFailure,
    comparison_configs,
    config_for,
    emit_csv,
    format_table,
    read_csv,
    run_suite,
    threads_from_env,
    time_search,
)
from paretoplan.costmodel import LayerSet
from paretoplan.gridworld import Coord, GridMap
from paretoplan.planner import PlannerConfig, plan_astar
from paretoplan.scenario import Scenario, ScenarioSpec, canonical_suite


def tiny_scenario():
    spec = ScenarioSpec(3, 3, 0.0)
    return Scenario(spec, GridMap.empty(3, 3), 1)


@pytest.fixture(scope="module")
def small_report():
    return run_suite(canonical_suite(count=4, terrains=2), comparison_configs(), name="small")


class TestRunSuite:
    def test_single_trivial_map(self):
        report = run_suite([tiny_scenario()], comparison_configs())
        assert len(report.rows) == 2
        for s in report.summaries():
            (row,) = report.runs_for(s.algorithm)
            assert (s.runs, s.steps, s.f1, s.f2) == (1, row.steps, row.f1, row.f2)
            assert s.steps == 2

    def test_rows_and_means(self, small_report):
        assert small_report.algorithms == ["astar-norm", "astar-po"]
        for s in small_report.summaries():
            rows = small_report.runs_for(s.algorithm)
            assert s.runs == len(rows) == 4
            assert s.f1 == pytest.approx(np.mean([r.f1 for r in rows]), abs=1e-9)
            assert s.f2 == pytest.approx(np.mean([r.f2 for r in rows]), abs=1e-9)
            assert s.incidence is None

    def test_repeatable_except_time(self, small_report):
        again = run_suite(canonical_suite(count=4, terrains=2), comparison_configs(), name="small")
        assert emit_csv(again, include_timing=False) == emit_csv(small_report, include_timing=False)

    def test_empty_suite(self):
        with pytest.raises(SuiteFailure):
            run_suite([], comparison_configs())
        with pytest.raises(SuiteFailure):
            run_suite([tiny_scenario()], [])

    def test_unsolvable_scenario(self):
        grid = GridMap.from_rows(["..#..", "..#..", "..#.."])
        sc = Scenario(ScenarioSpec(5, 3, 0.0), grid, 1)
        with pytest.raises(SuiteFailure, match="scenario 0"):
            run_suite([sc], comparison_configs())

    def test_solar_incidence_recorded(self):
        spec = ScenarioSpec(8, 8, 0.1, sun_angle=70.0)
        report = run_suite([spec], comparison_configs(solar_angle=10.0))
        for r in report.rows:
            assert r.incidence is not None and 0.0 <= r.incidence <= 1.0

    def test_workers_match_sequential(self):
        suite = canonical_suite(count=3, terrains=3)
        a = run_suite(suite, comparison_configs(), workers=2)
        b = run_suite(suite, comparison_configs(), workers=1)
        assert emit_csv(a, include_timing=False) == emit_csv(b, include_timing=False)


class TestCsv:
    def test_layout(self, small_report):
        text = emit_csv(small_report)
        lines = text.splitlines()
        assert lines[0].split(",")[0] == "kind"
        assert len(lines) == 1 + 8 + 2
        assert "time_s" not in emit_csv(small_report, include_timing=False).splitlines()[0]

    def test_two_runs(self):
        rows = [RunRow(i, "x", "astar-po", 3 + i, 3.5, 0.25, None, 10, 4, 0.01) for i in range(2)]
        recs = read_csv(emit_csv(BenchReport("t", rows)))
        assert [r["kind"] for r in recs] == ["run", "run", "mean"]
        assert recs[2]["steps"] == "3.500000"
        assert recs[0]["incidence"] == ""

    def test_round_trip_means(self, small_report):
        recs = read_csv(emit_csv(small_report))
        for algo in small_report.algorithms:
            runs = [r for r in recs if r["kind"] == "run" and r["algorithm"] == algo]
            (mean,) = [r for r in recs if r["kind"] == "mean" and r["algorithm"] == algo]
            for col in ("steps", "f1", "f2"):
                assert float(mean[col]) == pytest.approx(np.mean([float(r[col]) for r in runs]), abs=1e-5)
            assert all(int(r["steps"]) == r_steps for r, r_steps in
                       zip(runs, [x.steps for x in small_report.runs_for(algo)]))

    def test_empty_report(self):
        with pytest.raises(SuiteFailure):
            emit_csv(BenchReport("empty"))

    def test_table(self, small_report):
        table = format_table(small_report)
        assert len(table.splitlines()) == 3
        assert "n/a" in table


class TestTiming:
    def test_noop(self):
        secs, out = time_search(lambda: None)
        assert out is None
        assert 0.0 <= secs < 1e-3

    def test_measures_sleep(self):
        secs, _ = time_search(lambda: time.sleep(0.02))
        assert secs >= 0.019

    def test_astar_empty_map(self):
        secs, res = time_search(lambda: plan_astar(GridMap.empty(20, 18), Coord(0, 0), Coord(19, 17)))
        assert res.path is not None
        print(f"A* on an empty 20x18 map: {secs * 1e3:.3f} ms")

    def test_threads_env(self, monkeypatch):
        monkeypatch.delenv("PLANNER_THREADS", raising=False)
        assert threads_from_env(3) == 3
        monkeypatch.setenv("PLANNER_THREADS", "2")
        assert threads_from_env() == 2
        monkeypatch.setenv("PLANNER_THREADS", "0")
        with pytest.raises(ValueError):
            threads_from_env()


def test_config_for_uses_scenario_sun():
    cfg = PlannerConfig("astar_po", LayerSet(solar=True, sun_angle=10.0))
    got = config_for(cfg, ScenarioSpec(sun_angle=250.0))
    assert got.layers.sun_angle == 250.0
    plain = PlannerConfig("astar_po")
    assert config_for(plain, ScenarioSpec(sun_angle=250.0)) is plain
