"""Batch comparison of planners over seeded scenario suites."""

from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import costmodel
from .costmodel import LayerSet
from .planner import PlannerConfig, SearchResult, plan, warm_up
from .scenario import Scenario, ScenarioSpec, generate_scenario

CSV_FIELDS = ("kind", "suite", "scenario", "algorithm", "runs", "steps", "f1", "f2",
              "incidence", "expanded", "open_peak", "time_s")
TIMING_FIELDS = ("time_s",)


class SuiteFailure(RuntimeError):
    pass


@dataclass
class RunRow:
    scenario: int
    spec: str
    algorithm: str
    steps: int
    f1: float
    f2: float
    incidence: float | None
    expanded: int
    open_peak: int
    time_s: float


@dataclass
class AlgoSummary:
    algorithm: str
    runs: int
    steps: float
    f1: float
    f2: float
    incidence: float | None
    time_s: float


@dataclass
class BenchReport:
    suite: str
    rows: list[RunRow] = field(default_factory=list)

    @property
    def algorithms(self) -> list[str]:
        seen = []
        for r in self.rows:
            if r.algorithm not in seen:
                seen.append(r.algorithm)
        return seen

    def runs_for(self, algorithm: str) -> list[RunRow]:
        return [r for r in self.rows if r.algorithm == algorithm]

    def summary(self, algorithm: str) -> AlgoSummary:
        rows = self.runs_for(algorithm)
        if not rows:
            raise KeyError(algorithm)
        inc = [r.incidence for r in rows]
        return AlgoSummary(
            algorithm,
            len(rows),
            float(np.mean([r.steps for r in rows])),
            float(np.mean([r.f1 for r in rows])),
            float(np.mean([r.f2 for r in rows])),
            None if any(v is None for v in inc) else float(np.mean(inc)),
            float(np.mean([r.time_s for r in rows])),
        )

    def summaries(self) -> list[AlgoSummary]:
        return [self.summary(a) for a in self.algorithms]


def time_search(thunk: Callable[[], SearchResult]) -> tuple[float, SearchResult]:
    """Wall time of one planner call on the monotonic clock."""
    t0 = time.perf_counter()
    out = thunk()
    return time.perf_counter() - t0, out


def config_for(config: PlannerConfig, spec: ScenarioSpec) -> PlannerConfig:
    """Point a solar-enabled config at the scenario's own sun angle."""
    if config.layers.solar and spec.sun_angle is not None:
        return replace(config, layers=replace(config.layers, sun_angle=spec.sun_angle))
    return config


def run_scenario(index: int, scenario: Scenario, algorithms: Sequence[PlannerConfig],
                 results: dict | None = None) -> list[RunRow]:
    """Run each config once on ``scenario``; search results go into ``results`` if given."""
    spec = scenario.spec
    warm_up(algorithms)
    out = []
    for base in algorithms:
        cfg = config_for(base, spec)
        secs, res = time_search(lambda: plan(scenario.grid, spec.start, spec.goal, cfg))
        if res.path is None:
            raise SuiteFailure(f"{cfg.label} found no path on scenario {index} ({spec.to_line()})")
        problems = costmodel.validate_path(res.path.waypoints, scenario.grid, spec.start, spec.goal)
        if problems:
            raise SuiteFailure(f"{cfg.label} returned an invalid path on scenario {index}: {problems[0]}")
        if results is not None:
            results[cfg.algorithm] = res
        sun = cfg.layers.sun_angle if cfg.layers.solar else None
        inc = None if sun is None else costmodel.solar_incidence(res.path.waypoints, sun)
        out.append(RunRow(index, spec.to_line(), cfg.label, res.path.steps, res.path.f1,
                          res.path.f2, inc, res.expanded_count, res.open_list_peak, secs))
    return out


def _run_one(args):
    index, spec, algorithms = args
    return run_scenario(index, generate_scenario(spec), algorithms)


def threads_from_env(default: int = 1) -> int:
    raw = os.environ.get("PLANNER_THREADS")
    if raw is None:
        return default
    n = int(raw)
    if n < 1:
        raise ValueError(f"PLANNER_THREADS must be >= 1, got {n}")
    return n


def run_suite(suite: Sequence[ScenarioSpec | Scenario], algorithms: Sequence[PlannerConfig],
              name: str = "suite", workers: int = 1) -> BenchReport:
    """Plan every scenario with every algorithm.

    With ``workers > 1`` scenarios are spread over worker processes; each
    run is still timed inside its own process.  ``workers == 1`` is the
    sequential timing mode.
    """
    if not suite:
        raise SuiteFailure("empty suite")
    if not algorithms:
        raise SuiteFailure("no algorithms given")
    report = BenchReport(name)
    if workers > 1 and all(isinstance(s, ScenarioSpec) for s in suite):
        jobs = [(i, s, list(algorithms)) for i, s in enumerate(suite)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for rows in pool.map(_run_one, jobs):
                report.rows.extend(rows)
        return report
    for i, item in enumerate(suite):
        sc = item if isinstance(item, Scenario) else generate_scenario(item)
        report.rows.extend(run_scenario(i, sc, algorithms))
    return report


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def emit_csv(report: BenchReport, include_timing: bool = True) -> str:
    """Per-run rows followed by one ``mean`` row per algorithm."""
    if not report.rows:
        raise SuiteFailure("refusing to write a report with no runs")
    fields = [f for f in CSV_FIELDS if include_timing or f not in TIMING_FIELDS]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in report.rows:
        rec = dict(kind="run", suite=report.suite, scenario=r.scenario, algorithm=r.algorithm,
                   runs=1, steps=r.steps, f1=r.f1, f2=r.f2, incidence=r.incidence,
                   expanded=r.expanded, open_peak=r.open_peak, time_s=r.time_s)
        w.writerow([_fmt(rec[f]) for f in fields])
    for s in report.summaries():
        rec = dict(kind="mean", suite=report.suite, scenario="", algorithm=s.algorithm,
                   runs=s.runs, steps=s.steps, f1=s.f1, f2=s.f2, incidence=s.incidence,
                   expanded="", open_peak="", time_s=s.time_s)
        w.writerow([_fmt(rec[f]) for f in fields])
    return buf.getvalue()


def read_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def format_table(report: BenchReport) -> str:
    """Plain-text table in the layout of the comparison table."""
    lines = [f"{'algorithm':<12}{'steps':>9}{'F1':>10}{'F2':>8}{'solar':>8}{'time_s':>10}{'runs':>6}"]
    for s in report.summaries():
        inc = "n/a" if s.incidence is None else f"{s.incidence:.3f}"
        lines.append(f"{s.algorithm:<12}{s.steps:>9.2f}{s.f1:>10.3f}{s.f2:>8.3f}"
                     f"{inc:>8}{s.time_s:>10.4f}{s.runs:>6}")
    return "\n".join(lines)


def comparison_configs(solar_angle: float | None = None) -> list[PlannerConfig]:
    """The compared pair: normalised-sum A* and A*-PO, elevation on."""
    layers = LayerSet() if solar_angle is None else LayerSet(solar=True, sun_angle=solar_angle)
    return [PlannerConfig("astar_norm", layers), PlannerConfig("astar_po", layers)]
