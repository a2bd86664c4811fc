"""Command-line entry point: ``paretoplan {plan,gen,bench,case-study,render}``.

Coordinates are zero-based ``x,y`` (column, row) as in the map files.  Sun
angles are degrees counter-clockwise from east (+x).

Exit codes: 0 success, 1 no path found, 2 usage or input error,
3 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path as FsPath

from . import bench, planner, render, scenario
from .costmodel import LayerSet
from .gridworld import Coord, MapError, load_map, save_map
from .planner import PlannerConfig

EXIT_OK, EXIT_NO_PATH, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
ALGO_CHOICES = ("astar", "astar-norm", "astar-po")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _algo(name: str) -> str:
    return name.replace("-", "_")


def _read(path: str) -> str:
    try:
        return FsPath(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    p = FsPath(path)
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")


def _layers(args, algo: str) -> LayerSet:
    if args.layers is None:
        text = "dist,heur" if algo == "astar" else "dist,heur,elev"
        if args.sun is not None and algo != "astar":
            text += ",solar"
    else:
        text = args.layers
    try:
        return LayerSet.parse(text, args.sun)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _summary_line(res: planner.SearchResult, algo: str) -> str:
    p = res.path
    f3 = "n/a" if p.f3 is None else f"{p.f3:.6f}"
    return (f"{algo}: steps={p.steps} F1={p.f1:.6f} F2={p.f2:.6f} F3={f3} "
            f"expanded={res.expanded_count} time={res.elapsed:.4f}s")


def cmd_plan(args) -> int:
    grid = _parse_map(_read(args.map))
    algo = _algo(args.algo)
    layers = _layers(args, algo)
    try:
        cfg = PlannerConfig(algo, layers, diagnostic=args.diag is not None)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    start = args.start or Coord(0, 0)
    goal = args.goal or Coord(grid.width - 1, grid.height - 1)
    try:
        res = planner.plan(grid, start, goal, cfg)
    except planner.InvalidQuery as exc:
        raise UsageError(str(exc)) from None
    if args.diag is not None:
        with open(args.diag, "w", encoding="utf-8") as fh:
            planner.write_expansion_log(res.expansion_log, fh)
    if res.path is None:
        print(f"{args.algo}: no path from {start} to {goal}", file=sys.stderr)
        return EXIT_NO_PATH
    if args.out:
        _write(args.out, render.write_path_csv(res.path, grid))
    if args.svg:
        _write(args.svg, render.render_svg(grid, [res.path.waypoints], args.contours))
    print(_summary_line(res, args.algo))
    return EXIT_OK


def _parse_map(text: str):
    try:
        return load_map(text)
    except MapError as exc:
        raise UsageError(f"bad map: {exc}") from None


def cmd_gen(args) -> int:
    try:
        specs = [
            scenario.ScenarioSpec(
                args.width, args.height, args.obstacles,
                terrain_seed=(args.terrain_seed - 1 + i) % args.terrains + 1,
                obstacle_seed=args.obstacle_seed + i,
            )
            for i in range(args.count)
        ]
    except scenario.ScenarioError as exc:
        raise UsageError(str(exc)) from None
    out = FsPath(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, spec in enumerate(specs):
        grid = scenario.generate_environment(spec)
        _write(str(out / f"map_{i:03d}.txt"), save_map(grid))
    _write(str(out / "suite.txt"), scenario.write_suite(specs))
    print(f"wrote {len(specs)} map(s) and suite.txt to {out}")
    return EXIT_OK


def _algo_list(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    bad = [n for n in names if n not in ALGO_CHOICES]
    if bad or not names:
        raise UsageError(f"unknown algorithm(s): {', '.join(bad) or '(none)'}")
    return [_algo(n) for n in names]


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    try:
        return bench.threads_from_env()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_bench(args) -> int:
    if args.suite:
        try:
            suite = scenario.read_suite(_read(args.suite))
        except scenario.ScenarioError as exc:
            raise UsageError(str(exc)) from None
        name = FsPath(args.suite).stem
    else:
        suite = scenario.canonical_suite()
        name = "canonical80"
    configs = []
    for a in _algo_list(args.algos):
        layers = LayerSet.distance_only() if a == "astar" else LayerSet()
        configs.append(PlannerConfig(a, layers))
    report = bench.run_suite(suite, configs, name=name, workers=_workers(args))
    if args.out:
        _write(args.out, bench.emit_csv(report, include_timing=not args.no_timing))
    print(bench.format_table(report))
    return EXIT_OK


def run_case_study(dem, sun_angles, obstacle_seed: int, algos: list[str]):
    """Plan the case study for each sun angle; returns (scenarios, report, results)."""
    report = bench.BenchReport("mars")
    results = {}
    scenarios = []
    for k, sun in enumerate(sun_angles):
        sc = scenario.mars_case_study(dem, sun, obstacle_seed)
        scenarios.append(sc)
        configs = [PlannerConfig(a, LayerSet(solar=True, sun_angle=sun)) for a in algos]
        found = {}
        report.rows.extend(bench.run_scenario(k, sc, configs, found))
        for algo, res in found.items():
            results[(sun, algo)] = res
    return scenarios, report, results


def cmd_case_study(args) -> int:
    if args.dem:
        try:
            dem = scenario.import_dem(_read(args.dem), scenario.MARS_SIZE, scenario.MARS_SIZE)
        except scenario.DemParseError as exc:
            raise UsageError(f"bad DEM: {exc}") from None
    else:
        dem = scenario.synthetic_mars_dem()
    try:
        suns = [float(v) for v in args.sun.split(",")]
        scens, report, results = run_case_study(dem, suns, args.obstacle_seed, _algo_list(args.algos))
    except (ValueError, scenario.ScenarioError) as exc:
        raise UsageError(str(exc)) from None
    out = FsPath(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write(str(out / "map.txt"), save_map(scens[0].grid))
    _write(str(out / "report.csv"), bench.emit_csv(report, include_timing=not args.no_timing))
    po_paths = []
    for (sun, algo), res in results.items():
        _write(str(out / f"path_{algo}_{sun:g}.csv"), render.write_path_csv(res.path, scens[0].grid))
        if algo == "astar_po":
            po_paths.append((sun, res.path.waypoints))
    if po_paths:
        svg = render.render_svg(scens[0].grid, [p for _, p in po_paths], args.contours,
                                labels=[f"sun {s:g} deg" for s, _ in po_paths])
        _write(str(out / "case_study.svg"), svg)
    print(bench.format_table(report))
    return EXIT_OK


def cmd_render(args) -> int:
    grid = _parse_map(_read(args.map))
    try:
        paths = [render.read_path_csv(_read(p)) for p in args.path]
        svg = render.render_svg(grid, paths, args.contours)
    except (render.PathFileError, MapError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    _write(args.svg, svg)
    return EXIT_OK


def _coord(text: str) -> Coord:
    try:
        return Coord.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="paretoplan", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("plan", help="plan one path on a map file")
    sp.add_argument("--map", required=True)
    sp.add_argument("--algo", required=True, choices=ALGO_CHOICES)
    sp.add_argument("--layers", help="comma list from dist,heur,elev,solar")
    sp.add_argument("--sun", type=float, help="sun angle, degrees CCW from east")
    sp.add_argument("--start", type=_coord, help="x,y (default 0,0)")
    sp.add_argument("--goal", type=_coord, help="x,y (default lower-right corner)")
    sp.add_argument("--out", help="waypoint CSV (x,y,elevation,g)")
    sp.add_argument("--svg")
    sp.add_argument("--contours", type=int, default=8)
    sp.add_argument("--diag", help="write the expansion log (JSON lines)")
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("gen", help="generate seeded map files")
    sp.add_argument("--width", type=int, default=20)
    sp.add_argument("--height", type=int, default=18)
    sp.add_argument("--obstacles", type=float, default=0.20, help="occupied fraction")
    sp.add_argument("--terrain-seed", type=int, default=1)
    sp.add_argument("--obstacle-seed", type=int, default=1)
    sp.add_argument("--terrains", type=int, default=8, help="terrain seeds cycle through 1..N")
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("bench", help="compare planners over a scenario suite")
    sp.add_argument("--suite", help="suite file, one scenario per line (default: canonical 80)")
    sp.add_argument("--algos", default="astar-norm,astar-po")
    sp.add_argument("--out", help="report CSV")
    sp.add_argument("--no-timing", action="store_true", help="omit timing columns")
    sp.add_argument("--workers", type=int, help="worker processes (default $PLANNER_THREADS or 1)")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("case-study", help="100x100 rover scenario with the solar layer")
    sp.add_argument("--dem", help="DEM text file (default: built-in synthetic terrain)")
    sp.add_argument("--sun", default="70,250", help="comma list of sun angles")
    sp.add_argument("--obstacle-seed", type=int, default=1)
    sp.add_argument("--algos", default="astar-norm,astar-po")
    sp.add_argument("--contours", type=int, default=8)
    sp.add_argument("--no-timing", action="store_true")
    sp.add_argument("--out-dir", default="case_study")
    sp.set_defaults(func=cmd_case_study)

    sp = sub.add_parser("render", help="draw paths over a map as SVG")
    sp.add_argument("--map", required=True)
    sp.add_argument("--path", required=True, action="append", help="path CSV; repeatable")
    sp.add_argument("--svg", required=True)
    sp.add_argument("--contours", type=int, default=8)
    sp.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except bench.SuiteFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_PATH
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
