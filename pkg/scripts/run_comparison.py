"""Run A*-norm and A*-PO over the comparison suite and print the mean table.

Also reports the per-map breakdown of which planner found the lower
average elevation, and writes the CSV report when ``--out`` is given.
"""

import argparse
from pathlib import Path

from paretoplan.bench import comparison_configs, emit_csv, format_table, run_suite
from paretoplan.planner import warm_up
from paretoplan.scenario import read_suite

SUITE = Path(__file__).parents[1] / "data" / "comparison_suite.txt"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", default=str(SUITE))
    ap.add_argument("--out", help="CSV report path")
    ap.add_argument("--no-timing", action="store_true")
    args = ap.parse_args()

    configs = comparison_configs()
    warm_up(configs)
    report = run_suite(read_suite(Path(args.suite).read_text()), configs, name=Path(args.suite).stem)
    print(format_table(report))

    norm, po = report.runs_for("astar-norm"), report.runs_for("astar-po")
    lower = sum(p.f2 < n.f2 for n, p in zip(norm, po))
    higher = sum(p.f2 > n.f2 for n, p in zip(norm, po))
    print(f"\nper map F2: A*-PO lower on {lower}, higher on {higher}, "
          f"equal on {len(po) - lower - higher}")
    ratio = report.summary("astar-po").time_s / report.summary("astar-norm").time_s
    print(f"time ratio A*-PO / A*-norm: {ratio:.3f}")
    if args.out:
        Path(args.out).write_text(emit_csv(report, include_timing=not args.no_timing))


if __name__ == "__main__":
    main()
