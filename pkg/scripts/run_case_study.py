"""The 100x100 rover case study at sun angles 70 and 250 degrees.

Plans with both planners, prints the table and writes the map, CSV report,
path files and an SVG with the two A*-PO paths to ``--out-dir``.
``--export-dem`` also saves the synthetic terrain as a DEM text file.
"""

import argparse
from pathlib import Path

from paretoplan.cli import main as cli_main
from paretoplan.scenario import format_dem, synthetic_mars_dem


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="case_study")
    ap.add_argument("--algos", default="astar-norm,astar-po")
    ap.add_argument("--export-dem", help="write the synthetic DEM here")
    args = ap.parse_args()
    if args.export_dem:
        Path(args.export_dem).write_text(format_dem(synthetic_mars_dem()))
    raise SystemExit(cli_main(["case-study", "--sun", "70,250", "--algos", args.algos,
                               "--out-dir", args.out_dir]))


if __name__ == "__main__":
    main()
