"""Write the canonical 80-scenario comparison suite to data/comparison_suite.txt."""

import argparse
from pathlib import Path

from paretoplan.scenario import canonical_suite, write_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=80)
    ap.add_argument("--terrains", type=int, default=8)
    ap.add_argument("--out", default=str(Path(__file__).parents[1] / "data" / "comparison_suite.txt"))
    args = ap.parse_args()
    specs = canonical_suite(args.count, args.terrains)
    Path(args.out).write_text(write_suite(specs))
    print(f"wrote {len(specs)} scenarios to {args.out}")


if __name__ == "__main__":
    main()
