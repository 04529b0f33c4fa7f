"""Write the curve data of every density figure to CSV files."""
import argparse
import csv
from pathlib import Path

from fussraney.figures import FIGURES, MIN_POINTS, figure_curves


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=Path("figures"))
    ap.add_argument("--points", type=int, default=MIN_POINTS)
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for fig in FIGURES:
        path = args.out_dir / f"{fig}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["curve", "x", "density", "is_probability"])
            for c in figure_curves(fig, args.points):
                w.writerows((c.name, f"{x:.17g}", f"{y:.17g}", str(c.is_probability).lower()) for x, y in zip(c.x, c.density))
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
