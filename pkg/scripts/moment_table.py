"""Quadrature moments of every probability density against the exact integers."""
import argparse

from fussraney.fc_density import build_fc_spec
from fussraney.moments import verify_moments
from fussraney.raney_density import build_raney_spec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=8)
    args = ap.parse_args()
    specs = [build_fc_spec(s) for s in range(1, 7)]
    specs += [build_raney_spec(p, r) for p in range(2, 6) for r in range(1, p + 1)]
    print(f"{'density':>8} {'n':>3} {'exact':>14} {'numeric':>24} {'rel err':>9}")
    for spec in specs:
        report = verify_moments(spec, args.n_max, 1e-7)
        for row in report.rows:
            print(f"{spec.label:>8} {row.n:>3} {row.exact_moment:>14} {row.numeric_moment:>24.17g} {row.rel_error:>9.1e}")
        print(f"{spec.label:>8} max rel err {report.max_rel_error:.2e}\n")


if __name__ == "__main__":
    main()
