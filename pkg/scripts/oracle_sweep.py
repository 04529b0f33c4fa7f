"""Oracle accuracy as a function of output grid size."""
import argparse

from fussraney.fc_density import build_fc_spec
from fussraney.mellin import compare_oracle
from fussraney.raney_density import build_raney_spec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grids", type=int, nargs="+", default=[512, 1024, 2048, 4096])
    args = ap.parse_args()
    specs = [build_fc_spec(s) for s in range(1, 5)]
    specs += [build_raney_spec(p, r) for p in range(2, 5) for r in range(1, p + 1)]
    print("density " + " ".join(f"{g:>10}" for g in args.grids))
    for spec in specs:
        errs = [compare_oracle(spec, grid_size=g).rel_l1 for g in args.grids]
        print(f"{spec.label:>7} " + " ".join(f"{e:>10.2e}" for e in errs))


if __name__ == "__main__":
    main()
