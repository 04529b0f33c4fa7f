"""W_{4,3} with the last lower parameter list [5/4, 7/12] instead of [5/4, 7/4].

The alternative list has negative parameter excess, so its 3F2 diverges at the
upper edge and the resulting curve dips below zero; the general construction
stays non-negative and reproduces the moments.
"""
from dataclasses import replace
from fractions import Fraction as F

import numpy as np

from fussraney.moments import moment_integrals
from fussraney.raney_density import build_raney_spec
from fussraney.special_functions import HyperGeomParams


def main():
    spec = build_raney_spec(4, 3)
    term = spec.terms[2]
    alt = HyperGeomParams(term.params.upper, (F(5, 4), F(7, 12)))
    variant = replace(spec, terms=spec.terms[:2] + (replace(term, params=alt),))
    print(f"general lower list {list(map(str, term.params.lower))}, excess {term.params.excess}")
    print(f"alternative list  {list(map(str, alt.lower))}, excess {alt.excess}")
    K = spec.support_upper
    x = np.linspace(0.5, 0.995 * K, 12)
    print(f"{'x':>8} {'general':>12} {'alternative':>12}")
    for xi, a, b in zip(x, spec(x), variant(x)):
        print(f"{xi:8.4f} {a:12.6f} {b:12.6f}")
    print("moments of the general form:", np.round(moment_integrals(spec, 4).value, 10).tolist())


if __name__ == "__main__":
    main()
