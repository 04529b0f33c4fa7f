"""Batteries of checks shared by the ``selftest`` and ``verify-all`` commands."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from .combinatorics import check_raney_relations, fc_number, first_two_moments, raney_number
from .fc_density import build_fc_spec, fc_density_closed, lambda_coeff
from .ginibre import MCConfig, run_mc
from .mellin import compare_oracle
from .moments import QuadratureConvergenceError, verify_moments
from .raney_density import build_raney_spec, omega_coeff, raney_density_closed
from .special_functions import HyperGeomParams, hypergeometric_pfq, verify_gauss_legendre

__all__ = ["Check", "selftest_checks", "full_suite", "interior_grid"]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    error: float
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def interior_grid(K: float, points: int = 200, lo: float = 0.01, hi: float = 0.99) -> np.ndarray:
    return np.linspace(lo * K, hi * K, points)


def _guard(name: str, fn: Callable[[], Check]) -> Check:
    # a numerical failure in one check must not hide the others
    try:
        return fn()
    except (ArithmeticError, ValueError, QuadratureConvergenceError) as exc:
        return Check(name, False, math.inf, f"{type(exc).__name__}: {exc}")


def _gauss_legendre(seed: int) -> Check:
    rng = np.random.default_rng(seed)
    z = rng.uniform(0.05, 20.0, 100)
    k = rng.integers(1, 9, 100)
    worst = max(verify_gauss_legendre(float(zi), int(ki)) for zi, ki in zip(z, k))
    return Check("gauss_legendre_multiplication", worst < 1e-11, worst, "100 random (z, k), tol 1e-11")


def _binomial_series() -> Check:
    worst = 0.0
    for a in np.linspace(-2, 2, 17):
        z = np.linspace(0, 0.9, 46)
        got = hypergeometric_pfq(HyperGeomParams((float(a),), ()), z)
        worst = max(worst, float(np.max(np.abs(got - (1 - z) ** (-a)))))
    return Check("binomial_1F0", worst < 1e-12, worst, "a in [-2, 2], z in [0, 0.9], tol 1e-12")


def _integer_identities() -> Check:
    bad = [p for p in range(2, 7) if not check_raney_relations(p, 12).passed]
    bad += [s for s in range(1, 7) for n in range(13) if raney_number(s + 1, 1, n) != fc_number(s, n)]
    return Check("raney_integer_identities", not bad, float(len(bad)), "p <= 6, n <= 12")


def selftest_checks(seed: int = 0) -> list[Check]:
    return [
        _guard("gauss_legendre_multiplication", lambda: _gauss_legendre(seed)),
        _guard("binomial_1F0", _binomial_series),
        _guard("raney_integer_identities", _integer_identities),
    ]


def _fc_spec(s: int, corrupt: Optional[float]):
    spec = build_fc_spec(s)
    return spec.with_scaled_coefficient(0, corrupt) if corrupt is not None else spec


def _moment_check(spec, n_max: int, tol: float) -> Check:
    report = verify_moments(spec, n_max, tol)
    detail = f"n <= {n_max}, tol {tol:g}" + (f"; {report.failure}" if report.failure else "")
    return Check(f"moments_{spec.label}", report.passed, report.max_rel_error, detail)


def _closed_forms(corrupt: Optional[float]) -> list[Check]:
    out = []
    for s in (1, 2):
        x = interior_grid(build_fc_spec(s).support_upper)
        err = float(np.max(np.abs(_fc_spec(s, corrupt)(x) - fc_density_closed(s, x))))
        out.append(Check(f"closed_form_P_{s}", err < 1e-9, err, "sup norm on 200 interior points"))
    for case in ((2, 2), (3, 2)):
        spec = build_raney_spec(*case)
        x = interior_grid(spec.support_upper)
        err = float(np.max(np.abs(spec(x) - raney_density_closed(case, x))))
        out.append(Check(f"closed_form_W_{case[0]},{case[1]}", err < 1e-9, err, "sup norm on 200 interior points"))
    return out


def _structural(corrupt: Optional[float]) -> list[Check]:
    out = []
    for s in range(1, 6):
        fc = _fc_spec(s, corrupt)
        x = interior_grid(fc.support_upper)
        err = float(np.max(np.abs(build_raney_spec(s + 1, 1)(x) - fc(x))))
        out.append(Check(f"W_{s + 1},1 = P_{s}", err < 1e-10, err))
        err = float(np.max(np.abs(build_raney_spec(s + 1, s + 1)(x) - x * fc(x))))
        out.append(Check(f"W_{s + 1},{s + 1} = x P_{s}", err < 1e-10, err))
    worst = max(abs(omega_coeff(s + 1, 1, j) - lambda_coeff(j, s)) for s in range(1, 7) for j in range(1, s + 1))
    out.append(Check("omega(s+1,1;j) = lambda(j,s)", worst < 1e-12, worst))
    nonzero = [(p, r) for p in range(2, 7) for r in range(1, p + 1) if omega_coeff(p, r, p + 1 - r) != 0.0]
    out.append(Check("omega(p,r;p+1-r) = 0", not nonzero, float(len(nonzero))))
    first_two = all(
        (raney_number(p, r, 1), raney_number(p, r, 2)) == first_two_moments(p, r)
        for p in range(2, 7)
        for r in range(1, p + 1)
    )
    out.append(Check("mean r, second moment r(2p+r-1)/2", first_two, 0.0 if first_two else 1.0, "exact"))
    return out


def _sign_checks() -> list[Check]:
    out = []
    for p in range(2, 6):
        for r in range(1, p + 2):
            spec = build_raney_spec(p, r)
            lowest = float(np.min(spec(interior_grid(spec.support_upper, 400, 1e-4, 1 - 1e-4))))
            if r <= p:
                out.append(Check(f"positivity_{spec.label}", lowest >= 0, lowest, "min on 400 interior points"))
            elif p <= 4:
                out.append(Check(f"negativity_{spec.label}", lowest < -1e-4, lowest, "min below -1e-4"))
    return out


def _oracle_checks() -> list[Check]:
    specs = [build_fc_spec(s) for s in range(1, 5)]
    specs += [build_raney_spec(p, r) for p in range(2, 5) for r in range(1, p + 1)]
    out = []
    for spec in specs:
        cmp = compare_oracle(spec, grid_size=2048)
        ok = cmp.rel_l1 < 1e-3 and cmp.min_oracle >= 0
        out.append(Check(f"oracle_{spec.label}", ok, cmp.rel_l1, "relative L1 on [0.05K, 0.95K]"))
    return out


def _mc_check(seed: int, threads: int) -> Check:
    report = run_mc(MCConfig(s=1, N=64, samples=20, seed=seed, bins=20, threads=threads))
    ok = report.l1_distance < 0.1 and report.negative_count == 0 and report.moments_within(5.0, 2)
    return Check("mc_P_1_short", ok, report.l1_distance, "N=64, 20 samples, l1 < 0.1, moments n <= 2 within 5 SE")


def full_suite(seed: int = 0, *, threads: int = 1, corrupt_lambda: Optional[float] = None) -> list[Check]:
    """Every verification at its default tolerance; ``corrupt_lambda`` scales the first FC coefficient."""
    checks = selftest_checks(seed)
    for s in range(1, 7):
        checks.append(_guard(f"moments_P_{s}", lambda s=s: _moment_check(_fc_spec(s, corrupt_lambda), 8, 1e-8)))
    for p in range(2, 6):
        for r in range(1, p + 1):
            checks.append(_guard(f"moments_W_{p},{r}", lambda p=p, r=r: _moment_check(build_raney_spec(p, r), 6, 1e-7)))
    checks += _closed_forms(corrupt_lambda)
    checks += _structural(corrupt_lambda)
    checks += _sign_checks()
    checks += _oracle_checks()
    checks.append(_guard("mc_P_1_short", lambda: _mc_check(seed, threads)))
    return checks
