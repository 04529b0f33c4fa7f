"""Quadrature of densities on ``(0, K]`` and the moment check against exact sequences.

Every density here has an algebraic singularity ``x^a`` (``a > -1``) at 0
and a square-root zero at ``K``. The interval is split at ``K/2``:

* on ``[0, K/2]`` we put ``x = K u^m`` where ``m`` is the common denominator
  of the term exponents, so ``x^(k/m - 1) dx`` becomes a polynomial in ``u``;
* on ``[K/2, K]`` we put ``x = K - w^2``, which turns ``sqrt(K - x)`` into ``w``.

Both transformed integrands are analytic and are handed to an adaptive
Gauss-Kronrod (21 point) cubature with vector-valued output, so all moments
``n = 0..n_max`` come from a single pass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import cubature

from .density import DensitySpec

__all__ = [
    "QuadratureConvergenceError",
    "QuadratureResult",
    "quadrature_integral",
    "moment_integrals",
    "bin_masses",
    "density_cdf",
    "MomentRow",
    "MomentReport",
    "verify_moments",
]

QUAD_RTOL = 1e-12
QUAD_ATOL = 1e-14
MAX_SUBDIVISIONS = 2000


class QuadratureConvergenceError(ArithmeticError):
    """Adaptive quadrature hit its subdivision cap; ``error`` holds the achieved estimate."""

    def __init__(self, message: str, value, error):
        super().__init__(message)
        self.value = value
        self.error = error


@dataclass(frozen=True)
class QuadratureResult:
    value: np.ndarray
    error: np.ndarray
    subdivisions: int


def _substitution_power(exponent: float) -> int:
    """Smallest ``m`` making ``x^a dx`` with ``x = u^m`` analytic at 0, for rational ``a``."""
    frac = Fraction(exponent).limit_denominator(1000)
    return max(frac.denominator, 1)


def _integrate_piece(fun, a: float, b: float, rtol: float, atol: float):
    if b <= a:
        return None
    res = cubature(
        lambda t: fun(t[:, 0]),
        np.array([a]),
        np.array([b]),
        rtol=rtol,
        atol=atol,
        max_subdivisions=MAX_SUBDIVISIONS,
    )
    return res


def quadrature_integral(
    density: Callable,
    weight_power,
    K: float,
    singular_exponent_at_zero: float,
    *,
    lower: float = 0.0,
    upper: Optional[float] = None,
    substitution_power: Optional[int] = None,
    rtol: float = QUAD_RTOL,
    atol: float = QUAD_ATOL,
) -> QuadratureResult:
    """Integrate ``x^n density(x)`` over ``[lower, upper]`` inside ``(0, K]``.

    Parameters
    ----------
    density
        Vectorised callable defined on ``(0, K]``.
    weight_power
        Scalar ``n`` or a sequence of powers; the result has the same shape.
    K
        Right end of the support.
    singular_exponent_at_zero
        Leading exponent ``a`` of the density at 0; must be ``> -1``.
    substitution_power
        Override for ``m`` in ``x = K u^m``. Defaults to the denominator of ``a``.

    Raises
    ------
    QuadratureConvergenceError
        If either piece fails to reach ``atol + rtol |value|``.
    """
    if not singular_exponent_at_zero > -1:
        raise ValueError(f"x^{singular_exponent_at_zero} is not integrable at 0")
    upper = K if upper is None else upper
    if not 0 <= lower <= upper <= K:
        raise ValueError(f"need 0 <= lower <= upper <= K, got [{lower}, {upper}] with K={K}")
    m = substitution_power or _substitution_power(singular_exponent_at_zero)
    powers = np.atleast_1d(np.asarray(weight_power, dtype=float))
    half = K / 2

    def lower_piece(u):
        x = K * u**m
        jac = K * m * u ** (m - 1)
        return (density(x) * jac)[:, None] * x[:, None] ** powers

    def upper_piece(w):
        x = K - w * w
        return (density(x) * 2 * w)[:, None] * x[:, None] ** powers

    total = np.zeros_like(powers)
    err = np.zeros_like(powers)
    subdivisions = 0
    failed = False
    a, b = min(lower, half), min(upper, half)
    res = _integrate_piece(lower_piece, (a / K) ** (1 / m), (b / K) ** (1 / m), rtol, atol)
    pieces = [res]
    a, b = max(lower, half), max(upper, half)
    pieces.append(_integrate_piece(upper_piece, math.sqrt(K - b), math.sqrt(K - a), rtol, atol))
    for res in pieces:
        if res is None:
            continue
        total += res.estimate
        err += res.error
        subdivisions += res.subdivisions
        failed |= res.status != "converged"
    shape = np.shape(weight_power)
    value, error = total.reshape(shape), err.reshape(shape)
    if failed:
        raise QuadratureConvergenceError(
            f"quadrature did not converge, error estimate {np.max(err):.3g}", value, error
        )
    return QuadratureResult(value, error, subdivisions)


def moment_integrals(spec: DensitySpec, n_max: int, **kwargs) -> QuadratureResult:
    """Numerical moments ``n = 0..n_max`` of a density spec."""
    return quadrature_integral(
        spec,
        np.arange(n_max + 1),
        spec.support_upper,
        spec.small_x_exponent,
        substitution_power=spec.exponent_denominator,
        **kwargs,
    )


def bin_masses(spec: DensitySpec, edges: Sequence[float], *, rtol: float = 1e-10) -> np.ndarray:
    """Integral of the density over each bin ``[edges[i], edges[i+1]]``, clipped to ``[0, K]``."""
    edges = np.asarray(edges, dtype=float)
    K = spec.support_upper
    out = np.zeros(len(edges) - 1)
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        lo, hi = min(max(lo, 0.0), K), min(max(hi, 0.0), K)
        if hi > lo:
            out[i] = quadrature_integral(
                spec, 0, K, spec.small_x_exponent,
                lower=lo, upper=hi, substitution_power=spec.exponent_denominator,
                rtol=rtol, atol=1e-15,
            ).value
    return out


def density_cdf(spec: DensitySpec, x: Sequence[float], *, rtol: float = 1e-10) -> np.ndarray:
    """``F(x) = integral_0^x density`` at sorted points ``x``."""
    x = np.asarray(x, dtype=float)
    if np.any(np.diff(x) < 0):
        raise ValueError("points must be sorted")
    edges = np.concatenate([[0.0], x])
    return np.cumsum(bin_masses(spec, edges, rtol=rtol))


@dataclass(frozen=True)
class MomentRow:
    n: int
    numeric_moment: float
    exact_moment: int
    rel_error: float
    quad_error: float


@dataclass
class MomentReport:
    """Numerical versus exact moments for one density."""

    spec: DensitySpec
    n_max: int
    tolerance: float
    rows: list = field(default_factory=list)
    failure: Optional[str] = None

    @property
    def max_rel_error(self) -> float:
        return max((row.rel_error for row in self.rows), default=math.inf)

    @property
    def passed(self) -> bool:
        return self.failure is None and bool(self.rows) and self.max_rel_error <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "density": self.spec.label,
            "n_max": self.n_max,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "max_rel_error": self.max_rel_error,
            "failure": self.failure,
            "rows": [
                {
                    "n": r.n,
                    "numeric_moment": r.numeric_moment,
                    "exact_moment": r.exact_moment,
                    "rel_error": r.rel_error,
                }
                for r in self.rows
            ],
        }


def verify_moments(spec: DensitySpec, n_max: int, tolerance: float) -> MomentReport:
    """Compare quadrature moments of ``spec`` with its exact integer sequence.

    A quadrature that fails to converge still yields rows (with the achieved
    values), and the report records the failure instead of raising.
    """
    if not spec.is_probability:
        raise ValueError(f"{spec.label} is not a probability density")
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    report = MomentReport(spec, n_max, tolerance)
    try:
        res = moment_integrals(spec, n_max)
        values, errors = res.value, res.error
    except QuadratureConvergenceError as exc:
        report.failure = str(exc)
        values, errors = exc.value, exc.error
    for n in range(n_max + 1):
        exact = spec.moment(n)
        # exact integers can exceed float range only far beyond any n used here
        rel = abs(float(values[n]) - exact) / exact
        report.rows.append(MomentRow(n, float(values[n]), exact, rel, float(errors[n])))
    return report
