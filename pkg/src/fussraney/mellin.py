"""Densities rebuilt as multiplicative convolutions of beta-type factors.

Each factor ``x^a (1-x)^(b-a-1) / Gamma(b-a)`` on ``(0, 1)`` has Mellin
transform ``Gamma(s+a) / Gamma(s+b)``. A density whose Mellin transform is
``C K^(s-1) prod_j Gamma(s+a_j)/Gamma(s+b_j)`` is therefore ``C / K`` times the
multiplicative convolution of the factors, dilated to ``(0, K)``.

With ``x = exp(-u)`` the multiplicative convolution becomes an ordinary one in
``u``. Every factor is discretised into exact cell masses on a uniform
``u``-grid (regularised incomplete beta differences), so the endpoint
singularities are integrated analytically. The cell masses are then convolved
by direct summation. All weights are non-negative, so the result is too,
which makes the reconstruction a positivity certificate as well as a value
oracle.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import betainc, betaincc

from .density import DensitySpec, DomainError

__all__ = [
    "GridFunction",
    "BetaFactor",
    "LogCellMeasure",
    "MassDriftWarning",
    "OracleConfig",
    "OracleComparison",
    "beta_factor_at",
    "factor_list",
    "oracle_constant",
    "beta_factor_measure",
    "convolve_measures",
    "mellin_convolve",
    "oracle_density",
    "compare_oracle",
]

MASS_DRIFT_TOL = 1e-6


class MassDriftWarning(RuntimeWarning):
    """Mass of a convolution drifted from the product of input masses."""


@dataclass(frozen=True)
class GridFunction:
    """Sampled function on a strictly increasing grid inside ``(0, upper]``."""

    grid: np.ndarray
    values: np.ndarray
    upper: float

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-D arrays of equal length")
        if len(grid) < 64:
            raise ValueError(f"need at least 64 grid points, got {len(grid)}")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if grid[0] <= 0 or grid[-1] > self.upper:
            raise ValueError(f"grid must lie in (0, {self.upper}]")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        grid.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.grid)


@dataclass(frozen=True)
class BetaFactor:
    """``x^a (1-x)^(b-a-1) / Gamma(b-a)`` on ``(0, 1)``, Mellin transform ``Gamma(s+a)/Gamma(s+b)``."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"need b > a, got a={self.a}, b={self.b}")
        if not self.a > -1:
            raise ValueError(f"x^{self.a} is not integrable at 0")

    @property
    def endpoint_exponent(self) -> Fraction:
        """Exponent ``b - a - 1`` of ``(1 - x)``."""
        return self.b - self.a - 1

    @property
    def mass(self) -> float:
        return math.exp(math.lgamma(self.a + 1) - math.lgamma(self.b + 1))


def beta_factor_at(f: BetaFactor, x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or np.any(x >= 1):
        raise DomainError("beta factors are evaluated on (0, 1)")
    out = x ** float(f.a) * (1 - x) ** float(f.endpoint_exponent) / math.gamma(float(f.b - f.a))
    return float(out) if out.ndim == 0 else out


def factor_list(spec: DensitySpec) -> list[BetaFactor]:
    """Beta factors whose Mellin convolution is the density, up to dilation and a constant."""
    fam = spec.family
    if fam.kind == "fc":
        s = fam.s
        return [BetaFactor(Fraction(j - s, s + 1), Fraction(2 + j - s, s)) for j in range(s)]
    p, r = fam.p, fam.r
    if r > p:
        raise ValueError(f"W_{p},{r} is not a probability density; no positive factorisation")
    factors = [] if r == p else [BetaFactor(Fraction(r - p, p), Fraction(0))]
    factors += [BetaFactor(Fraction(r - p + j, p), Fraction(r - p + j + 1, p - 1)) for j in range(1, p)]
    return factors


def oracle_constant(spec: DensitySpec) -> float:
    """Constant ``C`` fixed by unit mass: ``C prod_j Gamma(1+a_j)/Gamma(1+b_j) = 1``."""
    return 1.0 / math.prod(f.mass for f in factor_list(spec))


@dataclass(frozen=True)
class LogCellMeasure:
    """Cell masses of a measure on ``(0, 1]`` in the variable ``u = -ln x``.

    ``masses[n]`` sits at ``u = (n + offset) * step``. Whatever lies beyond the
    last cell is kept as the scalar ``tail`` so that total mass is tracked
    exactly.
    """

    step: float
    offset: float
    masses: np.ndarray
    tail: float

    @property
    def total_mass(self) -> float:
        return math.fsum(self.masses) + self.tail

    @property
    def u(self) -> np.ndarray:
        return (np.arange(len(self.masses)) + self.offset) * self.step

    def to_grid_function(self, scale: float = 1.0, dilation: float = 1.0) -> GridFunction:
        """Density in ``x = dilation * exp(-u)`` times ``scale``, on an increasing grid."""
        y = np.exp(-self.u)
        density = scale * self.masses / self.step / (dilation * y)
        return GridFunction((dilation * y)[::-1], density[::-1], dilation)


def beta_factor_measure(f: BetaFactor, step: float, n_cells: int) -> LogCellMeasure:
    """Exact cell masses of one factor on ``u in [n step, (n+1) step]``."""
    a1, c = float(f.a) + 1, float(f.b - f.a)
    y = np.exp(-step * np.arange(n_cells + 1))
    # the complement avoids cancellation where the cdf is close to 1
    cdf_c = betaincc(a1, c, y)
    cdf = betainc(a1, c, y)
    near_one = y > 0.5
    diff = np.where(near_one[1:], cdf_c[1:] - cdf_c[:-1], cdf[:-1] - cdf[1:])
    masses = f.mass * np.maximum(diff, 0.0)
    tail = f.mass * cdf[-1]
    return LogCellMeasure(step, 0.5, masses, float(tail))


def convolve_measures(m1: LogCellMeasure, m2: LogCellMeasure) -> LogCellMeasure:
    """Additive convolution in ``u``, i.e. multiplicative convolution in ``x``."""
    if not math.isclose(m1.step, m2.step, rel_tol=1e-12):
        raise ValueError("measures must share the same u step")
    n = min(len(m1.masses), len(m2.masses))
    in1, in2 = math.fsum(m1.masses[:n]), math.fsum(m2.masses[:n])
    t1, t2 = m1.total_mass - in1, m2.total_mass - in2
    full = np.convolve(m1.masses[:n], m2.masses[:n])
    masses = full[:n]
    # pairs landing beyond the grid, plus everything touching either tail
    tail = math.fsum(full[n:]) + t1 * m2.total_mass + in1 * t2
    expected = m1.total_mass * m2.total_mass
    out = LogCellMeasure(m1.step, m1.offset + m2.offset, masses, tail)
    drift = abs(out.total_mass - expected)
    if drift > MASS_DRIFT_TOL * max(expected, 1.0):
        warnings.warn(f"mass drift {drift:.3g} in Mellin convolution", MassDriftWarning, stacklevel=2)
    return out


def _as_measure(f: GridFunction) -> LogCellMeasure:
    u = -np.log(f.grid[::-1] / f.upper)
    steps = np.diff(u)
    if not np.allclose(steps, steps[0], rtol=1e-8, atol=0):
        raise ValueError("Mellin convolution needs logarithmically spaced grids")
    step = float(steps[0])
    offset = u[0] / step
    masses = f.values[::-1] * f.grid[::-1] * step
    return LogCellMeasure(step, offset, masses, 0.0)


def mellin_convolve(f: GridFunction, g: GridFunction) -> GridFunction:
    """``h(x) = int f(x/t) g(t) dt/t`` for functions sampled on log-spaced grids in ``(0, 1]``.

    Both grids must have the same log step. Each sample is treated as the
    mass of its cell, so the output inherits the cell offsets of both inputs.
    """
    if f.upper != 1.0 or g.upper != 1.0:
        raise ValueError("inputs must be supported in (0, 1]")
    return convolve_measures(_as_measure(f), _as_measure(g)).to_grid_function()


@dataclass(frozen=True)
class OracleConfig:
    """Resolution of the oracle.

    ``epsilon`` is the left end of the log grid (relative to ``K``) and
    ``max_step`` the coarsest allowed ``u`` step; the working step is refined
    below it so that the output grid is an exact subsample.
    """

    epsilon: float = 1e-8
    max_step: float = 1e-3


def oracle_density(spec: DensitySpec, grid_size: int, config: OracleConfig = OracleConfig()) -> GridFunction:
    """Mellin-convolution reconstruction of ``spec`` on ``grid_size`` log-spaced points in ``(0, K)``."""
    if grid_size < 256:
        raise ValueError(f"grid_size must be >= 256, got {grid_size}")
    factors = factor_list(spec)
    K = spec.support_upper
    u_span = math.log(1 / config.epsilon)
    refine = math.ceil(u_span / (grid_size * config.max_step))
    n_fine = grid_size * refine
    step = u_span / n_fine
    measure = beta_factor_measure(factors[0], step, n_fine)
    for f in factors[1:]:
        measure = convolve_measures(measure, beta_factor_measure(f, step, n_fine))
    fine = measure.to_grid_function(scale=oracle_constant(spec), dilation=K)
    # the last refine - 1 fine points are dropped so that exactly grid_size remain
    idx = np.arange(n_fine - 1, -1, -refine)[::-1]
    return GridFunction(fine.grid[idx], fine.values[idx], K)


@dataclass(frozen=True)
class OracleComparison:
    label: str
    grid: np.ndarray
    oracle: np.ndarray
    hypergeom: np.ndarray
    rel_l1: float
    min_oracle: float
    window: tuple

    @property
    def abs_diff(self) -> np.ndarray:
        return np.abs(self.oracle - self.hypergeom)


def compare_oracle(
    spec: DensitySpec,
    grid_size: int = 4096,
    window: tuple = (0.05, 0.95),
    config: OracleConfig = OracleConfig(),
) -> OracleComparison:
    """Relative L1 distance between the oracle and the series evaluation on ``window * K``."""
    oracle = oracle_density(spec, grid_size, config)
    K = spec.support_upper
    keep = (oracle.grid >= window[0] * K) & (oracle.grid <= window[1] * K)
    x = oracle.grid[keep]
    o = oracle.values[keep]
    hg = np.asarray(spec(x), dtype=float)
    rel = np.trapezoid(np.abs(o - hg), x) / np.trapezoid(np.abs(hg), x)
    return OracleComparison(spec.label, x, o, hg, float(rel), float(oracle.values.min()), window)
