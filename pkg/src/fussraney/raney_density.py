"""Raney densities ``W_{p,r}`` for integer ``p >= 2`` and ``1 <= r <= p + 1``.

Matching upper/lower parameter pairs are cancelled on exact rationals before
evaluation. The term whose coefficient carries ``1/Gamma((p-r+1-j)/p)`` at a
pole (``j = p + 1 - r`` for ``r <= p``, ``j = p`` for ``r = p + 1``) is zero and
is left out of the sum altogether.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .combinatorics import SequenceSpec
from .density import DensitySpec, DomainError, HyperGeomTerm, log_prefactor_to_value
from .special_functions import HyperGeomParams, gamma_ratio_log

__all__ = [
    "RaneyCoefficients",
    "raney_support",
    "omega_coeff",
    "raney_coefficients",
    "build_raney_spec",
    "raney_density_at",
    "raney_density_closed",
    "small_x_exponent",
]


def _check(p: int, r: int) -> None:
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if not 1 <= r <= p + 1:
        raise ValueError(f"r must lie in [1, p+1], got r={r} for p={p}")


def _support_exact(p: int) -> Fraction:
    return Fraction(p**p, (p - 1) ** (p - 1))


def raney_support(p: int) -> float:
    """Right end ``p^p / (p-1)^(p-1)`` of the support of ``W_{p,r}``."""
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    return float(_support_exact(p))


def _vanishing_index(p: int, r: int) -> int:
    # (p - r + 1 - j) / p is a non-positive integer exactly here
    return (p - r) % p + 1


def _beta(p: int, r: int, j: int) -> Fraction:
    return Fraction(r - p - 1 + j, p)


def _alpha(p: int, r: int, i: int) -> Fraction:
    return Fraction(0) if i == 1 else Fraction(r - p + i, p - 1)


def omega_coeff(p: int, r: int, j: int) -> float:
    """Coefficient of the j-th term of ``W_{p,r}``; exactly 0 at the vanishing index."""
    _check(p, r)
    if not 1 <= j <= p:
        raise ValueError(f"j must lie in [1, p], got {j}")
    if j == _vanishing_index(p, r):
        return 0.0
    beta = _beta(p, r, j)
    numer = [Fraction(i - j, p) for i in range(1, j)] + [Fraction(i, p) for i in range(1, p - j + 1)]
    denom = [Fraction(p - r + 1 - j, p)] + [_alpha(p, r, i) - beta for i in range(2, p + 1)]
    ratio = gamma_ratio_log(numer, denom)
    log_pref = (
        math.log(r)
        - 0.5 * math.log(2 * math.pi)
        + (r - p - 0.5) * math.log(p)
        - (r - p + 1.5) * math.log(p - 1)
        + float(beta) * ((p - 1) * math.log(p - 1) - p * math.log(p))
    )
    return log_prefactor_to_value(log_pref + ratio.log_abs, ratio.sign)


@dataclass(frozen=True)
class RaneyCoefficients:
    """All ``p`` coefficients, with the 1-based index of the one that vanishes."""

    omega: tuple
    vanishing_index: int


def raney_coefficients(p: int, r: int) -> RaneyCoefficients:
    _check(p, r)
    return RaneyCoefficients(
        tuple(omega_coeff(p, r, j) for j in range(1, p + 1)),
        _vanishing_index(p, r),
    )


def raney_term_params(p: int, r: int, j: int, *, cancel: bool = True) -> HyperGeomParams:
    beta = _beta(p, r, j)
    upper = [1 + beta] + [1 + beta - _alpha(p, r, i) for i in range(2, p + 1)]
    lower = [1 + Fraction(j - i, p) for i in range(1, p + 1) if i != j]
    params = HyperGeomParams(tuple(upper), tuple(lower))
    return params.cancelled() if cancel else params


@lru_cache(maxsize=None)
def build_raney_spec(p: int, r: int) -> DensitySpec:
    """Assemble the non-vanishing hypergeometric terms of ``W_{p,r}``."""
    _check(p, r)
    K = _support_exact(p)
    terms = []
    for j in range(1, p + 1):
        if j == _vanishing_index(p, r):
            continue
        terms.append(
            HyperGeomTerm(
                coefficient=omega_coeff(p, r, j),
                power_exponent=Fraction(r - 1 + j, p) - 1,
                params=raney_term_params(p, r, j),
                argument_scale=1 / K,
            )
        )
    return DensitySpec(SequenceSpec.raney(p, r), K, tuple(terms), exponent_denominator=p)


def raney_density_at(p: int, r: int, x):
    """``W_{p,r}(x)`` for ``x`` in ``(0, p^p/(p-1)^(p-1)]``."""
    return build_raney_spec(p, r)(x)


def raney_density_closed(case: tuple, x):
    """Elementary forms of ``W_{2,2}`` (shifted semicircle) and ``W_{3,2}``."""
    case = tuple(case)
    if case not in ((2, 2), (3, 2)):
        raise ValueError("closed forms exist for (p, r) = (2, 2) and (3, 2) only")
    x = np.asarray(x, dtype=float)
    K = raney_support(case[0])
    if np.any(x <= 0) or np.any(x > K):
        raise DomainError(f"W_{case[0]},{case[1]} closed form is defined on (0, {K:.12g}]")
    if case == (2, 2):
        out = np.sqrt(np.maximum(x * (4 - x), 0.0)) / (2 * np.pi)
    else:
        c = 27 + 3 * np.sqrt(np.maximum(81 - 12 * x, 0.0))
        cbrt2 = 2 ** (1 / 3)
        out = (
            math.sqrt(3) * cbrt2 / (36 * np.pi)
            * (c ** (4 / 3) - 18 * cbrt2 * x ** (2 / 3))
            / (np.cbrt(x) * c ** (2 / 3))
        )
    return float(out) if out.ndim == 0 else out


def small_x_exponent(p: int, r: int) -> float:
    """Power-law exponent of ``W_{p,r}`` at ``x -> 0``."""
    if p < 2 or not 1 <= r <= p:
        raise ValueError(f"need p >= 2 and 1 <= r <= p, got p={p}, r={r}")
    return -(p - r) / p if r < p else 1 / p
