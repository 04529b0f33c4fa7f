"""Fuss-Catalan densities ``P_s`` from their hypergeometric representation."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .combinatorics import SequenceSpec
from .density import DensitySpec, DomainError, HyperGeomTerm, log_prefactor_to_value
from .special_functions import HyperGeomParams, gamma_ratio_log

__all__ = [
    "fc_support",
    "lambda_coeff",
    "build_fc_spec",
    "fc_density_at",
    "fc_density_closed",
]


def _support_exact(s: int) -> Fraction:
    return Fraction((s + 1) ** (s + 1), s**s)


def fc_support(s: int) -> float:
    """Right end ``K_s = (s+1)^(s+1) / s^s`` of the support of ``P_s``."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    return float(_support_exact(s))


def lambda_coeff(k: int, s: int) -> float:
    """Coefficient of the k-th hypergeometric term of ``P_s``.

    The gamma factors ``Gamma((j-k)/(s+1))`` with ``j < k`` have negative
    arguments, so the product is accumulated as a signed log.
    """
    if s < 1 or not 1 <= k <= s:
        raise ValueError(f"need 1 <= k <= s, got k={k}, s={s}")
    numer = [Fraction(j - k, s + 1) for j in range(1, s + 1) if j != k]
    denom = [Fraction(j + 1, s) - Fraction(k, s + 1) for j in range(1, s + 1)]
    ratio = gamma_ratio_log(numer, denom)
    log_pref = (
        -1.5 * math.log(s)
        + 0.5 * (math.log(s + 1) - math.log(2 * math.pi))
        + k * (s / (s + 1) * math.log(s) - math.log(s + 1))
    )
    return log_prefactor_to_value(log_pref + ratio.log_abs, ratio.sign)


def fc_term_params(k: int, s: int) -> HyperGeomParams:
    upper = [1 - Fraction(1 + j, s) + Fraction(k, s + 1) for j in range(1, s + 1)]
    lower = [1 + Fraction(k - j, s + 1) for j in range(1, s + 1) if j != k]
    return HyperGeomParams(tuple(upper), tuple(lower))


@lru_cache(maxsize=None)
def build_fc_spec(s: int) -> DensitySpec:
    """Assemble the ``s`` hypergeometric terms of ``P_s``."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    K = _support_exact(s)
    terms = tuple(
        HyperGeomTerm(
            coefficient=lambda_coeff(k, s),
            power_exponent=Fraction(k, s + 1) - 1,
            params=fc_term_params(k, s),
            argument_scale=1 / K,
        )
        for k in range(1, s + 1)
    )
    return DensitySpec(SequenceSpec.fc(s), K, terms, exponent_denominator=s + 1)


def fc_density_at(s: int, x):
    """``P_s(x)`` for ``x`` in ``(0, K_s]`` (scalar or array)."""
    return build_fc_spec(s)(x)


def fc_density_closed(s: int, x):
    """Elementary closed forms of ``P_1`` (Marchenko-Pastur) and ``P_2``."""
    x = np.asarray(x, dtype=float)
    if s not in (1, 2):
        raise ValueError("closed forms exist for s = 1 and s = 2 only")
    K = fc_support(s)
    if np.any(x <= 0) or np.any(x > K):
        raise DomainError(f"P_{s} closed form is defined on (0, {K:.12g}]")
    if s == 1:
        out = np.sqrt(np.maximum(1 - x / 4, 0.0)) / (np.pi * np.sqrt(x))
    else:
        c = 27 + 3 * np.sqrt(np.maximum(81 - 12 * x, 0.0))
        cbrt2 = 2 ** (1 / 3)
        out = (
            cbrt2 * math.sqrt(3) / (12 * np.pi)
            * (cbrt2 * c ** (2 / 3) - 6 * np.cbrt(x))
            / (x ** (2 / 3) * np.cbrt(c))
        )
    return float(out) if out.ndim == 0 else out
