"""Densities represented as finite sums of power-weighted hypergeometric terms."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .combinatorics import SequenceSpec
from .special_functions import HyperGeomParams, hypergeometric_pfq

__all__ = ["DomainError", "HyperGeomTerm", "DensitySpec"]


class DomainError(ValueError):
    """Density evaluated outside ``(0, K]``."""


@dataclass(frozen=True)
class HyperGeomTerm:
    """``coefficient * x**power_exponent * pFq(params; argument_scale * x)``."""

    coefficient: float
    power_exponent: Fraction
    params: HyperGeomParams
    argument_scale: Fraction

    def __call__(self, x, support_upper: float):
        x = np.asarray(x, dtype=float)
        # x / K rather than x * scale so that x == K maps to exactly 1
        z = x / support_upper
        return self.coefficient * x ** float(self.power_exponent) * hypergeometric_pfq(self.params, z)


@dataclass(frozen=True)
class DensitySpec:
    """A Fuss-Catalan or Raney density on ``(0, K]``.

    ``exponent_denominator`` is the common denominator ``m`` of the term
    exponents; the substitution ``x = K u^m`` makes every term analytic at 0.
    """

    family: SequenceSpec
    support_exact: Fraction
    terms: tuple
    exponent_denominator: int

    @property
    def support_upper(self) -> float:
        return float(self.support_exact)

    @property
    def is_probability(self) -> bool:
        return self.family.kind == "fc" or self.family.r <= self.family.p

    @property
    def small_x_exponent(self) -> float:
        """Exponent of the leading power law at ``x -> 0``."""
        return float(min(t.power_exponent for t in self.terms))

    @property
    def label(self) -> str:
        if self.family.kind == "fc":
            return f"P_{self.family.s}"
        return f"W_{self.family.p},{self.family.r}"

    def moment(self, n: int) -> int:
        return self.family(n)

    def __call__(self, x):
        """Evaluate the density at ``x`` (scalar or array) in ``(0, K]``."""
        xa = np.asarray(x, dtype=float)
        if np.any(xa <= 0) or np.any(xa > self.support_upper) or np.any(np.isnan(xa)):
            raise DomainError(f"{self.label} is defined on (0, {self.support_upper:.12g}]")
        total = sum(term(xa, self.support_upper) for term in self.terms)
        return float(total) if xa.ndim == 0 else total

    def with_scaled_coefficient(self, index: int, factor: float) -> "DensitySpec":
        """Copy with one term coefficient multiplied by ``factor`` (mutation testing)."""
        terms = list(self.terms)
        terms[index] = replace(terms[index], coefficient=terms[index].coefficient * factor)
        return replace(self, terms=tuple(terms))


def log_prefactor_to_value(log_abs: float, sign: int) -> float:
    return sign * math.exp(log_abs) if sign else 0.0
