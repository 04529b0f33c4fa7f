"""Exact Fuss-Catalan and Raney numbers and their moment identities."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional

__all__ = [
    "SequenceSpec",
    "OutsideSigmaError",
    "fc_number",
    "raney_number",
    "raney_moment_real",
    "check_raney_relations",
    "RelationRow",
    "sequence",
]


class OutsideSigmaError(ValueError):
    """(p, r) lies outside the set where Raney moments define a measure."""


@dataclass(frozen=True)
class SequenceSpec:
    """A Fuss-Catalan family ``FC_s`` or a Raney family ``R_{p,r}``.

    ``SequenceSpec.fc(s)`` is the same sequence as ``SequenceSpec.raney(s+1, 1)``
    but the two are kept distinct because their densities are built from
    different hypergeometric expansions.
    """

    kind: Literal["fc", "raney"]
    s: Optional[int] = None
    p: Optional[int] = None
    r: Optional[int] = None

    def __post_init__(self):
        if self.kind == "fc":
            if self.s is None or self.s < 1:
                raise ValueError(f"Fuss-Catalan order must be >= 1, got s={self.s}")
        elif self.kind == "raney":
            if self.p is None or self.p < 2:
                raise ValueError(f"Raney p must be >= 2, got p={self.p}")
            if self.r is None or self.r < 1:
                raise ValueError(f"Raney r must be >= 1, got r={self.r}")
        else:
            raise ValueError(f"unknown sequence kind {self.kind!r}")

    @classmethod
    def fc(cls, s: int) -> "SequenceSpec":
        return cls("fc", s=s)

    @classmethod
    def raney(cls, p: int, r: int) -> "SequenceSpec":
        return cls("raney", p=p, r=r)

    def __call__(self, n: int) -> int:
        if self.kind == "fc":
            return fc_number(self.s, n)
        return raney_number(self.p, self.r, n)

    @property
    def label(self) -> str:
        return f"FC_{self.s}" if self.kind == "fc" else f"R_{self.p},{self.r}"


def _exact_div(num: int, den: int) -> int:
    q, rem = divmod(num, den)
    assert rem == 0, f"{num} is not divisible by {den}"
    return q


def fc_number(s: int, n: int) -> int:
    """Fuss-Catalan number ``FC_s(n) = binom(sn+n, n) / (sn+1)``.

    >>> [fc_number(2, n) for n in range(6)]
    [1, 1, 3, 12, 55, 273]
    """
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return _exact_div(math.comb(s * n + n, n), s * n + 1)


def raney_number(p: int, r: int, n: int) -> int:
    """Raney number ``R_{p,r}(n) = r binom(pn+r, n) / (pn+r)``."""
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return _exact_div(r * math.comb(p * n + r, n), p * n + r)


def raney_moment_real(p: float, r: float, n: int, *, log: bool = False) -> float:
    """n-th moment of the Raney measure for real ``(p, r)``.

    Evaluates ``r/(np+r) Gamma(np+r+1) / (Gamma(n+1) Gamma(np+r-n+1))`` in
    log-gamma space. Integer parameters go through the exact integer path.
    With ``log=True`` the natural log of the moment is returned instead, which
    stays finite where the moment itself would overflow.

    Raises
    ------
    OutsideSigmaError
        Unless ``p >= 0`` and ``0 < r <= p``.
    ValueError
        If a gamma argument is not strictly positive.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if not (p >= 0 and 0 < r <= p):
        raise OutsideSigmaError(f"(p={p}, r={r}) is outside Sigma: need p >= 0 and 0 < r <= p")
    if float(p).is_integer() and float(r).is_integer() and p >= 2:
        value = raney_number(int(p), int(r), n)
        return math.log(value) if log else float(value)
    args = (n * p + r + 1, n + 1, n * p + r - n + 1)
    if min(args) <= 0:
        raise ValueError(f"gamma arguments {args} must be positive")
    logm = (
        math.log(r)
        - math.log(n * p + r)
        + math.lgamma(args[0])
        - math.lgamma(args[1])
        - math.lgamma(args[2])
    )
    return logm if log else math.exp(logm)


@dataclass(frozen=True)
class RelationRow:
    n: int
    identity: str
    lhs: int
    rhs: int

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs


@dataclass
class RelationReport:
    p: int
    n_max: int
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)


def check_raney_relations(p: int, n_max: int) -> RelationReport:
    """Check ``R_{p+1,p+1}(n) = FC_p(n+1)`` and ``R_{p,p}(n) = R_{p,1}(n+1)``.

    Both are checked as exact integer equalities for ``n = 0..n_max``.
    """
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    report = RelationReport(p, n_max)
    for n in range(n_max + 1):
        report.rows.append(
            RelationRow(n, "R_{p+1,p+1}(n) = FC_p(n+1)", raney_number(p + 1, p + 1, n), fc_number(p, n + 1))
        )
        report.rows.append(
            RelationRow(n, "R_{p,p}(n) = R_{p,1}(n+1)", raney_number(p, p, n), raney_number(p, 1, n + 1))
        )
    return report


def first_two_moments(p: int, r: int) -> tuple[Fraction, Fraction]:
    """Closed forms of the mean and second moment, ``r`` and ``r(2p+r-1)/2``."""
    return Fraction(r), Fraction(r * (2 * p + r - 1), 2)


def sequence(spec: SequenceSpec, n_max: int) -> list[int]:
    return [spec(n) for n in range(n_max + 1)]
