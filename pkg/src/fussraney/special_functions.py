"""Gamma-family primitives and a generalized hypergeometric series engine.

The series engine sums ``pFq`` directly with compensated accumulation. For the
``p = q + 1`` family near ``|z| = 1`` the direct sum converges too slowly, so
after ``tail_start`` terms the remainder is obtained from an Euler-Maclaurin
expansion of the term sequence (for ``z > 0``) or of consecutive term pairs
(for ``z < 0``). This keeps evaluation accurate up to and including ``z = 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import NamedTuple, Sequence

import numpy as np
from scipy import integrate

__all__ = [
    "PoleError",
    "NonConvergenceError",
    "HypergeometricParameterError",
    "SignedLogGamma",
    "HyperGeomParams",
    "signed_log_gamma",
    "gamma_ratio_log",
    "pochhammer",
    "hypergeometric_pfq",
    "verify_gauss_legendre",
]

SERIES_RTOL = 1e-16
SMALL_TERMS_TO_STOP = 3
MAX_TERMS = 100_000
TAIL_START = 1000

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


class PoleError(ValueError):
    """Gamma function evaluated at a non-positive integer."""


class NonConvergenceError(ArithmeticError):
    """Series failed to converge within the term cap (or diverges)."""


class HypergeometricParameterError(ValueError):
    """A lower parameter is a non-positive integer."""


class SignedLogGamma(NamedTuple):
    log_abs: float
    sign: int

    @property
    def value(self) -> float:
        return self.sign * math.exp(self.log_abs)


def _is_nonpositive_integer(x) -> bool:
    if isinstance(x, Fraction):
        return x.denominator == 1 and x <= 0
    return float(x) <= 0 and float(x) == math.floor(float(x))


def signed_log_gamma(x: float) -> SignedLogGamma:
    """Return ``(log|Gamma(x)|, sign Gamma(x))`` for real ``x`` off the poles.

    On the negative axis the sign is -1 exactly on the intervals ``(-2k-1, -2k)``.
    """
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x}")
    xf = float(x)
    if xf > 0:
        return SignedLogGamma(math.lgamma(xf), 1)
    sign = -1 if math.floor(xf) % 2 else 1
    return SignedLogGamma(math.lgamma(xf), sign)


def gamma_ratio_log(numer: Sequence, denom: Sequence) -> SignedLogGamma:
    """Signed log of ``prod Gamma(numer) / prod Gamma(denom)``.

    A pole in ``denom`` makes the ratio exactly zero, reported as
    ``log_abs = -inf`` with sign 0. A pole in ``numer`` raises.
    """
    log_abs = 0.0
    sign = 1
    for x in numer:
        g = signed_log_gamma(x)
        log_abs += g.log_abs
        sign *= g.sign
    for x in denom:
        if _is_nonpositive_integer(x):
            return SignedLogGamma(-math.inf, 0)
        g = signed_log_gamma(x)
        log_abs -= g.log_abs
        sign *= g.sign
    return SignedLogGamma(log_abs, sign)


def pochhammer(a: float, n: int) -> float:
    """Rising factorial ``(a)_n = a (a+1) ... (a+n-1)``, with ``(a)_0 = 1``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = 1.0
    for i in range(n):
        out *= a + i
    return out


def _as_param(x):
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    if isinstance(x, Real):
        return float(x)
    raise TypeError(f"hypergeometric parameter must be real, got {x!r}")


@dataclass(frozen=True)
class HyperGeomParams:
    """Upper (``a_j``) and lower (``b_j``) parameter lists of a ``pFq``.

    Parameters given as ``int`` or ``Fraction`` are kept exact so that
    upper/lower cancellation can be decided without floating-point matching.
    """

    upper: tuple
    lower: tuple

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(_as_param(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(_as_param(b) for b in self.lower))
        bad = [b for b in self.lower if _is_nonpositive_integer(b)]
        if bad:
            raise HypergeometricParameterError(
                f"lower parameters {bad} are non-positive integers"
            )

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    @property
    def excess(self) -> float:
        """``sum(lower) - sum(upper)``; governs convergence at ``|z| = 1``."""
        return float(sum(self.lower)) - float(sum(self.upper))

    def cancelled(self) -> "HyperGeomParams":
        """Remove upper/lower pairs that are exactly equal (multiset-wise)."""
        lower = list(self.lower)
        upper = []
        for a in self.upper:
            for i, b in enumerate(lower):
                if type(a) is type(b) and a == b:
                    del lower[i]
                    break
            else:
                upper.append(a)
        return HyperGeomParams(tuple(upper), tuple(lower))

    def __str__(self) -> str:
        return f"{self.p}F{self.q}([{', '.join(map(str, self.upper))}], [{', '.join(map(str, self.lower))}])"


_BERNOULLI = [
    Fraction(1), Fraction(-1, 2), Fraction(1, 6), Fraction(0), Fraction(-1, 30),
    Fraction(0), Fraction(1, 42), Fraction(0), Fraction(-1, 30), Fraction(0),
    Fraction(5, 66), Fraction(0), Fraction(-691, 2730),
]
_ASYMPTOTIC_ORDER = 10


def _bernoulli_poly(n: int, x: float) -> float:
    return sum(math.comb(n, k) * float(_BERNOULLI[k]) * x ** (n - k) for k in range(n + 1))


class _TermAsymptotics:
    """Large-index expansion of ``log|t_x|`` for a ``(q+1)Fq`` series.

    Pairs each upper parameter with a lower one (the implicit ``n!`` supplies
    the extra ``1``) and expands ``log Gamma(x+a) - log Gamma(x+c)`` in
    powers of ``1/x``; exact to double precision once ``x`` is a few hundred.
    """

    def __init__(self, a, b, logz: float):
        c = list(b) + [1.0]
        self.power = float(sum(a) - sum(c))
        self.logz = logz
        self.coef = [
            sum(
                (-1) ** (k + 1) * (_bernoulli_poly(k + 1, aj) - _bernoulli_poly(k + 1, cj)) / (k * (k + 1))
                for aj, cj in zip(a, c)
            )
            for k in range(1, _ASYMPTOTIC_ORDER + 1)
        ]

    def log(self, x):
        x = np.asarray(x, dtype=float)
        out = self.power * np.log(x) + x * self.logz
        for k, ck in enumerate(self.coef, start=1):
            out = out + ck * x ** (-k)
        return out

    def derivatives(self, x: float):
        g1 = self.power / x + self.logz
        g2 = -self.power / x**2
        g3 = 2 * self.power / x**3
        for k, ck in enumerate(self.coef, start=1):
            g1 -= k * ck * x ** (-k - 1)
            g2 += k * (k + 1) * ck * x ** (-k - 2)
            g3 -= k * (k + 1) * (k + 2) * ck * x ** (-k - 3)
        return g1, g2, g3


def _tail_positive(a, b, z, n0, t0):
    """Euler-Maclaurin estimate of ``sum_{n >= n0} t_n`` for ``0 < z <= 1``."""
    asym = _TermAsymptotics(a, b, math.log(z))
    l0 = float(asym.log(n0))
    decay = -1.0 - asym.power
    if decay > 0:
        # x = n0 v^(-1/decay) keeps the integrand bounded as v -> 0
        beta = 1.0 / decay

        def g(v):
            if v <= 0.0:
                return 0.0 if asym.logz < 0 else beta * n0
            x = n0 * v ** (-beta)
            if not math.isfinite(x):
                return 0.0
            return math.exp(float(asym.log(x)) - l0) * beta * x / v

        integral, _ = integrate.quad(g, 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
    else:
        integral, _ = integrate.quad(
            lambda x: math.exp(float(asym.log(x)) - l0), n0, np.inf, epsabs=0.0, epsrel=1e-13, limit=200
        )
    g1, g2, g3 = asym.derivatives(float(n0))
    em = 0.5 - g1 / 12.0 + (g3 + 3 * g1 * g2 + g1**3) / 720.0
    return t0 * (integral + em)


def _tail_alternating(a, b, z, n0, t0):
    """Euler-Maclaurin estimate of ``sum_{n >= n0} t_n`` for ``-1 <= z < 0``.

    Consecutive terms are paired, ``P(m) = t_{2m} + t_{2m+1}``; the integral of
    the paired sequence telescopes to ``(1/2) int_{n0}^{n0+1} |t_x| dx``.
    """
    if n0 % 2:
        raise ValueError("pair tail needs an even start index")
    asym = _TermAsymptotics(a, b, math.log(-z))
    l0 = float(asym.log(n0))

    def h(x):
        return np.exp(asym.log(x) - l0)

    xs = n0 + 0.5 * (_GL_NODES + 1.0)
    integral = 0.25 * float(np.dot(_GL_WEIGHTS, h(xs)))

    def h_derivs(x):
        hv = float(h(x))
        g1, g2, g3 = asym.derivatives(x)
        return hv, hv * g1, hv * (g3 + 3 * g1 * g2 + g1**3)

    h0, d1_0, d3_0 = h_derivs(float(n0))
    h1, d1_1, d3_1 = h_derivs(float(n0 + 1))
    pair = h0 - h1
    pair_d1 = 2.0 * (d1_0 - d1_1)
    pair_d3 = 8.0 * (d3_0 - d3_1)
    return t0 * (integral + 0.5 * pair - pair_d1 / 12.0 + pair_d3 / 720.0)


def hypergeometric_pfq(
    params: HyperGeomParams,
    z,
    *,
    rtol: float = SERIES_RTOL,
    max_terms: int = MAX_TERMS,
    tail_start: int = TAIL_START,
):
    """Evaluate ``pFq(upper; lower; z)`` for real ``z`` (scalar or array).

    The direct series stops once ``|term| <= rtol * |partial sum|`` holds for
    three consecutive terms. For ``p = q + 1`` and slow convergence the
    remainder after ``tail_start`` terms comes from an Euler-Maclaurin tail.

    Raises
    ------
    ValueError
        ``p = q + 1`` and ``|z| > 1``.
    NonConvergenceError
        ``p > q + 1`` with ``z != 0``; divergence at ``z = +-1``; or the term
        cap was reached.
    """
    a = np.array([float(v) for v in params.upper], dtype=float)
    b = np.array([float(v) for v in params.lower], dtype=float)
    zarr = np.asarray(z, dtype=float)
    scalar = zarr.ndim == 0
    shape = zarr.shape
    zarr = zarr.ravel()
    p, q = params.p, params.q
    terminating = any(_is_nonpositive_integer(v) for v in params.upper)
    nonzero = zarr != 0
    if p > q + 1 and nonzero.any() and not terminating:
        raise NonConvergenceError(f"{p}F{q} series diverges for z != 0")
    if p == q + 1 and not terminating:
        if (np.abs(zarr) > 1).any():
            raise ValueError(f"{p}F{q} series needs |z| <= 1")
        d = params.excess
        if (zarr == 1).any() and d <= 0:
            raise NonConvergenceError(f"{p}F{q} at z=1 needs sum(lower)-sum(upper) > 0, got {d}")
        if (zarr == -1).any() and d <= -1:
            raise NonConvergenceError(f"{p}F{q} at z=-1 needs sum(lower)-sum(upper) > -1, got {d}")
    use_tail = p == q + 1 and not terminating
    limit = tail_start if use_tail else max_terms

    result, n_used, last_term, done = _direct_sum(a, b, zarr, rtol, limit)
    if not done.all():
        if not use_tail:
            raise NonConvergenceError(f"{params} did not converge in {max_terms} terms")
        # remainder starts at t_{n+1}; the pair form needs an even start index
        def step(t, m):
            return t * (np.prod(a + m) / np.prod(b + m) / (m + 1)) * zarr

        n0, t0 = n_used + 1, step(last_term, n_used)
        if n0 % 2:
            result = np.where(done, result, result + t0)
            n0, t0 = n0 + 1, step(t0, n0)
        for i in np.flatnonzero(~done):
            zi = float(zarr[i])
            if zi > 0:
                result[i] += _tail_positive(a, b, zi, n0, float(t0[i]))
            else:
                result[i] += _tail_alternating(a, b, zi, n0, float(t0[i]))
    return float(result[0]) if scalar else result.reshape(shape)


def _direct_sum(a, b, z, rtol, limit, block=64):
    """Blockwise direct summation of the series up to term index ``limit``.

    Returns ``(sums, n_last, t_last, done)`` where ``t_last`` is the term with
    index ``n_last`` (the last one added) for rows that did not converge.
    """
    m = z.size
    sums = np.ones(m)
    done = z == 0
    last = np.ones(m)
    prev_tiny = np.zeros((m, 2), dtype=bool)
    n = 0
    while n < limit and not done.all():
        idx = np.arange(n, n + block, dtype=float)
        ratios = np.prod(a[:, None] + idx, axis=0) / np.prod(b[:, None] + idx, axis=0) / (idx + 1)
        live = np.flatnonzero(~done)
        terms = last[live, None] * np.cumprod(ratios[None, :] * z[live, None], axis=1)
        running = sums[live, None] + np.cumsum(terms, axis=1)
        tiny = np.abs(terms) <= rtol * np.abs(running)
        ext = np.concatenate([prev_tiny[live], tiny], axis=1)
        three = ext[:, 2:] & ext[:, 1:-1] & ext[:, :-2]
        hit = three.any(axis=1)
        stop = np.where(hit, np.argmax(three, axis=1) + 1, block)
        for row, i in enumerate(live):
            sums[i] = math.fsum([sums[i], *terms[row, : stop[row]]])
        done[live[hit]] = True
        last[live] = terms[:, -1]
        prev_tiny[live] = tiny[:, -2:]
        n += block
    return sums, n, last, done


def verify_gauss_legendre(z: float, k: int) -> float:
    """Relative residual of the Gauss-Legendre multiplication formula.

    ``Gamma(kz) = (2 pi)^((1-k)/2) k^(kz-1/2) prod_{j<k} Gamma(z + j/k)``,
    compared in log space.
    """
    if z <= 0:
        raise ValueError("z must be positive")
    if not 1 <= k <= 8:
        raise ValueError("k must lie in [1, 8]")
    lhs = signed_log_gamma(k * z).log_abs
    rhs = 0.5 * (1 - k) * math.log(2 * math.pi) + (k * z - 0.5) * math.log(k)
    rhs += math.fsum(signed_log_gamma(z + j / k).log_abs for j in range(k))
    return abs(math.expm1(rhs - lhs))
