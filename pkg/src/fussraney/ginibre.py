"""Monte-Carlo spectra of products of Ginibre matrices against ``P_s``.

For ``X = G_1 ... G_s`` with unit-variance entries, the squared singular
values divided by ``N^s`` have empirical moments converging to ``FC_s(n)``.
Every sample matrix product draws from its own Philox substream spawned from
the run seed, so results do not depend on the thread count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Literal, Optional

import numpy as np

from .combinatorics import fc_number
from .fc_density import build_fc_spec
from .moments import bin_masses

__all__ = [
    "MCConfig",
    "MCRunReport",
    "SpectrumBatch",
    "sample_ginibre",
    "sample_streams",
    "product_squared_singular_values",
    "empirical_vs_theory",
    "inverse_cdf_sample",
    "run_mc",
]

Ensemble = Literal["complex", "real"]
MOMENT_N_MAX = 6


@dataclass(frozen=True)
class MCConfig:
    """One Monte-Carlo experiment; ``seed`` determines the output completely."""

    s: int = 1
    N: int = 256
    samples: int = 200
    ensemble: Ensemble = "complex"
    seed: int = 20240101
    bins: int = 50
    threads: int = 1

    @staticmethod
    def problems(s, N, samples, ensemble, seed, bins, threads) -> list[str]:
        """All violated constraints for the given field values."""
        out = []
        if s < 1:
            out.append(f"s must be >= 1, got {s}")
        if N < 8:
            out.append(f"N must be >= 8, got {N}")
        if samples < 1:
            out.append(f"samples must be >= 1, got {samples}")
        if ensemble not in ("complex", "real"):
            out.append(f"ensemble must be 'complex' or 'real', got {ensemble!r}")
        if not 0 <= seed < 2**64:
            out.append(f"seed must be an unsigned 64-bit integer, got {seed}")
        if bins < 10:
            out.append(f"bins must be >= 10, got {bins}")
        if threads < 0:
            out.append(f"threads must be >= 0, got {threads}")
        return out

    def __post_init__(self):
        problems = self.problems(**asdict(self))
        if problems:
            raise ValueError("; ".join(problems))


def sample_ginibre(N: int, ensemble: Ensemble, rng: np.random.Generator) -> np.ndarray:
    """N x N Ginibre matrix with ``E|g|^2 = 1``."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if ensemble == "complex":
        scale = math.sqrt(0.5)
        return scale * (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N)))
    if ensemble == "real":
        return rng.standard_normal((N, N))
    raise ValueError(f"unknown ensemble {ensemble!r}")


def sample_streams(seed: int, samples: int) -> list[np.random.Generator]:
    """Independent Philox generators, one per sample index."""
    return [np.random.Generator(np.random.Philox(ss)) for ss in np.random.SeedSequence(seed).spawn(samples)]


def _one_sample(config: MCConfig, rng: np.random.Generator) -> Optional[np.ndarray]:
    X = sample_ginibre(config.N, config.ensemble, rng)
    for _ in range(config.s - 1):
        X = X @ sample_ginibre(config.N, config.ensemble, rng)
    try:
        sv = np.linalg.svd(X, compute_uv=False)
    except np.linalg.LinAlgError:
        return None
    return sv**2 / float(config.N) ** config.s


@dataclass(frozen=True)
class SpectrumBatch:
    """Rescaled squared singular values, one row per successful sample."""

    values: np.ndarray
    skipped: int

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()


def product_squared_singular_values(config: MCConfig, rng: Optional[np.random.Generator] = None) -> SpectrumBatch:
    """Draw ``config.samples`` products and return ``sigma^2 / N^s`` for each.

    Without ``rng`` every sample uses its own substream of ``config.seed`` and
    the work is spread over ``config.threads`` threads (0 means one per CPU).
    A supplied ``rng`` is consumed sequentially instead.
    """
    if rng is not None:
        rows = [_one_sample(config, rng) for _ in range(config.samples)]
    else:
        streams = sample_streams(config.seed, config.samples)
        workers = config.threads or None
        if workers == 1:
            rows = [_one_sample(config, g) for g in streams]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(lambda g: _one_sample(config, g), streams))
    good = [row for row in rows if row is not None]
    values = np.array(good) if good else np.empty((0, config.N))
    return SpectrumBatch(values, len(rows) - len(good))


@dataclass(frozen=True)
class MCRunReport:
    """Empirical spectrum of one run compared with ``P_s``."""

    s: int
    sample_count: int
    empirical_moments: tuple
    moment_std_errors: tuple
    exact_moments: tuple
    histogram_edges: tuple
    histogram_masses: tuple
    overflow_mass: float
    theory_masses: tuple
    l1_distance: float
    ks_distance: float
    negative_count: int
    skipped: int = 0
    config: Optional[MCConfig] = None

    def moment_z_scores(self, n_max: int = 4) -> list[float]:
        """``|empirical - exact| / standard error`` for ``n = 1..n_max``."""
        out = []
        for n in range(1, n_max + 1):
            se = self.moment_std_errors[n]
            diff = abs(self.empirical_moments[n] - self.exact_moments[n])
            out.append(diff / se if se > 0 else (0.0 if diff == 0 else math.inf))
        return out

    def moments_within(self, k: float = 5.0, n_max: int = 4) -> bool:
        return all(z <= k for z in self.moment_z_scores(n_max))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["moment_z_scores"] = self.moment_z_scores()
        return d


def empirical_vs_theory(
    samples,
    s: int,
    bins: int,
    *,
    n_max: int = MOMENT_N_MAX,
) -> MCRunReport:
    """Histogram, moment and distribution distances of samples against ``P_s``.

    ``samples`` may be flat or have one row per matrix; in the latter case the
    moment standard errors are taken across rows, since eigenvalues of one
    matrix are correlated.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise ValueError("no samples")
    rows = arr if arr.ndim == 2 else arr.reshape(-1, 1)
    flat = rows.ravel()
    spec = build_fc_spec(s)
    K = spec.support_upper

    powers = np.arange(n_max + 1)
    per_row = np.mean(rows[:, :, None] ** powers, axis=1)
    moments = per_row.mean(axis=0)
    if len(rows) > 1:
        se = per_row.std(axis=0, ddof=1) / math.sqrt(len(rows))
    else:
        se = np.zeros(n_max + 1)

    edges = np.linspace(0.0, K, bins + 1)
    counts, _ = np.histogram(flat, bins=edges)
    emp = counts / flat.size
    overflow = float(np.count_nonzero((flat > K) | (flat < 0)) / flat.size)
    theory = bin_masses(spec, edges)
    l1 = math.fsum(np.abs(emp - theory)) + overflow
    ks = float(np.max(np.abs(np.cumsum(emp) - np.cumsum(theory))))
    ks = max(ks, abs(math.fsum(emp) - 1.0))

    return MCRunReport(
        s=s,
        sample_count=int(flat.size),
        empirical_moments=tuple(float(m) for m in moments),
        moment_std_errors=tuple(float(v) for v in se),
        exact_moments=tuple(fc_number(s, n) for n in range(n_max + 1)),
        histogram_edges=tuple(float(e) for e in edges),
        histogram_masses=tuple(float(m) for m in emp),
        overflow_mass=overflow,
        theory_masses=tuple(float(m) for m in theory),
        l1_distance=float(l1),
        ks_distance=ks,
        negative_count=int(np.count_nonzero(flat < 0)),
    )


def inverse_cdf_sample(s: int, size: int, rng: np.random.Generator, *, grid: int = 2048) -> np.ndarray:
    """Draw from ``P_s`` by inverting a tabulated CDF.

    In ``u`` with ``x = K u^(s+1)`` the integrand ``P_s(x) dx/du`` is bounded,
    so an 8-point Gauss-Legendre rule per cell tabulates the CDF, which is then
    inverted by linear interpolation.
    """
    spec = build_fc_spec(s)
    K = spec.support_upper
    m = spec.exponent_denominator
    u = np.linspace(0.0, 1.0, grid + 1)
    nodes, weights = np.polynomial.legendre.leggauss(8)
    half = 0.5 * (u[1] - u[0])
    un = (0.5 * (u[:-1] + u[1:]))[:, None] + half * nodes
    integrand = spec(K * un**m) * K * m * un ** (m - 1)
    cdf = np.concatenate([[0.0], np.cumsum(half * integrand @ weights)])
    cdf /= cdf[-1]
    return K * np.interp(rng.random(size), cdf, u) ** m


def run_mc(config: MCConfig) -> MCRunReport:
    batch = product_squared_singular_values(config)
    report = empirical_vs_theory(batch.values, config.s, config.bins)
    return replace(report, skipped=batch.skipped, config=config)
