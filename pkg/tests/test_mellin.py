import math
import warnings
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import gammaln

from fussraney.combinatorics import fc_number, raney_number
from fussraney.density import DomainError
from fussraney.fc_density import build_fc_spec, fc_density_closed
from fussraney.mellin import (
    BetaFactor,
    GridFunction,
    LogCellMeasure,
    MassDriftWarning,
    beta_factor_at,
    beta_factor_measure,
    compare_oracle,
    convolve_measures,
    factor_list,
    mellin_convolve,
    oracle_constant,
    oracle_density,
)
from fussraney.raney_density import build_raney_spec, raney_density_closed


def test_beta_factor_examples():
    f = BetaFactor(F(-1, 2), F(1))
    assert f.endpoint_exponent == F(1, 2)
    # x^(-1/2) (1-x)^(1/2) / Gamma(3/2) at 1/4, reference from mpmath
    assert beta_factor_at(f, 0.25) == pytest.approx(1.95441004761167968634553849135, rel=1e-14)
    assert BetaFactor(F(-2, 3), F(2, 3)).endpoint_exponent == F(1, 3)
    with pytest.raises(DomainError):
        beta_factor_at(f, [0.5, 1.0])


def test_beta_factor_rejects_bad_parameters():
    with pytest.raises(ValueError):
        BetaFactor(F(1), F(1))
    with pytest.raises(ValueError):
        BetaFactor(F(-1), F(2))


@given(st.fractions(F(-9, 10), F(3)), st.fractions(F(1, 10), F(3)))
def test_beta_factor_mass_is_mellin_at_one(a, gap):
    f = BetaFactor(a, a + gap)
    m = beta_factor_measure(f, 1e-3, 20000)
    assert m.total_mass == pytest.approx(f.mass, rel=1e-12)
    assert np.all(m.masses >= 0)


def test_factor_counts():
    fc1 = factor_list(build_fc_spec(1))
    assert fc1 == [BetaFactor(F(-1, 2), F(1))]
    assert len(factor_list(build_fc_spec(2))) == 2
    assert len(factor_list(build_raney_spec(3, 3))) == 2
    for p in range(2, 6):
        for r in range(1, p):
            fs = factor_list(build_raney_spec(p, r))
            assert len(fs) == p
            assert fs[0] == BetaFactor(F(r - p, p), F(0))


@pytest.mark.parametrize("spec", [build_fc_spec(s) for s in range(1, 5)] + [build_raney_spec(p, r) for p in range(2, 5) for r in range(1, p + 1)], ids=lambda s: s.label)
def test_factor_mellin_matches_moments(spec):
    # C K^n prod Gamma(1+n+a)/Gamma(1+n+b) reproduces the integer moments
    fs = factor_list(spec)
    C, K = oracle_constant(spec), spec.support_upper
    fam = spec.family
    for n in range(6):
        log_m = sum(gammaln(1 + n + float(f.a)) - gammaln(1 + n + float(f.b)) for f in fs)
        got = C * K**n * math.exp(log_m)
        exact = fc_number(fam.s, n) if fam.kind == "fc" else raney_number(fam.p, fam.r, n)
        assert got == pytest.approx(exact, rel=1e-11)


def test_factor_list_rejects_quasi_measure():
    with pytest.raises(ValueError):
        factor_list(build_raney_spec(3, 4))


def _uniform_on_log_grid(n=2000, lo=1e-6):
    x = np.geomspace(lo, 1.0, n)
    return GridFunction(x, np.ones_like(x), 1.0)


def test_uniform_times_uniform_is_minus_log():
    u = _uniform_on_log_grid()
    h = mellin_convolve(u, u)
    x, v = h.grid, h.values
    step = math.log(1e6) / 1999
    keep = (x > 1e-3) & (x < 0.5)
    # point samples used as cell masses: a Riemann sum, off by at most one step
    assert np.max(np.abs(v[keep] + np.log(x[keep]))) <= 1.01 * step


def test_grid_function_validation():
    x = np.linspace(0.01, 1, 100)
    with pytest.raises(ValueError):
        GridFunction(x[:10], x[:10], 1.0)
    with pytest.raises(ValueError):
        GridFunction(x[::-1], x, 1.0)
    with pytest.raises(ValueError):
        GridFunction(x, x, 0.5)
    with pytest.raises(ValueError):
        GridFunction(x, np.full_like(x, np.nan), 1.0)
    with pytest.raises(ValueError):
        mellin_convolve(GridFunction(x, x, 1.0), GridFunction(x, x, 1.0))
    g = GridFunction(x, x, 1.0)
    with pytest.raises(ValueError):
        g.values[0] = 1.0


def test_point_mass_at_one_is_identity():
    f = BetaFactor(F(-1, 3), F(1, 2))
    m = beta_factor_measure(f, 1e-3, 5000)
    delta = LogCellMeasure(1e-3, 0.0, np.r_[1.0, np.zeros(4999)], 0.0)
    out = convolve_measures(m, delta)
    np.testing.assert_array_equal(out.masses, m.masses)
    assert out.tail == pytest.approx(m.tail, abs=1e-15)


@given(st.integers(10, 400), st.floats(0.0, 0.3))
def test_convolution_mass_telescopes(n, t):
    rng = np.random.default_rng(n)
    m1 = LogCellMeasure(0.01, 0.5, rng.random(n), t)
    m2 = LogCellMeasure(0.01, 0.5, rng.random(n), 0.1)
    with warnings.catch_warnings():
        warnings.simplefilter("error", MassDriftWarning)
        out = convolve_measures(m1, m2)
    assert out.total_mass == pytest.approx(m1.total_mass * m2.total_mass, rel=1e-12)
    assert np.all(out.masses >= 0)


def test_step_mismatch_rejected():
    a = LogCellMeasure(0.01, 0.5, np.ones(5), 0.0)
    b = LogCellMeasure(0.02, 0.5, np.ones(5), 0.0)
    with pytest.raises(ValueError):
        convolve_measures(a, b)


@pytest.mark.parametrize("s", [1, 2])
def test_oracle_matches_fc_closed_forms(s):
    spec = build_fc_spec(s)
    o = oracle_density(spec, 2048)
    K = spec.support_upper
    keep = (o.grid > 0.05 * K) & (o.grid < 0.95 * K)
    ref = fc_density_closed(s, o.grid[keep])
    assert np.max(np.abs(o.values[keep] - ref) / ref) < 1e-4


@pytest.mark.parametrize("case", [(2, 2), (3, 2)])
def test_oracle_matches_raney_closed_forms(case):
    spec = build_raney_spec(*case)
    o = oracle_density(spec, 2048)
    K = spec.support_upper
    keep = (o.grid > 0.05 * K) & (o.grid < 0.95 * K)
    ref = raney_density_closed(case, o.grid[keep])
    assert np.max(np.abs(o.values[keep] - ref) / ref) < 3e-4


@pytest.mark.parametrize("spec", [build_fc_spec(3), build_raney_spec(4, 1), build_raney_spec(4, 3)], ids=lambda s: s.label)
def test_oracle_is_nonnegative_and_close(spec):
    cmp = compare_oracle(spec, grid_size=1024)
    assert cmp.min_oracle >= 0
    assert cmp.rel_l1 < 1e-3
    assert cmp.abs_diff.shape == cmp.grid.shape


def test_oracle_grid_shape():
    spec = build_fc_spec(2)
    o = oracle_density(spec, 512)
    assert len(o) == 512
    assert o.upper == spec.support_upper
    logs = np.diff(np.log(o.grid))
    np.testing.assert_allclose(logs, logs[0], rtol=1e-9)
    with pytest.raises(ValueError):
        oracle_density(spec, 255)
