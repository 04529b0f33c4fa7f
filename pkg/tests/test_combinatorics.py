import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from fussraney.combinatorics import (
    OutsideSigmaError,
    SequenceSpec,
    check_raney_relations,
    fc_number,
    first_two_moments,
    raney_moment_real,
    raney_number,
    sequence,
)


def brute_binom(n, k):
    # Pascal's triangle, sharing nothing with math.comb
    row = [1]
    for _ in range(n):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    return row[k]


@pytest.mark.parametrize(
    "s, expected",
    [
        (1, [1, 1, 2, 5, 14, 42, 132, 429]),
        (2, [1, 1, 3, 12, 55, 273]),
        (3, [1, 1, 4, 22, 140, 969]),
    ],
)
def test_fc_printed_sequences(s, expected):
    assert [fc_number(s, n) for n in range(len(expected))] == expected


def test_catalan_seventh_term_is_429_not_427():
    assert fc_number(1, 7) == 429


@pytest.mark.parametrize(
    "p, r, expected",
    [(4, 2, [1, 2, 9, 52, 340, 2394]), (6, 3, [1, 3, 21, 190, 1950, 21576])],
)
def test_raney_printed_sequences(p, r, expected):
    assert [raney_number(p, r, n) for n in range(len(expected))] == expected


def test_spec_examples():
    assert fc_number(2, 3) == 12
    assert fc_number(3, 5) == 969
    assert fc_number(5, 0) == 1
    assert raney_number(4, 2, 3) == 52
    assert raney_number(6, 3, 4) == 1950
    assert raney_number(3, 1, 4) == 55


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        fc_number(0, 3)
    with pytest.raises(ValueError):
        raney_number(1, 1, 3)
    with pytest.raises(ValueError):
        raney_number(3, 0, 3)
    with pytest.raises(ValueError):
        SequenceSpec.fc(0)
    with pytest.raises(ValueError):
        SequenceSpec.raney(2, 0)


def test_large_values_are_exact():
    # n = 50, s = 8 overflows 64-bit integers by far
    value = fc_number(8, 50)
    assert value * (8 * 50 + 1) == brute_binom(9 * 50, 50)
    assert value > 2**64


@given(st.integers(1, 6), st.integers(0, 12))
def test_raney_reduces_to_fuss_catalan(s, n):
    assert raney_number(s + 1, 1, n) == fc_number(s, n)


@given(st.integers(2, 8), st.integers(1, 9), st.integers(0, 25))
def test_raney_matches_brute_force(p, r, n):
    num = r * brute_binom(p * n + r, n)
    assert num % (p * n + r) == 0
    assert raney_number(p, r, n) == num // (p * n + r)


@given(st.integers(2, 6), st.integers(0, 12))
def test_relations_hold(p, n_max):
    report = check_raney_relations(p, n_max)
    assert report.passed
    assert len(report.rows) == 2 * (n_max + 1)


def test_relation_report_examples():
    assert check_raney_relations(3, 6).passed
    rows = check_raney_relations(4, 7).rows
    assert any(r.n == 1 and r.lhs == fc_number(4, 2) for r in rows)
    catalan_shift = [raney_number(2, 2, n) for n in range(8)]
    assert catalan_shift == [1, 2, 5, 14, 42, 132, 429, 1430]


def test_relations_reject_bad_input():
    with pytest.raises(ValueError):
        check_raney_relations(1, 3)
    with pytest.raises(ValueError):
        check_raney_relations(3, -1)


def test_moment_real_examples():
    assert raney_moment_real(2, 1, 2) == 2.0
    assert raney_moment_real(4, 2, 4) == 340.0
    # mpmath at 30 digits gives exactly 14 here
    assert raney_moment_real(2.5, 1.5, 3) == pytest.approx(14.0, rel=1e-13)


@given(
    st.floats(0.6, 7.0),
    st.floats(0.05, 1.0),
    st.integers(0, 20),
)
def test_moment_real_against_mpmath(p, frac, n):
    r = frac * p
    if n * p + r - n + 1 <= 0:
        with pytest.raises(ValueError):
            raney_moment_real(p, r, n)
        return
    with mp.workdps(30):
        P, R = mp.mpf(p), mp.mpf(r)
        exact = R / (n * P + R) * mp.gamma(n * P + R + 1) / (mp.gamma(n + 1) * mp.gamma(n * P + R - n + 1))
    assert raney_moment_real(p, r, n) == pytest.approx(float(exact), rel=1e-11)


@given(st.integers(2, 7), st.integers(1, 7), st.integers(0, 20))
def test_moment_real_integer_path(p, r, n):
    if r > p:
        return
    value = raney_moment_real(float(p), float(r), n)
    assert value == pytest.approx(raney_number(p, r, n), rel=1e-12)


def test_moment_real_log_form_for_overflow():
    logm = raney_moment_real(7.5, 3.0, 400, log=True)
    assert math.isfinite(logm) and logm > 710
    assert raney_moment_real(7.5, 3.0, 40, log=True) == pytest.approx(
        math.log(raney_moment_real(7.5, 3.0, 40)), rel=1e-13
    )


@pytest.mark.parametrize("p, r", [(2, 3), (2, 0), (-1, 0.5), (2, -1)])
def test_moment_real_outside_sigma(p, r):
    with pytest.raises(OutsideSigmaError):
        raney_moment_real(p, r, 1)


@given(st.floats(0.5, 8.0), st.floats(0.01, 1.0))
def test_first_two_moments_real(p, frac):
    r = frac * p
    assert raney_moment_real(p, r, 1) == pytest.approx(r, rel=1e-12)
    if 2 * p + r - 1 > 0:
        assert raney_moment_real(p, r, 2) == pytest.approx(r * (2 * p + r - 1) / 2, rel=1e-12)


def test_first_two_moments_exact():
    for p in range(2, 7):
        for r in range(1, p + 1):
            m1, m2 = first_two_moments(p, r)
            assert (Fraction(raney_number(p, r, 1)), Fraction(raney_number(p, r, 2))) == (m1, m2)
    assert first_two_moments(3, 2)[1] == 7 == raney_number(3, 2, 2)


def test_sequence_helper_and_labels():
    assert sequence(SequenceSpec.fc(2), 3) == [1, 1, 3, 12]
    assert SequenceSpec.raney(4, 2).label == "R_4,2"
    assert SequenceSpec.fc(3)(4) == 140
