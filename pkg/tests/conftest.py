"""Shared independent oracles (mpmath) and hypothesis settings."""
from collections import Counter
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def _mpf(q: Fraction) -> mp.mpf:
    return mp.mpf(q.numerator) / q.denominator


def _cancel(a, b):
    ca, cb = Counter(a), Counter(b)
    common = ca & cb
    return list((ca - common).elements()), list((cb - common).elements())


def mellin_gamma_params(kind: str, s=None, p=None, r=None):
    """Gamma parameters of the Mellin transform, read off the moments by Gauss multiplication.

    FC_s(n) = Gamma((s+1)n+1) / (Gamma(n+1) Gamma(sn+2)) and
    R_{p,r}(n) = r Gamma(pn+r) / (Gamma(n+1) Gamma((p-1)n+r+1)), written with sigma = n+1.
    """
    if kind == "fc":
        a = [Fraction(1 + j, s + 1) - 1 for j in range(s)]
        b = [Fraction(2 + i, s) - 1 for i in range(s)]
        K = Fraction((s + 1) ** (s + 1), s**s)
    else:
        a = [Fraction(r + j, p) - 1 for j in range(p)]
        b = [Fraction(0)] + [Fraction(r + 1 + i, p - 1) - 1 for i in range(p - 1)]
        K = Fraction(p**p, (p - 1) ** (p - 1))
    a, b = _cancel(a, b)
    return a, b, K


def mp_density(kind: str, x, *, s=None, p=None, r=None, dps: int = 25):
    """Density as a Meijer G-function evaluated by mpmath, normalised to unit mass."""
    a, b, K = mellin_gamma_params(kind, s=s, p=p, r=r)
    with mp.workdps(dps):
        fa, fb, fK = [_mpf(v) for v in a], [_mpf(v) for v in b], _mpf(K)
        mass = mp.fprod(mp.gamma(1 + v) for v in fa) / mp.fprod(mp.gamma(1 + v) for v in fb)
        return mp.meijerg([[], fb], [fa, []], mp.mpf(x) / fK) / (fK * mass)


@pytest.fixture(scope="session")
def mp_oracle():
    return mp_density


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Collects one summary line per acceptance criterion for the terminal report."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def log(number: int, passed: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
