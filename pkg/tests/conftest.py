from __future__ import annotations

import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import strategies as st

from cfconv.cfseq import CFiniteSequence, to_gf
from cfconv.ratcore import Polynomial


# ---------------------------------------------------------------------------
# oracles: deliberately naive and independent of the package's code paths


def brute_binomial_conv(a_terms, b_terms, n_terms):
    """Direct sum_k binom(n,k) a(k) b(n-k) with math.comb."""
    return [
        sum(comb(n, k) * Fraction(a_terms[k]) * Fraction(b_terms[n - k]) for k in range(n + 1))
        for n in range(n_terms)
    ]


def brute_terms(coeffs, initial, n_terms):
    """Plain recurrence unrolling in Fractions."""
    out = [Fraction(v) for v in initial][:n_terms]
    d = len(coeffs)
    while len(out) < n_terms:
        n = len(out)
        out.append(sum(Fraction(coeffs[i]) * out[n - 1 - i] for i in range(d)))
    return out


def brute_series(num, den, n_terms):
    """Series of num/den by solving den * s = num coefficient by coefficient."""
    num = [Fraction(c) for c in num]
    den = [Fraction(c) for c in den]
    s = []
    for j in range(n_terms):
        rhs = num[j] if j < len(num) else Fraction(0)
        rhs -= sum(den[i] * s[j - i] for i in range(1, min(j, len(den) - 1) + 1))
        s.append(rhs / den[0])
    return s


def kbonacci_loop(k, n_terms):
    t = [0] * n_terms
    if n_terms > 1:
        t[1] = 1
    for i in range(2, n_terms):
        t[i] = sum(t[max(0, i - k):i])
    return t


# ---------------------------------------------------------------------------
# random instances


def random_sequence(rng: random.Random, max_order: int, lo: int = -5, hi: int = 5):
    """Random nonzero integer C-finite sequence, reduced to minimal order."""
    while True:
        d = rng.randint(1, max_order)
        coeffs = [rng.randint(lo, hi) for _ in range(d)]
        if coeffs[-1] == 0:
            continue
        initial = [rng.randint(lo, hi) for _ in range(d)]
        if not any(initial):
            continue
        f = to_gf(CFiniteSequence(coeffs, initial))
        order = f.den.degree
        # shrink to the minimal representation (the reduced GF)
        init = brute_series(f.num.coeffs, f.den.coeffs, order)
        return CFiniteSequence([-c for c in f.den.coeffs[1:]], init)


small_ints = st.integers(min_value=-6, max_value=6)
small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polynomials(draw, max_degree=5, elements=small_fractions):
    return Polynomial(draw(st.lists(elements, max_size=max_degree + 1)))


@st.composite
def cfinite_sequences(draw, max_order=4, elements=small_ints):
    d = draw(st.integers(min_value=1, max_value=max_order))
    coeffs = draw(st.lists(elements, min_size=d, max_size=d))
    last = draw(elements.filter(lambda v: v != 0))
    coeffs[-1] = last
    initial = draw(st.lists(elements, min_size=d, max_size=d))
    return CFiniteSequence(coeffs, initial)


@pytest.fixture
def rng():
    return random.Random(20210805)


# ---------------------------------------------------------------------------
# acceptance report: one PASS/FAIL line per criterion

_CRITERIA: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    _CRITERIA[number] = (title, status, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status, duration = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  ({duration:.2f} s)")
