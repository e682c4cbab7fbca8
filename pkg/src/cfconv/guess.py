"""Fit minimal linear recurrences with constant coefficients to exact data.

The workhorse is a fraction-free Berlekamp-Massey over the integers (rational
data is first scaled by a common denominator, which leaves recurrences
unchanged).  :func:`guess_recurrence_hankel` solves the same problem by exact
elimination on the Hankel-type system, order by order; it is cubic and only
meant as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cfseq import CFiniteSequence, to_gf
try:  # GMP integers make the big-integer BM roughly 8x faster
    from gmpy2 import gcd as _gcd
    from gmpy2 import mpz as _int
except ImportError:  # pragma: no cover
    _gcd = math.gcd
    _int = int

from .ratcore import (
    Number,
    Polynomial,
    RationalFunction,
    from_coprime,
    lcm_of_denominators,
)

__all__ = [
    "GuessResult",
    "InsufficientDataError",
    "guess_recurrence",
    "guess_gf",
    "guess_rational",
    "guess_recurrence_hankel",
    "berlekamp_massey",
]


class InsufficientDataError(ValueError):
    """Fewer than ``2*bound + 1`` terms were supplied."""


@dataclass(frozen=True)
class GuessResult:
    """A fitted recurrence.

    ``sequence`` is ``None`` exactly when the data is all zero; that case has
    ``order_found == 0`` and generating function ``0/1``.
    """

    sequence: CFiniteSequence | None
    order_found: int
    terms_used: int
    certified: bool

    @property
    def is_zero(self) -> bool:
        return self.sequence is None

    @property
    def gf(self) -> RationalFunction:
        if self.sequence is None:
            return RationalFunction(Polynomial(), Polynomial([1]))
        return to_gf(self.sequence)


def _as_integers(data: Sequence[Number]) -> list[int]:
    fr = [Fraction(v) for v in data]
    scale = lcm_of_denominators(fr)
    return [(v * scale).numerator for v in fr]


def berlekamp_massey(data: Sequence[Number]) -> tuple[int, list[int]]:
    """Shortest LFSR generating ``data``.

    Returns ``(L, C)`` with ``C`` an integer connection polynomial (ascending,
    ``C[0] != 0``, ``deg C <= L``) such that
    ``sum(C[i] * data[n - i] for i in range(len(C))) == 0`` for all
    ``L <= n < len(data)``.  ``C`` is only defined up to a scalar; it is kept
    primitive to stop coefficient growth.
    """
    s = [_int(v) for v in _as_integers(data)]
    zero = _int(0)
    conn = [_int(1)]
    prev = [_int(1)]
    length = 0
    gap = 1
    prev_disc = _int(1)
    for n in range(len(s)):
        disc = zero
        for i, c in enumerate(conn):
            if c:
                disc += c * s[n - i]
        if disc == 0:
            gap += 1
            continue
        # conn <- prev_disc * conn - disc * x^gap * prev
        new = [prev_disc * c for c in conn]
        need = len(prev) + gap
        if need > len(new):
            new.extend([zero] * (need - len(new)))
        for i, c in enumerate(prev):
            if c:
                new[i + gap] -= disc * c
        while new and new[-1] == 0:
            new.pop()
        g = _gcd(*new)
        if g > 1:
            new = [c // g for c in new]
        if 2 * length <= n:
            prev, prev_disc = conn, disc
            length = n + 1 - length
            gap = 1
        else:
            gap += 1
        conn = new
    return length, [int(c) for c in conn]


def _check_length(data: Sequence, bound: int) -> None:
    if bound < 0:
        raise ValueError("order bound must be nonnegative")
    if len(data) < 2 * bound + 1:
        raise InsufficientDataError(
            f"need at least {2 * bound + 1} terms for order bound {bound}, got {len(data)}"
        )


def guess_recurrence(
    data: Sequence[Number], max_order: int, *, a_priori: bool = False
) -> GuessResult | None:
    """Minimal recurrence of order ``<= max_order`` valid on all of ``data``.

    The recurrence must hold from index ``order`` onwards (no transient head).
    Returns ``None`` when there is none.  Pass ``a_priori=True`` when
    ``max_order`` is a proven bound on the true order, which makes the fit a
    certificate.
    """
    _check_length(data, max_order)
    data = [Fraction(v) for v in data]
    length, conn = berlekamp_massey(data)
    if length == 0:
        return GuessResult(None, 0, len(data), a_priori)
    if length > max_order or len(conn) - 1 != length:
        return None
    c0 = conn[0]
    coeffs = [Fraction(-c, c0) for c in conn[1:]]
    seq = CFiniteSequence(coeffs, data[:length])
    return GuessResult(seq, length, len(data), a_priori)


def guess_gf(data: Sequence[Number], max_den_degree: int) -> RationalFunction | None:
    """Proper rational GF with denominator degree ``<= max_den_degree``."""
    result = guess_recurrence(data, max_den_degree)
    return None if result is None else result.gf


def guess_rational(data: Sequence[Number], bound: int) -> RationalFunction | None:
    """Rational function of linear complexity ``<= bound`` matching ``data``.

    Unlike :func:`guess_gf` this accepts a finite transient, i.e. the result
    may be improper (``1``, or ``1 + x/(1 - x)``-like shapes reduced to one
    fraction).  The denominator degree is ``<= bound`` and the numerator
    degree is ``< bound``.  The result is reduced by minimality, so no gcd is
    computed; that matters at degree ~200.
    """
    _check_length(data, bound)
    data = [Fraction(v) for v in data]
    length, conn = berlekamp_massey(data)
    if length > bound:
        return None
    if length == 0:
        return RationalFunction(Polynomial(), Polynomial([1]))
    c0 = conn[0]
    den = Polynomial([Fraction(c, c0) for c in conn])
    num = _truncated_product(data[:length], den, length)
    return from_coprime(num, den)


def _truncated_product(prefix: list[Fraction], den: Polynomial, n: int) -> Polynomial:
    out = []
    q = den.coeffs
    for j in range(n):
        acc = Fraction(0)
        for i in range(min(j, len(q) - 1) + 1):
            acc += q[i] * prefix[j - i]
        out.append(acc)
    return Polynomial(out)


# ---------------------------------------------------------------------------
# slow route: exact elimination, one order at a time


def _bareiss_echelon(rows: list[list[int]], ncols: int) -> list[tuple[int, list[int]]]:
    """Fraction-free row echelon form; returns ``(pivot column, row)`` pairs
    plus, as pivot column ``-1``, any row left with only its last entry."""
    m = [r[:] for r in rows]
    r = 0
    prev = 1
    pivots = []
    for col in range(ncols - 1):
        p = next((i for i in range(r, len(m)) if m[i][col]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][col]
        for i in range(r + 1, len(m)):
            f = m[i][col]
            row_i = m[i]
            row_r = m[r]
            for j in range(col + 1, ncols):
                q, rem = divmod(piv * row_i[j] - f * row_r[j], prev)
                assert rem == 0, "Bareiss division must be exact"
                row_i[j] = q
            row_i[col] = 0
        pivots.append((col, m[r]))
        prev = piv
        r += 1
    for i in range(r, len(m)):
        if m[i][ncols - 1]:
            pivots.append((-1, m[i]))
    return pivots


def _solve_with_last_nonzero(pivots, nvars: int) -> list[Fraction] | None:
    if any(col == -1 for col, _ in pivots):
        return None
    pivot_cols = {col for col, _ in pivots}
    free = [j for j in range(nvars) if j not in pivot_cols]
    trials = [dict()] + [{j: 1} for j in free]
    for assign in trials:
        x = [Fraction(assign.get(j, 0)) for j in range(nvars)]
        for col, row in reversed(pivots):
            acc = Fraction(row[nvars])
            for j in range(col + 1, nvars):
                if row[j]:
                    acc -= row[j] * x[j]
            x[col] = acc / row[col]
        if x[-1] != 0:
            return x
    return None


def guess_recurrence_hankel(data: Sequence[Number], max_order: int) -> GuessResult | None:
    """Same contract as :func:`guess_recurrence`, by exact linear algebra."""
    _check_length(data, max_order)
    fr = [Fraction(v) for v in data]
    s = _as_integers(fr)
    if not any(s):
        return GuessResult(None, 0, len(fr), False)
    for d in range(1, max_order + 1):
        rows = [[s[n - i] for i in range(1, d + 1)] + [s[n]] for n in range(d, len(s))]
        x = _solve_with_last_nonzero(_bareiss_echelon(rows, d + 1), d)
        if x is not None:
            return GuessResult(CFiniteSequence(x, fr[:d]), d, len(fr), False)
    return None
