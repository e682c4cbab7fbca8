"""Exact univariate polynomials and rational functions over Q.

Coefficients are :class:`fractions.Fraction` throughout; nothing here ever
touches floating point.  Polynomials store their coefficients in ascending
order, so ``Polynomial([1, -1, -1])`` is ``1 - x - x^2``.  The zero polynomial
has an empty coefficient tuple and ``degree`` ``None``.

Rational functions are kept in the canonical form used for generating
functions: the denominator has constant term exactly 1 and numerator and
denominator are coprime.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction, str]

__all__ = [
    "Polynomial",
    "RationalFunction",
    "ParseError",
    "X",
    "poly_add",
    "poly_mul",
    "poly_gcd",
    "normalize",
    "series_expand",
    "parse_poly",
    "parse_rational",
    "format_poly",
    "format_rational",
    "format_poly_latex",
    "format_rational_latex",
    "format_coeff",
]


def _to_fraction(c: Number) -> Fraction:
    if type(c) is Fraction:
        return c
    return Fraction(c)


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    m = 1
    for v in values:
        q = v.denominator
        if q != 1:
            m = m * q // math.gcd(m, q)
    return m


class Polynomial:
    """Immutable polynomial in ``x`` with rational coefficients."""

    __slots__ = ("coeffs",)

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [_to_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (Polynomial, (self.coeffs,))

    @classmethod
    def constant(cls, c: Number) -> Polynomial:
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c: Number = 1) -> Polynomial:
        return cls([0] * k + [c])

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    def __call__(self, x: Number) -> Fraction:
        x = _to_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __neg__(self) -> Polynomial:
        return Polynomial([-c for c in self.coeffs])

    def __add__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return poly_add(self, other)

    __radd__ = __add__

    def __sub__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return poly_add(self, -other)

    def __rsub__(self, other) -> Polynomial:
        return Polynomial([other]) - self

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        c = _to_fraction(other)
        return Polynomial([a * c for a in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Polynomial([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv = 1 / other.lc
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if c:
                f = c * inv
                quot[i - dq] = f
                for j, oc in enumerate(other.coeffs):
                    rem[i - dq + j] -= f * oc
        return Polynomial(quot), Polynomial(rem[:dq])

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def monic(self) -> Polynomial:
        if not self:
            return self
        inv = 1 / self.lc
        return Polynomial([c * inv for c in self.coeffs])

    def truncate(self, n: int) -> Polynomial:
        """Drop every term of degree >= n."""
        return Polynomial(self.coeffs[:n])

    def shift(self, k: int) -> Polynomial:
        """Multiply by ``x**k``."""
        if not self:
            return self
        return Polynomial([0] * k + list(self.coeffs))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)


X = Polynomial([0, 1])


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    a, b = p.coeffs, q.coeffs
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return Polynomial(out)


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if not p or not q:
        return Polynomial()
    a, b = p.coeffs, q.coeffs
    # integer fast path: Fraction arithmetic is far slower than int
    if p.is_integral() and q.is_integral():
        ai = [c.numerator for c in a]
        bi = [c.numerator for c in b]
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(ai):
            if x:
                for j, y in enumerate(bi):
                    out[i + j] += x * y
        return Polynomial(out)
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return Polynomial(out)


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm over Q."""
    if not p and not q:
        raise ValueError("gcd(0, 0) is undefined")
    while q:
        p, q = q, p % q
    return p.monic()


@dataclass(frozen=True)
class RationalFunction:
    """``num/den`` with ``den(0) == 1`` and ``gcd(num, den) == 1``.

    Build instances with :func:`normalize`; the constructor only checks the
    cheap part of the invariant (the constant term of the denominator).
    """

    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.den[0] != 1:
            raise ValueError("denominator must have constant term 1")

    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_proper(self) -> bool:
        return not self.num or self.num.degree < (self.den.degree or 0)

    def series(self, n_terms: int) -> list[Fraction]:
        return series_expand(self, n_terms)

    def __str__(self) -> str:
        return format_rational(self)


def _rescale(num: Polynomial, den: Polynomial) -> RationalFunction:
    c = den[0]
    if c == 1:
        return RationalFunction(num, den)
    inv = 1 / c
    return RationalFunction(num * inv, den * inv)


def normalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Reduce ``num/den`` and scale it so that the denominator starts with 1."""
    if den[0] == 0:
        raise ValueError("generating function has no power-series expansion at 0")
    if not num:
        return RationalFunction(Polynomial(), Polynomial([1]))
    g = poly_gcd(num, den)
    if g.degree:
        num, den = num // g, den // g
    return _rescale(num, den)


def from_coprime(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Like :func:`normalize` but trusts the caller that ``gcd(num, den) == 1``.

    Used where coprimality is guaranteed by construction (a minimal fit), since
    a rational Euclid at degree ~200 is prohibitively slow.
    """
    if den[0] == 0:
        raise ValueError("generating function has no power-series expansion at 0")
    if not num:
        return RationalFunction(Polynomial(), Polynomial([1]))
    return _rescale(num, den)


def series_expand(f: RationalFunction, n_terms: int) -> list[Fraction]:
    """First ``n_terms`` Taylor coefficients of ``f`` at 0, by long division."""
    if n_terms <= 0:
        return []
    if not f.num:
        return [Fraction(0)] * n_terms
    q = f.den.coeffs
    if f.den.is_integral():
        scale = lcm_of_denominators(f.num.coeffs)
        p = [(c * scale).numerator for c in f.num.coeffs]
        qi = [c.numerator for c in q]
        out: list = []
        for j in range(n_terms):
            acc = p[j] if j < len(p) else 0
            for i in range(1, min(j, len(qi) - 1) + 1):
                acc -= qi[i] * out[j - i]
            out.append(acc)
        return [Fraction(v, scale) for v in out]
    p = f.num.coeffs
    out = []
    for j in range(n_terms):
        acc = p[j] if j < len(p) else Fraction(0)
        for i in range(1, min(j, len(q) - 1) + 1):
            acc -= q[i] * out[j - i]
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# text syntax

class ParseError(ValueError):
    def __init__(self, text: str, pos: int, expected: str):
        self.text = text
        self.pos = pos
        self.expected = expected
        found = repr(text[pos]) if pos < len(text) else "end of input"
        super().__init__(f"parse error at position {pos}: expected {expected}, found {found}")


_TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^()])|([A-Za-z_]\w*))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(text, pos, "a number, 'x', an operator or a parenthesis")
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            op = "^" if m.group(2) == "**" else m.group(2)
            tokens.append(("op", op, start))
        else:
            if m.group(3) != "x":
                raise ParseError(text, start, "the variable 'x'")
            tokens.append(("x", "x", start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    # values are (numerator, denominator) pairs of Polynomials

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: str):
        raise ParseError(self.text, self.peek()[2], expected)

    def parse(self):
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail("an operator or end of input")
        return value

    def expr(self):
        n, d = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            n2, d2 = self.term()
            if op == "+":
                n, d = n * d2 + n2 * d, d * d2
            else:
                n, d = n * d2 - n2 * d, d * d2
        return n, d

    def term(self):
        n, d = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in ("*", "/"):
                self.take()
                n2, d2 = self.unary()
                if val == "*":
                    n, d = n * n2, d * d2
                else:
                    if not n2:
                        raise ParseError(self.text, pos, "a nonzero divisor")
                    n, d = n * d2, d * n2
            elif kind == "x" or (kind == "op" and val == "("):
                # implicit multiplication: 2x, 3(1-x)
                n2, d2 = self.unary()
                n, d = n * n2, d * d2
            else:
                return n, d

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in ("+", "-"):
            self.take()
            n, d = self.unary()
            return (-n, d) if val == "-" else (n, d)
        return self.power()

    def power(self):
        n, d = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            kind, val, _ = self.peek()
            if kind != "num":
                self.fail("a nonnegative integer exponent")
            self.take()
            k = int(val)
            n, d = n**k, d**k
        return n, d

    def atom(self):
        kind, val, _ = self.peek()
        if kind == "num":
            self.take()
            return Polynomial([int(val)]), Polynomial([1])
        if kind == "x":
            self.take()
            return X, Polynomial([1])
        if kind == "op" and val == "(":
            self.take()
            value = self.expr()
            if self.peek()[1] != ")":
                self.fail("')'")
            self.take()
            return value
        self.fail("a number, 'x' or '('")


def parse_poly(text: str) -> Polynomial:
    """Parse a polynomial such as ``1 - 3*x - 2*x^2 + 4*x^3`` or ``1/2*x``."""
    n, d = _Parser(text).parse()
    if d.degree != 0:
        q, r = divmod(n, d)
        if r:
            raise ParseError(text, 0, "a polynomial (division by a non-constant)")
        return q
    return n * (1 / d[0])


def parse_rational(text: str) -> RationalFunction:
    """Parse a rational expression in ``x`` into canonical form."""
    n, d = _Parser(text).parse()
    return normalize(n, d)


def format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Polynomial) -> str:
    """Ascending-degree text form, e.g. ``1 - 3*x - 2*x^2 + 4*x^3``."""
    if not p:
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = format_coeff(mag)
        else:
            mono = "x" if k == 1 else f"x^{k}"
            body = mono if mag == 1 else f"{format_coeff(mag)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def format_rational(f: RationalFunction) -> str:
    num = format_poly(f.num)
    if f.den == 1:
        return num
    if sum(1 for c in f.num.coeffs if c) > 1 or "/" in num:
        num = f"({num})"
    return f"{num}/({format_poly(f.den)})"


def _latex_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return rf"\frac{{{c.numerator}}}{{{c.denominator}}}"


def format_poly_latex(p: Polynomial) -> str:
    if not p:
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = _latex_coeff(mag)
        else:
            mono = "x" if k == 1 else f"x^{{{k}}}"
            body = mono if mag == 1 else f"{_latex_coeff(mag)}\\,{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def format_rational_latex(f: RationalFunction) -> str:
    if f.den == 1:
        return format_poly_latex(f.num)
    return rf"\frac{{{format_poly_latex(f.num)}}}{{{format_poly_latex(f.den)}}}"


def coeffs_to_json(p: Polynomial) -> list[str]:
    return [format_coeff(c) for c in p.coeffs]


def coeffs_from_json(items: Sequence[Number]) -> Polynomial:
    return Polynomial([Fraction(str(c)) for c in items])
