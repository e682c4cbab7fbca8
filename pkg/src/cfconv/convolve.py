"""Binomial convolutions of C-finite sequences and their certified GFs.

For sequences ``a`` and ``b`` of orders ``d`` and ``d'`` the binomial
convolution

    C(n) = sum_{k=0}^{n} binom(n, k) a(k) b(n - k)

corresponds to the product of exponential generating functions, so it is again
C-finite, of order at most ``d*d'`` (at most ``d(d+1)/2`` when ``a == b``).
With that bound ``N`` known in advance, fitting ``2N + 1`` brute-force terms is
a proof of the resulting identity.  A few extra guard terms are compared as
well; a mismatch there can only mean an arithmetic bug.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence, Union

from .cfseq import CFiniteSequence, from_gf, seq_terms, to_gf
from .guess import guess_rational, guess_recurrence
from .ratcore import RationalFunction, format_rational, lcm_of_denominators, series_expand

__all__ = [
    "ConvolutionSpec",
    "IdentityResult",
    "InternalConsistencyError",
    "binomial_conv_terms",
    "conv_order_bound",
    "self_convolution_identity",
    "cross_convolution_identity",
    "derive",
    "minimal_form",
]

Kind = Literal["self", "cross"]
Operand = Union[RationalFunction, CFiniteSequence]

DEFAULT_GUARD = 10


class InternalConsistencyError(RuntimeError):
    """A proven degree bound was violated: the fitter or the arithmetic is buggy."""

    def __init__(self, message: str, terms: Sequence[Fraction], bound: int):
        super().__init__(message)
        self.terms = list(terms)
        self.bound = bound


@dataclass(frozen=True)
class ConvolutionSpec:
    kind: Kind
    a: CFiniteSequence
    b: CFiniteSequence | None = None
    guard_terms: int = DEFAULT_GUARD

    def __post_init__(self):
        if self.kind not in ("self", "cross"):
            raise ValueError(f"unknown convolution kind {self.kind!r}")
        if self.guard_terms < 0:
            raise ValueError("guard_terms must be >= 0")
        if self.kind == "cross" and self.b is None:
            raise ValueError("a cross convolution needs two operands")


@dataclass(frozen=True)
class IdentityResult:
    gf: RationalFunction
    order_bound: int
    order_found: int
    terms_generated: int
    guard_verified: int
    kind: Kind = "self"
    operands: tuple[str, ...] = field(default=())

    def __str__(self) -> str:
        return format_rational(self.gf)


def binomial_conv_terms(
    a: CFiniteSequence, b: CFiniteSequence, n_terms: int
) -> list[Fraction]:
    """``[C(0), ..., C(n_terms - 1)]`` by direct summation over Pascal rows."""
    if n_terms <= 0:
        return []
    ta = seq_terms(a, n_terms)
    tb = ta if b is a else seq_terms(b, n_terms)
    # work on integers: C scales by (scale_a * scale_b)
    sa = lcm_of_denominators(ta)
    sb = sa if tb is ta else lcm_of_denominators(tb)
    ia = [(v * sa).numerator for v in ta]
    ib = ia if tb is ta else [(v * sb).numerator for v in tb]
    scale = sa * sb
    out = []
    row = [1]
    for n in range(n_terms):
        acc = 0
        for k in range(n + 1):
            x = ia[k]
            if x:
                y = ib[n - k]
                if y:
                    acc += row[k] * x * y
        out.append(Fraction(acc, scale))
        row = [1] + [row[k] + row[k + 1] for k in range(n)] + [1]
    return out


def conv_order_bound(d: int, d_prime: int | None = None, kind: Kind = "cross") -> int:
    if d < 1:
        raise ValueError("order must be >= 1")
    if kind == "self":
        return d * (d + 1) // 2
    if d_prime is None or d_prime < 1:
        raise ValueError("cross bound needs a second order >= 1")
    return d * d_prime


def minimal_form(s: Operand) -> CFiniteSequence:
    """Reduce an operand to a recurrence of minimal order.

    A recurrence of declared order ``d`` is refitted from ``2d + 1`` of its own
    terms, which is a certified fit since ``d`` bounds the true order.
    """
    if isinstance(s, RationalFunction):
        s = from_gf(s)
    result = guess_recurrence(seq_terms(s, 2 * s.order + 1), s.order, a_priori=True)
    if result is None:  # pragma: no cover - impossible for a valid sequence
        raise InternalConsistencyError(
            "operand does not satisfy its own recurrence", seq_terms(s, 2 * s.order + 1), s.order
        )
    if result.sequence is None:
        raise ValueError("operand is the zero sequence; its convolutions are trivially zero")
    return result.sequence


def _certify(
    a: CFiniteSequence, b: CFiniteSequence, bound: int, guard: int, kind: Kind
) -> IdentityResult:
    if guard < 0:
        raise ValueError("guard must be >= 0")
    n_fit = 2 * bound + 1
    total = n_fit + guard
    terms = binomial_conv_terms(a, b, total)
    gf = guess_rational(terms[:n_fit], bound)
    if gf is None:
        raise InternalConsistencyError(
            f"no rational fit within the proven bound {bound}", terms, bound
        )
    if series_expand(gf, total) != terms:
        raise InternalConsistencyError(
            f"fitted generating function disagrees with the guard terms (bound {bound})",
            terms,
            bound,
        )
    operands = (format_rational(to_gf(a)),) if kind == "self" else (
        format_rational(to_gf(a)),
        format_rational(to_gf(b)),
    )
    return IdentityResult(
        gf=gf,
        order_bound=bound,
        order_found=gf.den.degree or 0,
        terms_generated=total,
        guard_verified=guard,
        kind=kind,
        operands=operands,
    )


def self_convolution_identity(R: Operand, guard: int = DEFAULT_GUARD) -> IdentityResult:
    """Certified GF of ``sum binom(n, k) a(k) a(n - k)``."""
    a = minimal_form(R)
    return _certify(a, a, conv_order_bound(a.order, kind="self"), guard, "self")


def cross_convolution_identity(
    R1: Operand, R2: Operand, guard: int = DEFAULT_GUARD
) -> IdentityResult:
    """Certified GF of ``sum binom(n, k) a(k) b(n - k)``."""
    a = minimal_form(R1)
    b = minimal_form(R2)
    return _certify(a, b, conv_order_bound(a.order, b.order, "cross"), guard, "cross")


def derive(spec: ConvolutionSpec) -> IdentityResult:
    if spec.kind == "self":
        return self_convolution_identity(spec.a, spec.guard_terms)
    return cross_convolution_identity(spec.a, spec.b, spec.guard_terms)
