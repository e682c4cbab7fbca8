"""C-finite sequences: recurrence + initial terms, and the bridge to GFs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .ratcore import (
    Number,
    Polynomial,
    RationalFunction,
    coeffs_to_json,
    format_coeff,
    lcm_of_denominators,
    normalize,
    parse_poly,
    parse_rational,
    series_expand,
)

__all__ = [
    "Recurrence",
    "CFiniteSequence",
    "seq_terms",
    "to_gf",
    "from_gf",
    "sequence_from_json",
    "sequence_to_json",
    "load_sequence",
]


@dataclass(frozen=True)
class Recurrence:
    """``a(n) = c_1 a(n-1) + ... + c_d a(n-d)`` for ``n >= d``."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Sequence[Number]):
        cs = tuple(Fraction(c) for c in coeffs)
        if not cs:
            raise ValueError("a recurrence needs order >= 1")
        if cs[-1] == 0:
            raise ValueError("last recurrence coefficient must be nonzero")
        object.__setattr__(self, "coeffs", cs)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def characteristic(self) -> Polynomial:
        """The GF denominator ``1 - c_1 x - ... - c_d x^d``."""
        return Polynomial([1] + [-c for c in self.coeffs])


@dataclass(frozen=True)
class CFiniteSequence:
    recurrence: Recurrence
    initial: tuple[Fraction, ...]

    def __init__(self, recurrence: Recurrence | Sequence[Number], initial: Sequence[Number]):
        if not isinstance(recurrence, Recurrence):
            recurrence = Recurrence(recurrence)
        init = tuple(Fraction(c) for c in initial)
        if len(init) != recurrence.order:
            raise ValueError(
                f"need exactly {recurrence.order} initial terms, got {len(init)}"
            )
        object.__setattr__(self, "recurrence", recurrence)
        object.__setattr__(self, "initial", init)

    @property
    def order(self) -> int:
        return self.recurrence.order

    @property
    def is_zero(self) -> bool:
        return not any(self.initial)

    def terms(self, n_terms: int) -> list[Fraction]:
        return seq_terms(self, n_terms)

    def gf(self) -> RationalFunction:
        return to_gf(self)

    def __str__(self) -> str:
        rec = ", ".join(format_coeff(c) for c in self.recurrence.coeffs)
        ini = ", ".join(format_coeff(c) for c in self.initial)
        return f"CFiniteSequence([{rec}], [{ini}])"


def seq_terms(s: CFiniteSequence, n_terms: int) -> list[Fraction]:
    """Unroll the recurrence for ``[a(0), ..., a(n_terms - 1)]``."""
    if n_terms <= 0:
        return []
    d = s.order
    cs = s.recurrence.coeffs
    if all(c.denominator == 1 for c in cs):
        scale = lcm_of_denominators(s.initial)
        ci = [c.numerator for c in cs]
        out = [(a * scale).numerator for a in s.initial[:n_terms]]
        for n in range(d, n_terms):
            out.append(sum(ci[i] * out[n - 1 - i] for i in range(d)))
        return [Fraction(v, scale) for v in out]
    out = list(s.initial[:n_terms])
    for n in range(d, n_terms):
        out.append(sum((cs[i] * out[n - 1 - i] for i in range(d)), Fraction(0)))
    return out


def to_gf(s: CFiniteSequence) -> RationalFunction:
    den = s.recurrence.characteristic()
    num = (Polynomial(s.initial) * den).truncate(s.order)
    return normalize(num, den)


def from_gf(f: RationalFunction) -> CFiniteSequence:
    """Read the recurrence off the denominator of a proper GF.

    The zero function maps to the zero sequence of order 1.
    """
    if f.is_zero:
        return CFiniteSequence([1], [0])
    d = f.den.degree
    if not d or f.num.degree >= d:
        raise ValueError(
            "not a sequence generating function in canonical form "
            "(numerator degree must be below denominator degree)"
        )
    coeffs = [-f.den[i] for i in range(1, d + 1)]
    return CFiniteSequence(coeffs, series_expand(f, d))


# ---------------------------------------------------------------------------
# JSON forms:
#   {"recurrence": ["1","1","1"], "initial": ["0","1","1"]}
#   {"gf": {"num": "x", "den": "1-x-x^2-x^3"}}


def _gf_part(value: Any) -> Polynomial:
    if isinstance(value, list):
        return Polynomial([Fraction(str(c)) for c in value])
    return parse_poly(str(value))


def gf_from_json(obj: dict) -> RationalFunction:
    gf = obj["gf"]
    if isinstance(gf, str):
        return parse_rational(gf)
    return normalize(_gf_part(gf["num"]), _gf_part(gf["den"]))


def sequence_from_json(obj: dict) -> CFiniteSequence:
    if "gf" in obj:
        return from_gf(gf_from_json(obj))
    try:
        rec = [Fraction(str(c)) for c in obj["recurrence"]]
        init = [Fraction(str(c)) for c in obj["initial"]]
    except KeyError as exc:
        raise ValueError(f"sequence JSON is missing key {exc}") from None
    return CFiniteSequence(rec, init)


def sequence_to_json(s: CFiniteSequence) -> dict:
    return {
        "recurrence": [format_coeff(c) for c in s.recurrence.coeffs],
        "initial": [format_coeff(c) for c in s.initial],
    }


def gf_to_json(f: RationalFunction) -> dict:
    return {"num": coeffs_to_json(f.num), "den": coeffs_to_json(f.den)}


def load_sequence(path: str | Path) -> CFiniteSequence:
    return sequence_from_json(json.loads(Path(path).read_text()))
