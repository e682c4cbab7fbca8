"""Named sequences and the k-bonacci family."""

from __future__ import annotations

from .cfseq import CFiniteSequence
from .ratcore import Polynomial, RationalFunction, X, series_expand

__all__ = ["kbonacci", "kbonacci_gf", "named_sequence", "NAMES"]


def kbonacci_gf(k: int) -> RationalFunction:
    """``x / (1 - x - x^2 - ... - x^k)``."""
    if k < 1:
        raise ValueError(f"k-bonacci index must be >= 1, got {k}")
    return RationalFunction(X, Polynomial([1] + [-1] * k))


def kbonacci(k: int) -> CFiniteSequence:
    """The k-bonacci numbers, pinned down by their GF (t0 = 0, t1 = 1).

    ``k = 1`` is rejected: ``x/(1 - x)`` has numerator degree equal to its
    denominator degree, so 0, 1, 1, 1, ... only satisfies ``t(n) = t(n-1)``
    from ``n = 2`` on.  Use :func:`kbonacci_gf` for that member.
    """
    if k < 1:
        raise ValueError(f"k-bonacci index must be >= 1, got {k}")
    if k == 1:
        raise ValueError(
            "kbonacci(1) = x/(1-x) is not a proper C-finite GF; use kbonacci_gf(1)"
        )
    return CFiniteSequence([1] * k, series_expand(kbonacci_gf(k), k))


_REGISTRY = {
    "fibonacci": ([1, 1], [0, 1]),
    "lucas": ([1, 1], [2, 1]),
    "pell": ([2, 1], [0, 1]),
    "jacobsthal": ([1, 2], [0, 1]),
}

NAMES = sorted([*_REGISTRY, "tribonacci", "tetranacci", "ones"])


def named_sequence(name: str) -> CFiniteSequence:
    key = name.strip().lower()
    if key in _REGISTRY:
        rec, init = _REGISTRY[key]
        return CFiniteSequence(rec, init)
    if key == "tribonacci":
        return kbonacci(3)
    if key == "tetranacci":
        return kbonacci(4)
    if key in ("ones", "all-ones"):
        return CFiniteSequence([1], [1])
    raise ValueError(f"unknown sequence {name!r}; available: {', '.join(NAMES)}")
